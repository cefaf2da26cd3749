//! JSON scheme descriptions.
//!
//! ```json
//! {"n": 2, "points": [{"coords": ["1", "1", "0"], "mult": 2}]}
//! ```
//!
//! Coordinates are exact rational strings (`"3/2"` is allowed). Golden files add
//! a label, a comment, optional curve data and the expected tables.

use std::collections::BTreeMap;
use std::path::Path;

use kahler_core::exactla::parse_rational;
use kahler_core::{FatPointScheme, HFTable, HomogPoly, SchemeError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub coords: Vec<String>,
    pub mult: u32,
}

/// Expected values for a golden file. Tables are printed prefixes ending in at
/// least one repeat of the stable value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hf: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub omega: BTreeMap<usize, Vec<u64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relative: BTreeMap<usize, Vec<u64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ri: BTreeMap<usize, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_w: Option<usize>,
    /// Regularity index of the fattening.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_v: Option<usize>,
    /// Hilbert polynomial of the top form module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hp_top: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub n: usize,
    pub points: Vec<PointEntry>,
    /// A nonsingular conic through the support, for `n = 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conic: Option<String>,
    /// A hyperplane containing the support.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplane: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed scheme file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("point {index}: bad coordinate {value:?}")]
    Coordinate { index: usize, value: String },
    #[error("bad polynomial {text:?}: {reason}")]
    Polynomial { text: String, reason: String },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

impl LoadError {
    /// True for the one input error that is about the chart rather than syntax.
    pub fn is_coordinate_assumption(&self) -> bool {
        matches!(self, LoadError::Scheme(SchemeError::OnHyperplaneX0 { .. }))
    }
}

impl SchemeFile {
    pub fn parse(text: &str) -> Result<SchemeFile, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<SchemeFile, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        SchemeFile::parse(&text)
    }

    pub fn scheme(&self) -> Result<FatPointScheme, LoadError> {
        let mut pts = Vec::with_capacity(self.points.len());
        for (index, p) in self.points.iter().enumerate() {
            let coords = p
                .coords
                .iter()
                .map(|c| {
                    parse_rational(c).map_err(|_| LoadError::Coordinate {
                        index,
                        value: c.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            pts.push((coords, p.mult));
        }
        Ok(FatPointScheme::new(self.n, pts)?)
    }

    fn poly(&self, text: &Option<String>) -> Result<Option<HomogPoly>, LoadError> {
        text.as_ref()
            .map(|t| {
                HomogPoly::parse(t, self.n + 1).map_err(|e| LoadError::Polynomial {
                    text: t.clone(),
                    reason: e.to_string(),
                })
            })
            .transpose()
    }

    pub fn conic_poly(&self) -> Result<Option<HomogPoly>, LoadError> {
        self.poly(&self.conic)
    }

    pub fn hyperplane_poly(&self) -> Result<Option<HomogPoly>, LoadError> {
        self.poly(&self.hyperplane)
    }

    /// A file for `w` without metadata.
    pub fn from_scheme(w: &FatPointScheme) -> SchemeFile {
        SchemeFile {
            label: None,
            comment: None,
            n: w.n(),
            points: w
                .points()
                .iter()
                .zip(w.mults())
                .map(|(p, &mult)| PointEntry {
                    coords: p.coords().iter().map(|x| x.to_string()).collect(),
                    mult,
                })
                .collect(),
            conic: None,
            hyperplane: None,
            expected: None,
        }
    }
}

/// Compares a printed prefix with a computed table as functions on `Z`.
pub fn table_matches(expected: &[u64], got: &HFTable) -> bool {
    HFTable::from_values(expected.to_vec()) == *got
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"n": 2, "points": [{"coords": ["1", "3/2", "0"], "mult": 2}, {"coords": ["2", "0", "1"], "mult": 1}]}"#;
        let f = SchemeFile::parse(text).unwrap();
        let w = f.scheme().unwrap();
        assert_eq!(w.degree(), 4);
        let again = SchemeFile::from_scheme(&w);
        assert_eq!(again.points[1].coords, ["1", "0", "1/2"]);
        let back = SchemeFile::parse(&serde_json::to_string(&again).unwrap()).unwrap();
        assert_eq!(back.scheme().unwrap(), w);
    }

    #[test]
    fn errors() {
        assert!(matches!(SchemeFile::parse("{\"n\": 2}"), Err(LoadError::Json(_))));
        assert!(matches!(
            SchemeFile::parse(r#"{"n": 1, "points": [], "extra": 1}"#),
            Err(LoadError::Json(_))
        ));
        let bad = SchemeFile::parse(r#"{"n": 1, "points": [{"coords": ["1", "x"], "mult": 1}]}"#).unwrap();
        assert!(matches!(bad.scheme(), Err(LoadError::Coordinate { index: 0, .. })));
        let chart = SchemeFile::parse(r#"{"n": 1, "points": [{"coords": ["0", "1"], "mult": 1}]}"#).unwrap();
        let err = chart.scheme().unwrap_err();
        assert!(err.is_coordinate_assumption());
    }

    #[test]
    fn tables_compare_as_functions() {
        let t = HFTable::from_values(vec![1, 3, 3]);
        assert!(table_matches(&[1, 3, 3, 3, 3], &t));
        assert!(table_matches(&[1, 3], &t));
        assert!(!table_matches(&[1, 3, 4], &t));
    }
}
