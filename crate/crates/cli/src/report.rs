//! The `hf` and `bounds` reports and their text, CSV and JSON renderings.

use std::fmt::Write as _;

use kahler_core::formulas::{
    conic_hf, conjecture_probe, hp_bounds, hp_exact_cases, hyperplane_top_form, omega1_via_fattening,
    p1_hf, reducedness_test, ri_bounds, ConicSchemeSpec, DeltaSource, ExactCase, FormulaError,
    P1SchemeSpec,
};
use kahler_core::kaehler::max_form_degree;
use kahler_core::{FatPointScheme, HFTable, HomogPoly, KaehlerEngine, KaehlerError, OmegaHF};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("form degree {m} is out of range 0..={max}")]
    FormDegree { m: usize, max: usize },
    #[error(transparent)]
    Kaehler(#[from] KaehlerError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeSummary {
    pub n: usize,
    pub degree: u64,
    pub points: Vec<String>,
    pub r_w: usize,
    pub r_v: usize,
}

impl SchemeSummary {
    fn new(engine: &KaehlerEngine) -> SchemeSummary {
        let w = engine.scheme();
        SchemeSummary {
            n: w.n(),
            degree: w.degree(),
            points: w
                .points()
                .iter()
                .zip(w.mults())
                .map(|(p, m)| format!("{m}{p}"))
                .collect(),
            r_w: engine.r_w(),
            r_v: engine.r_v(),
        }
    }
}

/// Why a table is known to be complete.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `HF_W(degree) = deg W`.
    Degree { degree: usize, value: u64 },
    /// `HF(degree) = HF(degree + 1) = value` with `degree ≥ r_W + m`.
    Repeat { degree: usize, value: u64 },
}

impl Certificate {
    fn describe(&self) -> String {
        match self {
            Certificate::Degree { degree, value } => format!("HF({degree}) = deg W = {value}"),
            Certificate::Repeat { degree, value } => {
                format!("HF({degree}) = HF({}) = {value}", degree + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleTable {
    pub name: String,
    pub m: usize,
    pub relative: bool,
    /// Through the regularity index plus one repeat, or `0..=max_degree`.
    pub values: Vec<u64>,
    pub ri: Option<usize>,
    pub hp: Option<u64>,
    pub certificate: Option<Certificate>,
}

fn module_name(m: usize, relative: bool) -> String {
    match (m, relative) {
        (0, _) => "HF_W".to_string(),
        (m, false) => format!("Omega^{m}"),
        (m, true) => format!("Omega^{m}_rel"),
    }
}

impl ModuleTable {
    fn certified(o: &OmegaHF) -> ModuleTable {
        ModuleTable {
            name: module_name(o.m, o.relative),
            m: o.m,
            relative: o.relative,
            values: o.table.display_values(),
            ri: Some(o.ri),
            hp: Some(o.hp()),
            certificate: o.certificate.map(|(degree, value)| Certificate::Repeat { degree, value }),
        }
    }

    fn truncated(m: usize, relative: bool, values: Vec<u64>) -> ModuleTable {
        ModuleTable {
            name: module_name(m, relative),
            m,
            relative,
            values,
            ri: None,
            hp: None,
            certificate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub what: String,
    pub m: usize,
    pub relative: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulSummary {
    pub up_to_degree: usize,
    pub failing_degrees: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HfReport {
    pub scheme: SchemeSummary,
    pub modules: Vec<ModuleTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub koszul: Option<KoszulSummary>,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, Default)]
pub struct HfOptions {
    /// Form degrees; `m = 0` is `HF_W`. Empty means all.
    pub ms: Vec<usize>,
    pub relative: bool,
    pub max_degree: Option<usize>,
    pub conic: Option<HomogPoly>,
    pub hyperplane: Option<HomogPoly>,
}

/// Computes the requested tables, the Koszul check when every absolute table is
/// present, and every applicable closed-form comparison.
pub fn hf_report(w: &FatPointScheme, opts: &HfOptions) -> Result<HfReport, ReportError> {
    let n = w.n();
    let max = max_form_degree(n, opts.relative);
    let mut ms = if opts.ms.is_empty() {
        (0..=max).collect()
    } else {
        opts.ms.clone()
    };
    ms.sort_unstable();
    ms.dedup();
    if let Some(&m) = ms.iter().find(|&&m| m > max) {
        return Err(ReportError::FormDegree { m, max });
    }
    let engine = KaehlerEngine::new(w);
    let rel = opts.relative;

    let computed: Vec<Result<(ModuleTable, Option<OmegaHF>), KaehlerError>> = ms
        .par_iter()
        .map(|&m| {
            if m == 0 {
                return Ok((hf_w_table(w, opts.max_degree), None));
            }
            match opts.max_degree {
                Some(d) => {
                    let o = engine.omega_hf_truncated(m, rel, d)?;
                    Ok((ModuleTable::truncated(m, rel, o.table.prefix(d + 1)), None))
                }
                None => {
                    let o = engine.omega_hf(m, rel)?;
                    Ok((ModuleTable::certified(&o), Some(o)))
                }
            }
        })
        .collect();
    let mut modules = Vec::new();
    let mut tables: Vec<OmegaHF> = Vec::new();
    for c in computed {
        let (t, o) = c?;
        modules.push(t);
        tables.extend(o);
    }

    let mut koszul = None;
    if !rel && opts.max_degree.is_none() && (1..=n + 1).all(|m| ms.contains(&m)) {
        let up_to = tables.iter().map(|o| o.ri).max().unwrap_or(0) + 1;
        let failing_degrees = (0..=up_to).filter(|&d| !engine.koszul_check(d)).collect();
        koszul = Some(KoszulSummary {
            up_to_degree: up_to,
            failing_degrees,
        });
    }

    let mut comparisons = Vec::new();
    if opts.max_degree.is_none() {
        for o in &tables {
            comparisons.extend(compare_with_formulas(w, o, opts)?);
        }
    }
    Ok(HfReport {
        scheme: SchemeSummary::new(&engine),
        modules,
        koszul,
        comparisons,
    })
}

fn hf_w_table(w: &FatPointScheme, max_degree: Option<usize>) -> ModuleTable {
    match max_degree {
        Some(d) => ModuleTable::truncated(
            0,
            false,
            (0..=d as i64).map(|i| w.hilbert_function(i)).collect(),
        ),
        None => {
            let t = w.hf_table();
            ModuleTable {
                name: module_name(0, false),
                m: 0,
                relative: false,
                values: t.display_values(),
                ri: Some(t.stable_from()),
                hp: Some(t.hp()),
                certificate: Some(Certificate::Degree {
                    degree: t.stable_from(),
                    value: t.hp(),
                }),
            }
        }
    }
}

fn p1_spec(w: &FatPointScheme) -> Option<P1SchemeSpec> {
    if w.n() != 1 {
        return None;
    }
    let roots = w.points().iter().map(|p| p.affine()[0].clone()).collect();
    P1SchemeSpec::new(roots, w.mults().to_vec()).ok()
}

fn compare_with_formulas(
    w: &FatPointScheme,
    o: &OmegaHF,
    opts: &HfOptions,
) -> Result<Vec<Comparison>, ReportError> {
    let mut out = Vec::new();
    let mut push = |what: &str, t: &HFTable| {
        out.push(Comparison {
            what: what.to_string(),
            m: o.m,
            relative: o.relative,
            agrees: *t == o.table,
        })
    };
    if let Some(spec) = p1_spec(w) {
        push("P^1 closed form", &p1_hf(&spec, o.m, o.relative)?);
    }
    if o.m == 1 && !o.relative {
        push("fattening identity", &omega1_via_fattening(w));
    }
    if o.m == 1 && o.relative {
        let abs = KaehlerEngine::new(w).omega_hf(1, false)?;
        let hw = w.hf_table();
        let len = abs.table.stable_from().max(hw.stable_from() + 1) + 2;
        let t = HFTable::from_values(
            (0..len as i64)
                .map(|i| abs.value(i) - hw.value(i - 1))
                .collect(),
        );
        push("relative identity", &t);
    }
    if !o.relative && w.n() == 2 && o.m <= 3 {
        if let Some(conic) = &opts.conic {
            let spec = ConicSchemeSpec::new(conic.clone(), w.clone())?;
            if o.m == 1 || spec.nu().is_some() {
                push("conic closed form", &conic_hf(&spec, o.m, DeltaSource::Printed)?);
                if o.m > 1 && spec.nu() != Some(1) {
                    push(
                        "conic closed form, corrections from generators",
                        &conic_hf(&spec, o.m, DeltaSource::Generators)?,
                    );
                }
            }
        }
    }
    if !o.relative && o.m == w.n() + 1 {
        if let Some(h) = &opts.hyperplane {
            push("hyperplane top form", &hyperplane_top_form(w, h)?);
        }
    }
    Ok(out)
}

fn values_text(v: &[u64], truncated: bool) -> String {
    let s: Vec<String> = v.iter().map(u64::to_string).collect();
    if truncated {
        s.join(" ")
    } else {
        format!("{} ...", s.join(" "))
    }
}

impl HfReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        write_summary(&mut out, &self.scheme);
        out.push('\n');
        let name_w = self.modules.iter().map(|t| t.name.len()).max().unwrap_or(0);
        let vals: Vec<String> = self
            .modules
            .iter()
            .map(|t| values_text(&t.values, t.certificate.is_none()))
            .collect();
        let val_w = vals.iter().map(String::len).max().unwrap_or(0);
        for (t, v) in self.modules.iter().zip(&vals) {
            let tail = match (&t.certificate, t.ri, t.hp) {
                (Some(c), Some(ri), Some(hp)) => {
                    format!("ri {ri}  hp {hp}  certificate {}", c.describe())
                }
                _ => format!("truncated at degree {}, no certificate", t.values.len() - 1),
            };
            let _ = writeln!(out, "{:name_w$}  {:val_w$}  {tail}", t.name, v);
        }
        if let Some(k) = &self.koszul {
            out.push('\n');
            if k.failing_degrees.is_empty() {
                let _ = writeln!(out, "koszul    alternating sum holds in degrees 0..={}", k.up_to_degree);
            } else {
                let _ = writeln!(out, "koszul    FAILS in degrees {:?}", k.failing_degrees);
            }
        }
        if !self.comparisons.is_empty() && self.koszul.is_none() {
            out.push('\n');
        }
        for c in &self.comparisons {
            let _ = writeln!(
                out,
                "compare   {} vs {}: {}",
                module_name(c.m, c.relative),
                c.what,
                if c.agrees { "agrees" } else { "DIFFERS" }
            );
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (k, t) in self.modules.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            let meta = match (&t.certificate, t.ri, t.hp) {
                (Some(c), Some(ri), Some(hp)) => format!(" ri={ri} hp={hp} certificate={}", c.describe()),
                _ => " truncated".to_string(),
            };
            let _ = writeln!(out, "# {}{meta}", t.name);
            out.push_str("degree,value\n");
            for (d, v) in t.values.iter().enumerate() {
                let _ = writeln!(out, "{d},{v}");
            }
        }
        out
    }
}

fn write_summary(out: &mut String, s: &SchemeSummary) {
    let _ = writeln!(out, "scheme    P^{}: {}", s.n, s.points.join(" + "));
    let _ = writeln!(out, "degree    {}", s.degree);
    let _ = writeln!(out, "r_W       {}", s.r_w);
    let _ = writeln!(out, "r_V       {}", s.r_v);
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Attained,
    Satisfied,
    Violated,
}

impl BoundStatus {
    fn of(bound: u64, value: u64) -> BoundStatus {
        match value.cmp(&bound) {
            std::cmp::Ordering::Equal => BoundStatus::Attained,
            std::cmp::Ordering::Less => BoundStatus::Satisfied,
            std::cmp::Ordering::Greater => BoundStatus::Violated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiBoundLine {
    pub name: &'static str,
    pub bound: usize,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormBounds {
    pub m: usize,
    pub relative: bool,
    pub hp: u64,
    pub hp_lower: u64,
    pub hp_upper: u64,
    pub hp_within: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hp_exact: Option<(u64, String)>,
    pub ri: usize,
    pub ri_bounds: Vec<RiBoundLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub scheme: SchemeSummary,
    pub forms: Vec<FormBounds>,
    pub reduced: bool,
    pub hp_top: u64,
    pub reducedness_consistent: bool,
    /// Experimental: `HP(Omega^{n+1})` against `deg Y`, `Y = Σ (m_j - 1) P_j`.
    pub conjecture_hp_y: u64,
    pub conjecture_agrees: bool,
    pub ok: bool,
}

fn exact_case_name(c: ExactCase) -> &'static str {
    match c {
        ExactCase::Reduced => "reduced scheme",
        ExactCase::EquimultipleTopForm => "equimultiple top form",
        ExactCase::PlaneTwoForms => "equimultiple two-forms in P^2",
    }
}

/// Every bound for every form degree, absolute and relative, against the engine.
pub fn bounds_report(w: &FatPointScheme) -> Result<BoundsReport, ReportError> {
    let n = w.n();
    let engine = KaehlerEngine::new(w);
    let ri1 = engine.omega_hf(1, false)?.ri;
    let jobs: Vec<(usize, bool)> = (1..=n + 1)
        .map(|m| (m, false))
        .chain((1..=n).map(|m| (m, true)))
        .collect();
    let forms = jobs
        .par_iter()
        .map(|&(m, relative)| -> Result<FormBounds, ReportError> {
            let o = engine.omega_hf(m, relative)?;
            let hp = o.hp();
            let b = hp_bounds(w, m, relative)?;
            let hp_exact = if relative {
                None
            } else {
                hp_exact_cases(w, m).map(|(v, c)| (v, exact_case_name(c).to_string()))
            };
            let rb = ri_bounds(w, m, relative, Some(ri1))?;
            let ri_bounds = [
                ("fat points", rb.fat),
                ("general position", rb.general_position),
                ("reduced", rb.reduced),
                ("via ri(Omega^1)", rb.via_omega1),
            ]
            .into_iter()
            .filter_map(|(name, b)| {
                b.map(|bound| RiBoundLine {
                    name,
                    bound,
                    status: BoundStatus::of(bound as u64, o.ri as u64),
                })
            })
            .collect();
            Ok(FormBounds {
                m,
                relative,
                hp,
                hp_lower: b.lower,
                hp_upper: b.upper,
                hp_within: b.contains(hp),
                hp_exact,
                ri: o.ri,
                ri_bounds,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let red = reducedness_test(&engine)?;
    let probe = conjecture_probe(&engine)?;
    let ok = red.consistent
        && forms.iter().all(|f| {
            f.hp_within
                && f.hp_exact.as_ref().is_none_or(|(v, _)| *v == f.hp)
                && f.ri_bounds.iter().all(|b| b.status != BoundStatus::Violated)
        });
    Ok(BoundsReport {
        scheme: SchemeSummary::new(&engine),
        forms,
        reduced: red.reduced,
        hp_top: red.hp_top,
        reducedness_consistent: red.consistent,
        conjecture_hp_y: probe.hp_y,
        conjecture_agrees: probe.agree,
        ok,
    })
}

impl BoundsReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Text => self.text(),
            Format::Csv => self.csv(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        write_summary(&mut out, &self.scheme);
        for f in &self.forms {
            out.push('\n');
            let _ = writeln!(out, "{}", module_name(f.m, f.relative));
            let _ = writeln!(
                out,
                "  hp {}  bounds [{}, {}]  {}",
                f.hp,
                f.hp_lower,
                f.hp_upper,
                if f.hp_within { "within" } else { "OUTSIDE" }
            );
            if let Some((v, name)) = &f.hp_exact {
                let verdict = if *v == f.hp { "agrees" } else { "DIFFERS" };
                let _ = writeln!(out, "  hp exact value {v} ({name})  {verdict}");
            }
            let _ = writeln!(out, "  ri {}", f.ri);
            for b in &f.ri_bounds {
                let _ = writeln!(out, "    {:18} {:3}  {:?}", b.name, b.bound, b.status);
            }
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "reduced            {}  (hp of Omega^{} = {}, {})",
            self.reduced,
            self.scheme.n + 1,
            self.hp_top,
            if self.reducedness_consistent { "consistent" } else { "INCONSISTENT" }
        );
        let _ = writeln!(
            out,
            "conjecture probe   hp top form {} vs deg Y {}: {} (experimental)",
            self.hp_top,
            self.conjecture_hp_y,
            if self.conjecture_agrees { "agree" } else { "differ" }
        );
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("module,kind,name,bound,value,status\n");
        for f in &self.forms {
            let name = module_name(f.m, f.relative);
            let status = if f.hp_within { "within" } else { "outside" };
            let _ = writeln!(out, "{name},hp,lower,{},{},{status}", f.hp_lower, f.hp);
            let _ = writeln!(out, "{name},hp,upper,{},{},{status}", f.hp_upper, f.hp);
            if let Some((v, c)) = &f.hp_exact {
                let st = if *v == f.hp { "attained" } else { "violated" };
                let _ = writeln!(out, "{name},hp,{c},{v},{},{st}", f.hp);
            }
            for b in &f.ri_bounds {
                let st = serde_json::to_value(b.status).expect("serializable");
                let _ = writeln!(out, "{name},ri,{},{},{},{}", b.name, b.bound, f.ri, st.as_str().unwrap_or(""));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_point() -> FatPointScheme {
        FatPointScheme::from_i64(2, &[(&[1, 0, 0], 2)]).unwrap()
    }

    #[test]
    fn default_tables_and_koszul() {
        let r = hf_report(&double_point(), &HfOptions::default()).unwrap();
        let names: Vec<&str> = r.modules.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names, ["HF_W", "Omega^1", "Omega^2", "Omega^3"]);
        assert_eq!(r.modules[0].values, [1, 3, 3]);
        assert_eq!(r.koszul.as_ref().unwrap().failing_degrees, Vec::<usize>::new());
        assert!(r.comparisons.iter().all(|c| c.agrees));
    }

    #[test]
    fn truncation_drops_certificates() {
        let opts = HfOptions {
            ms: vec![1],
            max_degree: Some(5),
            ..HfOptions::default()
        };
        let r = hf_report(&double_point(), &opts).unwrap();
        assert_eq!(r.modules[0].values.len(), 6);
        assert!(r.modules[0].certificate.is_none());
        assert!(r.render(Format::Text).contains("no certificate"));
    }

    #[test]
    fn rejects_large_m() {
        let opts = HfOptions {
            ms: vec![3],
            relative: true,
            ..HfOptions::default()
        };
        assert!(matches!(
            hf_report(&double_point(), &opts),
            Err(ReportError::FormDegree { m: 3, max: 2 })
        ));
    }

    #[test]
    fn bounds_for_double_point() {
        let b = bounds_report(&double_point()).unwrap();
        let one = &b.forms[0];
        assert_eq!((one.hp_lower, one.hp_upper, one.hp), (3, 9, 6));
        assert!(b.ok && !b.reduced && b.reducedness_consistent);
    }

    #[test]
    fn csv_layout() {
        let opts = HfOptions {
            ms: vec![0],
            ..HfOptions::default()
        };
        let r = hf_report(&double_point(), &opts).unwrap();
        assert_eq!(
            r.render(Format::Csv),
            "# HF_W ri=1 hp=3 certificate=HF(1) = deg W = 3\ndegree,value\n0,1\n1,3\n2,3\n"
        );
    }
}
