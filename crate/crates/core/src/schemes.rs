//! Fat point schemes `W = m_1 P_1 + ... + m_s P_s` in `P^n` and their Hilbert functions.
//!
//! Membership in `℘^m` is tested by jets: in characteristic zero a form lies in
//! `℘^m` exactly when all its Taylor coefficients of order `< m` vanish at `P`.
//! Since every point has `x_0 = 1`, these are computed in the affine chart
//! `X_0 = 1`, where the Taylor coefficient of `y^β` in `(p + y)^α` is
//! `Π C(α_k, β_k) p_k^(α_k - β_k)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactla::{
    clear_denominators, common_denominator, int_kernel_basis, int_rank, make_primitive,
    rational_rank, Rational,
};
use crate::polyring::{binom, exponents_of_degree, slice_dim, DegreeSlice, HomogPoly, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("a scheme needs at least one point")]
    Empty,
    #[error("point {index} is the zero vector")]
    ZeroVector { index: usize },
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("point {index} has multiplicity 0")]
    ZeroMultiplicity { index: usize },
    #[error(
        "point {index} lies on the hyperplane X0 = 0; every point must have a nonzero \
         first coordinate (apply a linear change of coordinates first)"
    )]
    OnHyperplaneX0 { index: usize },
    #[error("coordinate change matrix must be an invertible {expected}x{expected} matrix")]
    BadCoordinateChange { expected: usize },
    #[error("ambient dimension must be at least 1")]
    BadDimension,
}

/// A point of `P^n` with rational coordinates, scaled so that its first
/// nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Rational>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rational>) -> Option<ProjPoint> {
        let lead = coords.iter().find(|c| !c.is_zero())?.clone();
        Some(ProjPoint {
            coords: coords.into_iter().map(|c| c / &lead).collect(),
        })
    }

    pub fn from_i64(coords: &[i64]) -> Option<ProjPoint> {
        Self::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Coordinates `(p_1, ..., p_n)` in the chart `X_0 = 1`.
    pub fn affine(&self) -> &[Rational] {
        &self.coords[1..]
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", c.join(":"))
    }
}

/// An eventually constant integer sequence indexed from degree 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HFTable {
    values: Vec<u64>,
    stable_from: usize,
    hp: u64,
}

impl HFTable {
    /// Table whose last entry is taken as the eventual value. Trailing repeats
    /// are dropped, so equal functions give equal tables.
    pub fn from_values(mut values: Vec<u64>) -> HFTable {
        let hp = values.last().copied().unwrap_or(0);
        let mut stable_from = values.len().saturating_sub(1);
        while stable_from > 0 && values[stable_from - 1] == hp {
            stable_from -= 1;
        }
        values.truncate(stable_from + 1);
        if values.is_empty() {
            values.push(0);
        }
        HFTable {
            values,
            stable_from,
            hp,
        }
    }

    /// Values for degrees `0..=stable_from`.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Value at degree `i`: zero for negative `i`, the constant value past the table.
    pub fn value(&self, i: i64) -> u64 {
        if i < 0 {
            0
        } else {
            self.values.get(i as usize).copied().unwrap_or(self.hp)
        }
    }

    /// Least degree from which the table is constant.
    pub fn stable_from(&self) -> usize {
        self.stable_from
    }

    /// The constant value (the Hilbert polynomial).
    pub fn hp(&self) -> u64 {
        self.hp
    }

    /// Values through the stabilization degree plus one repeat, the usual way of
    /// writing a Hilbert function.
    pub fn display_values(&self) -> Vec<u64> {
        self.prefix(self.stable_from + 2)
    }

    /// The first `len` values, padded with the constant value.
    pub fn prefix(&self, len: usize) -> Vec<u64> {
        (0..len as i64).map(|i| self.value(i)).collect()
    }
}

impl fmt::Display for HFTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "{} ...", v.join(" "))
    }
}

/// Layout of the jet coordinates of a scheme: for each point, the multi-indices
/// `β ∈ N^n` with `|β| < m_P`, grouped by order, then the indices with `|β| = m_P`
/// (the "top" jets that the fattening adds).
#[derive(Debug, Clone)]
pub struct JetLayout {
    n: usize,
    /// `lower[j]`: multi-indices of order `< m_j` at point `j`.
    pub lower: Vec<Vec<Vec<u32>>>,
    /// `top[j]`: multi-indices of order exactly `m_j` at point `j`.
    pub top: Vec<Vec<Vec<u32>>>,
    /// integer numerators `a_k` and common denominator `b` of each point, `p_k = a_k / b`.
    nums: Vec<Vec<BigInt>>,
    dens: Vec<BigInt>,
}

impl JetLayout {
    fn new(w: &FatPointScheme) -> JetLayout {
        let n = w.n;
        let mut lower = Vec::new();
        let mut top = Vec::new();
        let mut nums = Vec::new();
        let mut dens = Vec::new();
        for (p, &m) in w.points.iter().zip(&w.mults) {
            let mut l = Vec::new();
            for t in 0..m {
                l.extend(exponents_of_degree(n, t));
            }
            lower.push(l);
            top.push(exponents_of_degree(n, m));
            let b = common_denominator(p.affine());
            nums.push(p.affine().iter().map(|x| x.numer() * (&b / x.denom())).collect());
            dens.push(b);
        }
        JetLayout {
            n,
            lower,
            top,
            nums,
            dens,
        }
    }

    pub fn lower_len(&self) -> usize {
        self.lower.iter().map(Vec::len).sum()
    }

    pub fn top_len(&self) -> usize {
        self.top.iter().map(Vec::len).sum()
    }

    /// Numerators and denominator of the affine coordinates of point `j`.
    pub fn point_integers(&self, j: usize) -> (&[BigInt], &BigInt) {
        (&self.nums[j], &self.dens[j])
    }

    /// Rows of jet values of the monomials of degree `e`, one row per monomial of
    /// `S_e` in slice order. Columns are the lower jets of every point, followed
    /// by the top jets of every point when `with_top` is set. The block of point
    /// `j` is scaled by `b_j^e` so that all entries are integers.
    pub fn monomial_rows(&self, e: u32, with_top: bool) -> Vec<Vec<BigInt>> {
        let slice = DegreeSlice::new(self.n + 1, e);
        let ncols = self.lower_len() + if with_top { self.top_len() } else { 0 };
        // powers[j][k][t] = a_{jk}^t, bpow[j][t] = b_j^t
        let npts = self.nums.len();
        let powers: Vec<Vec<Vec<BigInt>>> = (0..npts)
            .map(|j| {
                self.nums[j]
                    .iter()
                    .map(|a| power_table(a, e))
                    .collect()
            })
            .collect();
        let bpow: Vec<Vec<BigInt>> = self.dens.iter().map(|b| power_table(b, e)).collect();
        let binoms = binomial_table(e);

        slice
            .monomials()
            .iter()
            .map(|mono| {
                let alpha = &mono.exponents()[1..];
                let affine_deg: u32 = alpha.iter().sum();
                let mut row = Vec::with_capacity(ncols);
                let mut push_block = |betas: &[Vec<u32>], j: usize| {
                    for beta in betas {
                        row.push(taylor_entry(
                            alpha,
                            beta,
                            e - affine_deg,
                            &powers[j],
                            &bpow[j],
                            &binoms,
                        ));
                    }
                };
                for j in 0..npts {
                    push_block(&self.lower[j], j);
                }
                if with_top {
                    for j in 0..npts {
                        push_block(&self.top[j], j);
                    }
                }
                row
            })
            .collect()
    }
}

fn power_table(a: &BigInt, e: u32) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(e as usize + 1);
    let mut x = BigInt::one();
    for _ in 0..=e {
        v.push(x.clone());
        x *= a;
    }
    v
}

fn binomial_table(e: u32) -> Vec<Vec<BigInt>> {
    (0..=e as u64)
        .map(|a| (0..=a).map(|k| BigInt::from(binom(a, k))).collect())
        .collect()
}

// Coefficient of y^β in b^e (p + y)^α with p = a / b, where α ranges over the
// affine part of a degree-e monomial and `x0_exp = e - |α|`.
fn taylor_entry(
    alpha: &[u32],
    beta: &[u32],
    x0_exp: u32,
    powers: &[Vec<BigInt>],
    bpow: &[BigInt],
    binoms: &[Vec<BigInt>],
) -> BigInt {
    let mut v = BigInt::one();
    let mut beta_deg = 0;
    for (k, (&a, &b)) in alpha.iter().zip(beta).enumerate() {
        if b > a {
            return BigInt::zero();
        }
        beta_deg += b;
        if b > 0 {
            v *= &binoms[a as usize][b as usize];
        }
        if a > b {
            v *= &powers[k][(a - b) as usize];
        }
    }
    let bexp = x0_exp + beta_deg;
    if bexp > 0 {
        v *= &bpow[bexp as usize];
    }
    v
}

/// A fat point scheme with all points in the chart `X_0 ≠ 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct FatPointScheme {
    n: usize,
    points: Vec<ProjPoint>,
    mults: Vec<u32>,
}

impl fmt::Debug for FatPointScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .zip(&self.mults)
            .map(|(p, m)| format!("{m}{p}"))
            .collect();
        write!(f, "P^{}: {}", self.n, parts.join(" + "))
    }
}

impl FatPointScheme {
    /// Build a scheme from projective coordinates and multiplicities.
    pub fn new(
        n: usize,
        points: impl IntoIterator<Item = (Vec<Rational>, u32)>,
    ) -> Result<FatPointScheme, SchemeError> {
        if n == 0 {
            return Err(SchemeError::BadDimension);
        }
        let mut pts = Vec::new();
        let mut mults = Vec::new();
        for (index, (coords, m)) in points.into_iter().enumerate() {
            if coords.len() != n + 1 {
                return Err(SchemeError::DimensionMismatch {
                    index,
                    expected: n + 1,
                    got: coords.len(),
                });
            }
            if m == 0 {
                return Err(SchemeError::ZeroMultiplicity { index });
            }
            let p = ProjPoint::new(coords).ok_or(SchemeError::ZeroVector { index })?;
            if p.coords[0].is_zero() {
                return Err(SchemeError::OnHyperplaneX0 { index });
            }
            if let Some(first) = pts.iter().position(|q| *q == p) {
                return Err(SchemeError::DuplicatePoint {
                    first,
                    second: index,
                });
            }
            pts.push(p);
            mults.push(m);
        }
        if pts.is_empty() {
            return Err(SchemeError::Empty);
        }
        Ok(FatPointScheme {
            n,
            points: pts,
            mults,
        })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_i64(n: usize, points: &[(&[i64], u32)]) -> Result<FatPointScheme, SchemeError> {
        Self::new(
            n,
            points.iter().map(|(c, m)| {
                (
                    c.iter().map(|&x| Rational::from_integer(x.into())).collect(),
                    *m,
                )
            }),
        )
    }

    /// Apply the invertible linear change of coordinates `x ↦ A x` to the points
    /// `coords` (given in arbitrary position) before building the scheme.
    pub fn with_coordinate_change(
        n: usize,
        a: &[Vec<Rational>],
        points: impl IntoIterator<Item = (Vec<Rational>, u32)>,
    ) -> Result<FatPointScheme, SchemeError> {
        let bad = SchemeError::BadCoordinateChange { expected: n + 1 };
        if a.len() != n + 1 || a.iter().any(|r| r.len() != n + 1) {
            return Err(bad);
        }
        if rational_rank(a, n + 1) != n + 1 {
            return Err(bad);
        }
        let moved: Vec<(Vec<Rational>, u32)> = points
            .into_iter()
            .map(|(c, m)| {
                let image = a
                    .iter()
                    .map(|row| row.iter().zip(&c).map(|(x, y)| x * y).sum())
                    .collect();
                (image, m)
            })
            .collect();
        Self::new(n, moved)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.mults.iter().all(|&m| m == 1)
    }

    /// Common multiplicity if the scheme is equimultiple.
    pub fn equimultiple(&self) -> Option<u32> {
        let m = self.mults[0];
        self.mults.iter().all(|&x| x == m).then_some(m)
    }

    /// `deg W = Σ C(m_j + n - 1, n)`.
    pub fn degree(&self) -> u64 {
        self.mults
            .iter()
            .map(|&m| binom(m as u64 + self.n as u64 - 1, self.n as u64))
            .sum()
    }

    /// The same points with new multiplicities; points with multiplicity 0 are
    /// dropped. Returns `None` if nothing is left.
    pub fn with_mults(&self, mults: &[u32]) -> Option<FatPointScheme> {
        assert_eq!(mults.len(), self.points.len());
        let (points, mults): (Vec<_>, Vec<_>) = self
            .points
            .iter()
            .cloned()
            .zip(mults.iter().copied())
            .filter(|&(_, m)| m > 0)
            .unzip();
        if points.is_empty() {
            None
        } else {
            Some(FatPointScheme {
                n: self.n,
                points,
                mults,
            })
        }
    }

    /// Every multiplicity shifted by `k` (negative shifts drop exhausted points).
    pub fn shifted(&self, k: i64) -> Option<FatPointScheme> {
        let m: Vec<u32> = self
            .mults
            .iter()
            .map(|&m| (m as i64 + k).max(0) as u32)
            .collect();
        self.with_mults(&m)
    }

    /// The fattening `V`: every multiplicity raised by one.
    pub fn fattening(&self) -> FatPointScheme {
        self.shifted(1).expect("fattening is nonempty")
    }

    /// The reduced support `X`.
    pub fn support(&self) -> FatPointScheme {
        self.with_mults(&vec![1; self.points.len()]).expect("nonempty")
    }

    pub fn jet_layout(&self) -> JetLayout {
        JetLayout::new(self)
    }

    /// Number of jet conditions, which equals `deg W`.
    pub fn num_conditions(&self) -> usize {
        self.degree() as usize
    }

    /// Jet conditions as rows over the monomials of `S_d`.
    fn condition_rows(&self, d: u32) -> Vec<Vec<BigInt>> {
        let mt = self.jet_layout().monomial_rows(d, false);
        transpose(&mt, self.num_conditions())
    }

    /// Basis of `(I_W)_d` as primitive integral forms.
    pub fn ideal_slice(&self, d: u32) -> Vec<HomogPoly> {
        let slice = DegreeSlice::new(self.n + 1, d);
        int_kernel_basis(self.condition_rows(d), slice.len())
            .into_iter()
            .map(|v| {
                let c: Vec<Rational> = v.into_iter().map(Rational::from_integer).collect();
                slice.polynomial(&c)
            })
            .collect()
    }

    /// The same scheme after the translation `x ↦ x - p` of the affine chart
    /// that moves a point of highest multiplicity to `(1:0:…:0)`. Its jet block
    /// becomes a coordinate projection, which keeps elimination entries small.
    fn centered(&self) -> FatPointScheme {
        let (j, _) = self
            .mults
            .iter()
            .enumerate()
            .max_by_key(|&(j, &m)| (m, std::cmp::Reverse(j)))
            .expect("nonempty");
        let c = self.points[j].affine().to_vec();
        let one = Rational::one();
        FatPointScheme {
            n: self.n,
            points: self
                .points
                .iter()
                .map(|p| {
                    let mut v = vec![one.clone()];
                    v.extend(p.affine().iter().zip(&c).map(|(x, y)| x - y));
                    ProjPoint::new(v).expect("first coordinate is 1")
                })
                .collect(),
            mults: self.mults.clone(),
        }
    }

    /// `HF_W(d) = dim S_d - dim (I_W)_d`; zero for negative `d`.
    pub fn hilbert_function(&self, d: i64) -> u64 {
        if d < 0 {
            return 0;
        }
        let full = slice_dim(self.n, d);
        let deg = self.degree();
        // rank is at most min(#monomials, #conditions)
        let rows = self.centered().jet_layout().monomial_rows(d as u32, false);
        let r = int_rank(rows, self.num_conditions()) as u64;
        debug_assert!(r <= full.min(deg));
        r
    }

    /// Hilbert function from degree 0 up to the regularity index plus one.
    pub fn hf_table(&self) -> HFTable {
        let deg = self.degree();
        let cap = self.scan_cap();
        let mut values = Vec::new();
        for d in 0..=cap {
            let v = self.hilbert_function(d as i64);
            values.push(v);
            if v == deg {
                values.push(v);
                return HFTable::from_values(values);
            }
        }
        panic!("Hilbert function of {self:?} did not reach deg W by degree {cap}");
    }

    fn scan_cap(&self) -> usize {
        self.mults.iter().map(|&m| m as usize).sum::<usize>() + self.points.len() + self.n
    }

    /// Least `d` with `HF_W(d) = deg W`.
    pub fn regularity_index(&self) -> usize {
        self.hf_table().stable_from()
    }

    /// Least degree of a nonzero form in `I_W`.
    pub fn initial_degree(&self) -> u32 {
        let mut d = 0;
        loop {
            if (self.hilbert_function(d as i64)) < slice_dim(self.n, d as i64) {
                return d;
            }
            d += 1;
        }
    }

    /// Number of minimal generators of `I_W` in each degree `α_W ≤ d ≤ up_to`,
    /// computed as `dim (I_W)_d - dim (𝔐 I_W)_d`. Degrees with no generator are omitted.
    pub fn generator_degrees(&self, up_to: u32) -> Result<BTreeMap<u32, usize>, GeneratorError> {
        let alpha = self.initial_degree();
        if up_to < alpha {
            return Err(GeneratorError { up_to, alpha });
        }
        let mut out = BTreeMap::new();
        let mut prev: Vec<HomogPoly> = Vec::new();
        for d in alpha..=up_to {
            let cur = self.ideal_slice(d);
            let shifted = maximal_ideal_times(&prev, self.n + 1, d);
            let k = cur.len() - shifted;
            if k > 0 {
                out.insert(d, k);
            }
            prev = cur;
        }
        Ok(out)
    }

    /// Jets of order `< m_j` of an explicit form at every point, in the order of
    /// [`JetLayout::lower`].
    pub fn jet_vector(&self, f: &HomogPoly) -> Vec<Rational> {
        let layout = self.jet_layout();
        let mut out = Vec::with_capacity(layout.lower_len());
        for (j, p) in self.points.iter().enumerate() {
            for beta in &layout.lower[j] {
                out.push(taylor_coefficient(f, p.affine(), beta));
            }
        }
        out
    }

    /// True when every subset of `min(s, n + 1)` support points is linearly
    /// independent, i.e. no `n + 1` points lie on a hyperplane.
    pub fn in_general_position(&self) -> bool {
        let k = self.points.len().min(self.n + 1);
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| self.points[i].coords.clone()).collect();
            if rational_rank(&rows, self.n + 1) < k {
                return false;
            }
            // next combination
            let s = self.points.len();
            let mut i = k;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if idx[i] < s - k + i {
                    idx[i] += 1;
                    for t in i + 1..k {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("generator degrees requested up to {up_to}, below the initial degree {alpha}")]
pub struct GeneratorError {
    pub up_to: u32,
    pub alpha: u32,
}

/// Dimension of `S_1 · span(basis)` inside `S_d`, for forms of degree `d - 1`.
pub fn maximal_ideal_times(basis: &[HomogPoly], nvars: usize, d: u32) -> usize {
    if basis.is_empty() {
        return 0;
    }
    let slice = DegreeSlice::new(nvars, d);
    let rows: Vec<Vec<BigInt>> = basis
        .iter()
        .flat_map(|g| {
            (0..nvars).map(|i| {
                let h = g.mul_monomial(&Monomial::var(nvars, i));
                clear_denominators(&slice.coordinates(&h))
            })
        })
        .collect();
    int_rank(rows, slice.len())
}

/// Taylor coefficient of `y^β` in `f(1, p + y)`.
pub fn taylor_coefficient(f: &HomogPoly, p: &[Rational], beta: &[u32]) -> Rational {
    let mut total = Rational::zero();
    'terms: for (m, c) in f.terms() {
        let alpha = &m.exponents()[1..];
        let mut t = c.clone();
        for (k, (&a, &b)) in alpha.iter().zip(beta).enumerate() {
            if b > a {
                continue 'terms;
            }
            if b > 0 {
                t *= Rational::from_integer(BigInt::from(binom(a as u64, b as u64)));
            }
            if a > b {
                t *= num_traits::pow(p[k].clone(), (a - b) as usize);
            }
        }
        total += t;
    }
    total
}

/// Transpose rows of length `ncols`.
pub fn transpose(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Rescale a rational vector to a primitive integer vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut w = clear_denominators(v);
    make_primitive(&mut w);
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic_points() -> Vec<(&'static [i64], u32)> {
        vec![
            (&[1, 1, 0], 1),
            (&[1, 3, 0], 1),
            (&[1, 0, 1], 1),
            (&[1, 4, 1], 1),
            (&[1, 0, 3], 1),
            (&[1, 1, 4], 1),
            (&[1, 4, 3], 1),
            (&[1, 3, 4], 1),
        ]
    }

    fn conic_scheme(nu: u32) -> FatPointScheme {
        let pts: Vec<(&[i64], u32)> = conic_points().into_iter().map(|(c, _)| (c, nu)).collect();
        FatPointScheme::from_i64(2, &pts).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            FatPointScheme::from_i64(2, &[(&[0, 1, 0], 1)]),
            Err(SchemeError::OnHyperplaneX0 { index: 0 })
        );
        assert_eq!(
            FatPointScheme::from_i64(2, &[(&[1, 1, 0], 1), (&[2, 2, 0], 3)]),
            Err(SchemeError::DuplicatePoint { first: 0, second: 1 })
        );
        assert_eq!(
            FatPointScheme::from_i64(2, &[(&[1, 1], 1)]),
            Err(SchemeError::DimensionMismatch { index: 0, expected: 3, got: 2 })
        );
        assert_eq!(FatPointScheme::from_i64(2, &[]), Err(SchemeError::Empty));
        assert_eq!(
            FatPointScheme::from_i64(2, &[(&[1, 1, 0], 0)]),
            Err(SchemeError::ZeroMultiplicity { index: 0 })
        );
    }

    #[test]
    fn normalizes_coordinates() {
        let w = FatPointScheme::from_i64(2, &[(&[2, 1, 4], 1)]).unwrap();
        let c = w.points()[0].coords();
        assert_eq!(c[1], Rational::new(1.into(), 2.into()));
        assert_eq!(c[2], Rational::from_integer(2.into()));
    }

    #[test]
    fn coordinate_change_moves_points_off_x0() {
        let swap = vec![
            vec![Rational::zero(), Rational::one(), Rational::zero()],
            vec![Rational::one(), Rational::zero(), Rational::zero()],
            vec![Rational::zero(), Rational::zero(), Rational::one()],
        ];
        let pt = vec![Rational::zero(), Rational::one(), Rational::from_integer(5.into())];
        let w = FatPointScheme::with_coordinate_change(2, &swap, [(pt, 2)]).unwrap();
        assert_eq!(w.points()[0], ProjPoint::from_i64(&[1, 0, 5]).unwrap());
        let singular = vec![vec![Rational::one(); 3]; 3];
        assert!(FatPointScheme::with_coordinate_change(2, &singular, []).is_err());
    }

    #[test]
    fn linear_forms_through_a_point() {
        let w = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 1)]).unwrap();
        let b = w.ideal_slice(1);
        let shown: Vec<String> = b.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["X1", "X2"]);
    }

    #[test]
    fn double_point_quadrics() {
        let w = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 2)]).unwrap();
        let b = w.ideal_slice(2);
        assert_eq!(b.len(), 3);
        let mut shown: Vec<String> = b.iter().map(|f| f.to_string()).collect();
        shown.sort();
        assert_eq!(shown, ["X1*X2", "X1^2", "X2^2"]);
    }

    #[test]
    fn conic_through_eight_points() {
        let x = conic_scheme(1);
        let b = x.ideal_slice(2);
        assert_eq!(b.len(), 1);
        let c = HomogPoly::parse("3*X0^2 - 4*X0*X1 + X1^2 - 4*X0*X2 + X2^2", 3).unwrap();
        let lead = b[0].coefficient(&Monomial::new(vec![2, 0, 0]));
        assert_eq!(b[0], c.scale(&(lead / Rational::from_integer(3.into()))));
    }

    #[test]
    fn conic_hilbert_functions() {
        assert_eq!(conic_scheme(1).hf_table().display_values(), &[1, 3, 5, 7, 8, 8]);
        assert_eq!(
            conic_scheme(2).hf_table().display_values(),
            &[1, 3, 6, 10, 14, 18, 21, 23, 24, 24]
        );
        assert_eq!(
            conic_scheme(3).hf_table().display_values(),
            &[1, 3, 6, 10, 15, 21, 27, 33, 38, 42, 45, 47, 48, 48]
        );
        assert_eq!(conic_scheme(1).regularity_index(), 4);
    }

    #[test]
    fn nine_points() {
        let x = FatPointScheme::from_i64(
            2,
            &[
                (&[1, 1, 0], 1),
                (&[1, 1, 1], 1),
                (&[1, 1, 2], 1),
                (&[1, 1, 3], 1),
                (&[1, 1, 4], 1),
                (&[1, 1, 5], 1),
                (&[1, 0, 1], 1),
                (&[1, 2, 1], 1),
                (&[1, 2, 2], 1),
            ],
        )
        .unwrap();
        assert_eq!(x.hf_table().display_values(), &[1, 3, 6, 7, 8, 9, 9]);
        assert_eq!(x.initial_degree(), 3);
    }

    #[test]
    fn trivial_hilbert_values() {
        let p = FatPointScheme::from_i64(3, &[(&[1, 2, 3, 4], 1)]).unwrap();
        assert_eq!(p.hilbert_function(0), 1);
        assert_eq!(p.hilbert_function(-1), 0);
        assert_eq!(p.regularity_index(), 0);
    }

    #[test]
    fn generator_degree_counts() {
        assert_eq!(
            conic_scheme(1).generator_degrees(5).unwrap(),
            BTreeMap::from([(2, 1), (4, 1)])
        );
        let p = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 1)]).unwrap();
        assert_eq!(p.generator_degrees(2).unwrap(), BTreeMap::from([(1, 2)]));
        let q = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 2)]).unwrap();
        assert_eq!(q.generator_degrees(3).unwrap(), BTreeMap::from([(2, 3)]));
        assert!(q.generator_degrees(1).is_err());
    }

    #[test]
    fn ideal_members_have_vanishing_jets() {
        let w = FatPointScheme::from_i64(2, &[(&[1, 1, 0], 2), (&[1, 0, 2], 3), (&[1, 3, 1], 1)]).unwrap();
        for d in 0..6 {
            for f in w.ideal_slice(d) {
                assert!(w.jet_vector(&f).iter().all(|x| x.is_zero()), "{f}");
            }
        }
    }

    #[test]
    fn general_position() {
        let ok = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 1), (&[1, 1, 0], 1), (&[1, 0, 1], 1)]).unwrap();
        assert!(ok.in_general_position());
        let bad = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 1), (&[1, 1, 0], 1), (&[1, 2, 0], 1)]).unwrap();
        assert!(!bad.in_general_position());
    }
}
