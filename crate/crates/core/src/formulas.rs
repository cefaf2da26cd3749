//! Closed-form Hilbert functions and bounds for special families, each meant to
//! be cross-checked against [`KaehlerEngine`].

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exactla::Rational;
use crate::kaehler::{max_form_degree, KaehlerEngine, KaehlerError};
use crate::polyring::{binom, binom_clipped, slice_dim, HomogPoly};
use crate::schemes::{maximal_ideal_times, FatPointScheme, HFTable, ProjPoint, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("no closed form for m = {m} here")]
    UnsupportedFormDegree { m: usize },
    #[error("roots must be pairwise distinct")]
    DuplicateRoot,
    #[error("a P1 scheme needs at least one root")]
    EmptySpec,
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("conic formulas need at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("this formula needs an equimultiple scheme")]
    NotEquimultiple,
    #[error("the conic is singular or not a quadric in three variables")]
    SingularConic,
    #[error("point {index} is not on the curve")]
    PointOffCurve { index: usize },
    #[error("the hyperplane form must be a nonzero linear form in n + 1 variables")]
    NotLinear,
    #[error("formula gave a negative value {value} at degree {degree}")]
    NegativeValue { degree: usize, value: i64 },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Kaehler(#[from] KaehlerError),
}

fn to_table(values: Vec<i64>) -> Result<HFTable, FormulaError> {
    let mut out = Vec::with_capacity(values.len());
    for (degree, &value) in values.iter().enumerate() {
        if value < 0 {
            return Err(FormulaError::NegativeValue { degree, value });
        }
        out.push(value as u64);
    }
    Ok(HFTable::from_values(out))
}

fn hf(t: &HFTable, i: i64) -> i64 {
    t.value(i) as i64
}

// ---------------------------------------------------------------------------
// P^1

/// A scheme in `P^1` with ideal `Π (X_1 - a_i X_0)^{m_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1SchemeSpec {
    roots: Vec<Rational>,
    mults: Vec<u32>,
}

impl P1SchemeSpec {
    pub fn new(roots: Vec<Rational>, mults: Vec<u32>) -> Result<P1SchemeSpec, FormulaError> {
        if roots.is_empty() {
            return Err(FormulaError::EmptySpec);
        }
        assert_eq!(roots.len(), mults.len(), "one multiplicity per root");
        if mults.contains(&0) {
            return Err(FormulaError::ZeroMultiplicity);
        }
        for i in 0..roots.len() {
            if roots[i + 1..].contains(&roots[i]) {
                return Err(FormulaError::DuplicateRoot);
            }
        }
        Ok(P1SchemeSpec { roots, mults })
    }

    pub fn from_i64(roots: &[i64], mults: &[u32]) -> Result<P1SchemeSpec, FormulaError> {
        P1SchemeSpec::new(roots.iter().map(|&a| Rational::from_integer(a.into())).collect(), mults.to_vec())
    }

    pub fn s(&self) -> usize {
        self.roots.len()
    }

    /// `μ = Σ m_i`, the degree of the scheme.
    pub fn mu(&self) -> u64 {
        self.mults.iter().map(|&m| m as u64).sum()
    }

    /// The points `(1 : a_i)` with their multiplicities.
    pub fn to_scheme(&self) -> FatPointScheme {
        FatPointScheme::new(
            1,
            self.roots
                .iter()
                .zip(&self.mults)
                .map(|(a, &m)| (vec![Rational::from_integer(1.into()), a.clone()], m)),
        )
        .expect("distinct affine points")
    }
}

/// `HF_{Ω^m}` of a scheme in `P^1`, absolute or relative to `K[x_0]`. For
/// `m = 2` the module is `(S/(∂F/∂X_0, ∂F/∂X_1))(-2)`, a complete intersection
/// over `S/(G)` with `G = Π (X_1 - a_i X_0)^{m_i - 1}`; `Ω^1` adds `HF_𝔪` (Koszul).
pub fn p1_hf(spec: &P1SchemeSpec, m: usize, relative: bool) -> Result<HFTable, FormulaError> {
    if !(1..=2).contains(&m) {
        return Err(FormulaError::UnsupportedFormDegree { m });
    }
    let mu = spec.mu() as i64;
    let s = spec.s() as i64;
    let hf_s = |j: i64| if j >= 0 { j + 1 } else { 0 };
    let hf_x = |j: i64| if j >= 0 { (j + 1).min(mu) } else { 0 };
    let two = |i: i64| hf_s(i - 2) - 2 * hf_s(i - 1 - mu) + hf_s(i - s - mu);
    let one = |i: i64| hf_x(i) - i64::from(i == 0) + two(i);
    let len = p1_ri(spec) + 2;
    let values = (0..len as i64)
        .map(|i| match (m, relative) {
            (1, false) => one(i),
            (2, false) => two(i),
            (1, true) => one(i) - hf_x(i - 1),
            _ => 0,
        })
        .collect();
    to_table(values)
}

/// Regularity index of `Ω^1` and `Ω^2` in `P^1`: `μ + s - 1`.
pub fn p1_ri(spec: &P1SchemeSpec) -> usize {
    spec.mu() as usize + spec.s() - 1
}

// ---------------------------------------------------------------------------
// Hilbert polynomial bounds

/// Bounds on the Hilbert polynomial of `Ω^m` for a non-reduced fat point
/// scheme; for reduced schemes they still hold but are weak.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HpBounds {
    pub lower: u64,
    pub upper: u64,
}

impl HpBounds {
    pub fn contains(&self, v: u64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

fn wedge_count(n: usize, m: usize, relative: bool) -> u64 {
    if relative {
        binom(n as u64, m as u64)
    } else {
        binom(n as u64 + 1, m as u64)
    }
}

/// `Σ C(n+1,m)·C(m_i+n-2,n) ≤ HP ≤ Σ C(n+1,m)·C(m_i+n-1,n)`, with `C(n,m)`
/// in the relative case.
pub fn hp_bounds(w: &FatPointScheme, m: usize, relative: bool) -> Result<HpBounds, FormulaError> {
    let n = w.n();
    if m == 0 || m > max_form_degree(n, relative) {
        return Err(KaehlerError::FormDegreeOutOfRange { m, max: max_form_degree(n, relative) }.into());
    }
    let k = wedge_count(n, m, relative);
    let mut lower = 0;
    let mut upper = 0;
    for &mi in w.mults() {
        lower += k * binom_clipped(mi as i64 + n as i64 - 2, n as i64);
        upper += k * binom_clipped(mi as i64 + n as i64 - 1, n as i64);
    }
    Ok(HpBounds { lower, upper })
}

/// Which result pins the Hilbert polynomial down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactCase {
    /// Reduced: `deg X` for `m = 1`, 0 otherwise.
    Reduced,
    /// Equimultiple `(ν+1)X`, top forms: `s·C(ν+n-1, n)`.
    EquimultipleTopForm,
    /// Equimultiple `νX` in `P^2`, two-forms: `(3ν²-ν-2)s/2`.
    PlaneTwoForms,
}

/// The exact Hilbert polynomial of `Ω^m` (absolute) where a closed form exists.
pub fn hp_exact_cases(w: &FatPointScheme, m: usize) -> Option<(u64, ExactCase)> {
    let n = w.n();
    if m == 0 || m > n + 1 {
        return None;
    }
    let s = w.num_points() as u64;
    if w.is_reduced() {
        let v = if m == 1 { w.degree() } else { 0 };
        return Some((v, ExactCase::Reduced));
    }
    let nu = w.equimultiple()? as u64;
    if m == n + 1 {
        return Some((s * binom(nu - 1 + n as u64 - 1, n as u64), ExactCase::EquimultipleTopForm));
    }
    if n == 2 && m == 2 {
        return Some(((3 * nu * nu - nu - 2) * s / 2, ExactCase::PlaneTwoForms));
    }
    None
}

// ---------------------------------------------------------------------------
// Regularity index bounds

/// Upper bounds for `ri(Ω^m)`; each field is `None` where its hypotheses fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiBounds {
    /// `min{max{r_W+m, r_V+m-1}, max{r_W+n, r_V+n-1}}` for fat point schemes.
    pub fat: Option<usize>,
    /// Refinement for a support in general position.
    pub general_position: Option<usize>,
    /// `min{2r_X+m, 2r_X+n}` for reduced schemes.
    pub reduced: Option<usize>,
    /// `min{ϱ_m, ϱ_n}` with `ϱ_k = max{r_W+k, ri(Ω^1)+k-1}` (absolute), or
    /// `max{r_W+m, ri(Ω^1)+m-1}` (relative); needs `ri(Ω^1)`.
    pub via_omega1: Option<usize>,
}

impl RiBounds {
    pub fn best(&self) -> Option<usize> {
        [self.fat, self.general_position, self.reduced, self.via_omega1]
            .into_iter()
            .flatten()
            .min()
    }
}

/// Regularity index bounds for `Ω^m`. `ri_omega1` is the (absolute) regularity
/// index of `Ω^1`, if known.
pub fn ri_bounds(
    w: &FatPointScheme,
    m: usize,
    relative: bool,
    ri_omega1: Option<usize>,
) -> Result<RiBounds, FormulaError> {
    let n = w.n();
    let max = if relative { n } else { n + 1 };
    if m == 0 || m > max {
        return Err(KaehlerError::FormDegreeOutOfRange { m, max }.into());
    }
    let r_w = w.regularity_index();
    let r_v = w.fattening().regularity_index();
    let reduced = w.is_reduced();
    // The relative fat-point bounds are only stated for non-reduced schemes.
    let fat_applies = !relative || !reduced;
    let fat = fat_applies.then(|| (r_w + m).max(r_v + m - 1).min((r_w + n).max(r_v + n - 1)));
    let general_position = if fat_applies && w.num_points() >= 2 && w.support().in_general_position() {
        let mut ms: Vec<usize> = w.mults().iter().map(|&x| x as usize).collect();
        ms.sort_unstable();
        let s = ms.len();
        let top = ms[s - 1] + ms[s - 2];
        let k = (ms.iter().sum::<usize>() + s + n - 2) / n;
        Some((top + m).max(k + m - 1).min((top + n).max(k + n - 1)))
    } else {
        None
    };
    let reduced_bound = (reduced && !relative).then(|| (2 * r_w + m).min(2 * r_w + n));
    let via_omega1 = ri_omega1.map(|ri1| {
        let rho = |k: usize| (r_w + k).max(ri1 + k - 1);
        if relative {
            rho(m)
        } else {
            rho(m).min(rho(n))
        }
    });
    Ok(RiBounds {
        fat,
        general_position,
        reduced: reduced_bound,
        via_omega1,
    })
}

// ---------------------------------------------------------------------------
// Support on a hyperplane

/// `HF_{Ω^{n+1}}(i) = HF_Y(i - n - 1)` with `Y = Σ (m_j - 1) P_j`, valid when the
/// support lies on the hyperplane `H = 0`.
pub fn hyperplane_top_form(w: &FatPointScheme, h: &HomogPoly) -> Result<HFTable, FormulaError> {
    let n = w.n();
    if h.nvars() != n + 1 || h.degree() != 1 || h.is_zero() {
        return Err(FormulaError::NotLinear);
    }
    for (index, p) in w.points().iter().enumerate() {
        if !h.evaluate(p.coords()).expect("arity checked").is_zero() {
            return Err(FormulaError::PointOffCurve { index });
        }
    }
    let Some(y) = w.shifted(-1) else {
        return Ok(HFTable::from_values(vec![0]));
    };
    let t = y.hf_table();
    let len = t.stable_from() + n + 2;
    Ok(HFTable::from_values(
        (0..len as i64).map(|i| t.value(i - n as i64 - 1)).collect(),
    ))
}

// ---------------------------------------------------------------------------
// Support on a conic

/// A fat point scheme in `P^2` supported on a nonsingular conic, points sorted by
/// nondecreasing multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicSchemeSpec {
    conic: HomogPoly,
    scheme: FatPointScheme,
}

/// Determinant of the symmetric matrix of a ternary quadratic form.
pub fn conic_discriminant(c: &HomogPoly) -> Rational {
    use crate::polyring::Monomial;
    let half = Rational::new(1.into(), 2.into());
    let mut a = vec![vec![Rational::zero(); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let mut e = vec![0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let coeff = c.coefficient(&Monomial::new(e));
            if i == j {
                a[i][i] = coeff;
            } else {
                a[i][j] = &coeff * &half;
                a[j][i] = &coeff * &half;
            }
        }
    }
    &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
        - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
        + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
}

impl ConicSchemeSpec {
    pub fn new(conic: HomogPoly, scheme: FatPointScheme) -> Result<ConicSchemeSpec, FormulaError> {
        if scheme.n() != 2 || conic.nvars() != 3 || conic.degree() != 2 || conic_discriminant(&conic).is_zero() {
            return Err(FormulaError::SingularConic);
        }
        if scheme.num_points() < 4 {
            return Err(FormulaError::TooFewPoints(scheme.num_points()));
        }
        for (index, p) in scheme.points().iter().enumerate() {
            if !conic.evaluate(p.coords()).expect("three coordinates").is_zero() {
                return Err(FormulaError::PointOffCurve { index });
            }
        }
        let mut pairs: Vec<(ProjPoint, u32)> = scheme
            .points()
            .iter()
            .cloned()
            .zip(scheme.mults().iter().copied())
            .collect();
        pairs.sort_by_key(|&(_, m)| m);
        let scheme = FatPointScheme::new(2, pairs.into_iter().map(|(p, m)| (p.coords().to_vec(), m)))?;
        Ok(ConicSchemeSpec { conic, scheme })
    }

    pub fn conic(&self) -> &HomogPoly {
        &self.conic
    }

    pub fn scheme(&self) -> &FatPointScheme {
        &self.scheme
    }

    pub fn s(&self) -> usize {
        self.scheme.num_points()
    }

    /// `μ = Σ m_j + s`.
    pub fn mu(&self) -> usize {
        self.scheme.mults().iter().map(|&m| m as usize).sum::<usize>() + self.s()
    }

    /// `ϱ = m_s + m_{s-1}`.
    pub fn rho(&self) -> usize {
        let m = self.scheme.mults();
        (m[m.len() - 1] + m[m.len() - 2]) as usize
    }

    pub fn nu(&self) -> Option<u32> {
        self.scheme.equimultiple()
    }

    /// `r_W = max{m_s + m_{s-1} - 1, ⌊Σ m_j / 2⌋}`.
    pub fn regularity_index(&self) -> usize {
        let sum: usize = self.scheme.mults().iter().map(|&m| m as usize).sum();
        (self.rho() - 1).max(sum / 2)
    }

    fn support(&self) -> FatPointScheme {
        self.scheme.support()
    }

    /// Degrees of a minimal generating set of `I_X`, `X` the support.
    pub fn support_generator_degrees(&self) -> BTreeMap<u32, usize> {
        let x = self.support();
        let r = x.regularity_index() as u32;
        x.generator_degrees(r + 1).expect("r + 1 ≥ α")
    }
}

/// Where the correction terms `δ_i` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSource {
    /// Corrections from the closed-form case table.
    Printed,
    /// `δ_i = #(B_{ν-1})_{i-3} - h_i` with the generator counts of `(ν-1)X`
    /// computed directly.
    Generators,
}

/// The counts `h_i` and corrections `δ_i` for `νX` on a conic, `ν ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaH {
    pub nu: u32,
    pub h: Vec<i64>,
    pub delta: Vec<i64>,
}

impl DeltaH {
    fn h_counts(gens: &BTreeMap<u32, usize>, nu: u32, len: usize) -> Vec<i64> {
        (0..len as i64)
            .map(|i| {
                let d = i + 1 - 2 * nu as i64;
                if d < 0 {
                    0
                } else {
                    gens.get(&(d as u32)).copied().unwrap_or(0) as i64
                }
            })
            .collect()
    }

    /// `δ_i` from the case table for `s = 4`, `s = 5`, `s ≥ 6` as tabulated.
    pub fn printed(spec: &ConicSchemeSpec, len: usize) -> DeltaH {
        let nu = spec.nu().expect("equimultiple") as i64;
        let s = spec.s() as i64;
        let h = Self::h_counts(&spec.support_generator_degrees(), nu as u32, len);
        let mut delta = vec![0i64; len];
        let mut set = |i: i64, v: i64| {
            if i >= 0 && (i as usize) < len {
                delta[i as usize] = v;
            }
        };
        match s {
            4 => set(2 * nu + 1, nu - 2),
            5 => {
                set(2 * nu + 1, 1);
                if nu % 2 == 1 {
                    // 2ν+3 ≤ i ≤ (5ν+1)/2
                    for i in 2 * nu + 3..=(5 * nu + 1) / 2 {
                        set(i, 3);
                    }
                } else {
                    // 2ν+3 ≤ i < (5ν+2)/2, and 2 at (5ν+2)/2
                    for i in 2 * nu + 3..(5 * nu + 2) / 2 {
                        set(i, 3);
                    }
                    set((5 * nu + 2) / 2, 2);
                }
            }
            _ if s % 2 == 0 => {
                for k in 2..nu {
                    set(2 * nu - 2 * k + k * s / 2 + 1, 1);
                }
            }
            _ => {
                for k in 1..=(nu - 1) / 2 {
                    set(2 * nu + k * (s - 4) + 1, 1);
                }
                for k in 1..=(nu - 2) / 2 {
                    set(2 * nu + k * (s - 4) + (s + 1) / 2 - 1, 2);
                }
            }
        }
        DeltaH { nu: nu as u32, h, delta }
    }

    /// `δ_i` from the generator degrees of `(ν-1)X`.
    pub fn from_generators(spec: &ConicSchemeSpec, len: usize) -> DeltaH {
        let nu = spec.nu().expect("equimultiple");
        let h = Self::h_counts(&spec.support_generator_degrees(), nu, len);
        let prev = spec.support().shifted(nu as i64 - 2).expect("ν ≥ 2");
        let r = prev.regularity_index() as u32;
        let gens = prev.generator_degrees(r + 1).expect("r + 1 ≥ α");
        let delta = (0..len as i64)
            .map(|i| {
                let d = i - 3;
                let b = if d < 0 { 0 } else { gens.get(&(d as u32)).copied().unwrap_or(0) as i64 };
                b - h[i as usize]
            })
            .collect();
        DeltaH { nu, h, delta }
    }

    pub fn build(spec: &ConicSchemeSpec, len: usize, source: DeltaSource) -> DeltaH {
        match source {
            DeltaSource::Printed => Self::printed(spec, len),
            DeltaSource::Generators => Self::from_generators(spec, len),
        }
    }

    fn at(&self, i: i64) -> i64 {
        if i < 0 {
            0
        } else {
            self.h.get(i as usize).copied().unwrap_or(0) + self.delta.get(i as usize).copied().unwrap_or(0)
        }
    }
}

// Every case formula is constant from ⌊s(ν+1)/2⌋ on: the h_i vanish past
// 2ν + r_X and the δ_i past ⌊s(ν-1)/2⌋ + 3.
fn conic_window(spec: &ConicSchemeSpec) -> usize {
    let nu = spec.scheme.mults().iter().copied().max().unwrap_or(1) as usize;
    spec.s() * (nu + 1) / 2 + 4
}

/// `HF_{Ω^m}` for `m ∈ {1, 2, 3}` from the closed forms for conic support. `m = 1`
/// accepts any multiplicities; `m = 2, 3` need an equimultiple scheme.
pub fn conic_hf(spec: &ConicSchemeSpec, m: usize, source: DeltaSource) -> Result<HFTable, FormulaError> {
    match m {
        1 => conic_one_forms(spec),
        2 | 3 => {
            let nu = spec.nu().ok_or(FormulaError::NotEquimultiple)?;
            if m == 2 {
                conic_two_forms(spec, nu, source)
            } else {
                conic_three_forms(spec, nu, source)
            }
        }
        _ => Err(FormulaError::UnsupportedFormDegree { m }),
    }
}

fn conic_one_forms(spec: &ConicSchemeSpec) -> Result<HFTable, FormulaError> {
    let w = &spec.scheme;
    let hw = w.hf_table();
    let mu = spec.mu() as i64;
    let rho = spec.rho() as i64;
    let r = spec.regularity_index() as i64;
    let mults: Vec<i64> = w.mults().iter().map(|&m| m as i64).collect();
    let stable: i64 = mults.iter().map(|&m| (m + 1) * (3 * m - 2) / 2).sum();
    let sum_c: i64 = mults.iter().map(|&m| (m + 1) * m / 2).sum();
    let h = |i: i64| hf(&hw, i);
    let values: Vec<i64> = if mu >= 2 * rho + 4 {
        let top = mu / 2;
        (0..=top + 1)
            .map(|i| {
                if i >= top {
                    stable
                } else if i >= r + 2 {
                    3 * sum_c - 2 * i - 1
                } else if i == r + 1 {
                    4 * sum_c - 2 * i - 1 - h(i - 2)
                } else {
                    h(i) + 3 * h(i - 1) - h(i - 2) - 2 * i - 1
                }
            })
            .collect()
    } else {
        let s = mults.len();
        let ym: Vec<u32> = w
            .mults()
            .iter()
            .enumerate()
            .map(|(j, &m)| if j + 2 < s { m + 1 } else { m })
            .collect();
        let y = w.with_mults(&ym).expect("nonempty").hf_table();
        let hy = |i: i64| hf(&y, i);
        (0..=rho + 2)
            .map(|i| {
                if i > rho {
                    stable
                } else if i > r {
                    4 * sum_c - i - 1 - hy(i - 1)
                } else {
                    h(i) + 3 * h(i - 1) - hy(i - 1) - i - 1
                }
            })
            .collect()
    };
    to_table(values)
}

fn conic_three_forms(spec: &ConicSchemeSpec, nu: u32, source: DeltaSource) -> Result<HFTable, FormulaError> {
    let len = conic_window(spec);
    if nu == 1 {
        return Ok(HFTable::from_values(vec![0, 0, 0, 1, 0]));
    }
    let dh = DeltaH::build(spec, len, source);
    let s = spec.s() as i64;
    let nu = nu as i64;
    let hw = spec.scheme.hf_table();
    let t = s * (nu - 1) / 2 + 3;
    let values = (0..len as i64)
        .map(|i| {
            if i <= 2 {
                0
            } else if i >= t {
                s * nu * (nu - 1) / 2 + dh.at(i)
            } else {
                hf(&hw, i - 1) - 2 * i + 1 + dh.at(i)
            }
        })
        .collect();
    to_table(values)
}

fn conic_two_forms(spec: &ConicSchemeSpec, nu: u32, source: DeltaSource) -> Result<HFTable, FormulaError> {
    let len = conic_window(spec);
    let s = spec.s() as i64;
    let hw = spec.scheme.hf_table();
    let h = |i: i64| hf(&hw, i);
    // Below degree m = 2 every Ω^2 vanishes; the case formulas are not meant there.
    if nu == 1 {
        let values = (0..len as i64)
            .map(|i| {
                if i < 2 || i >= s {
                    0
                } else if i == 3 {
                    3 * h(2) - 9
                } else {
                    3 * h(i - 1) - h(i - 2) - 2 * i - 1
                }
            })
            .collect();
        return to_table(values);
    }
    let dh = DeltaH::build(spec, len, source);
    let nu = nu as i64;
    let mu = s * nu / 2 + 2;
    let t = s * (nu - 1) / 2 + 3;
    let top = s * (nu + 1) / 2;
    let values = (0..len as i64)
        .map(|i| {
            let c = dh.at(i);
            if i < 2 {
                0
            } else if i >= top {
                s * (3 * nu + 2) * (nu - 1) / 2 + c
            } else if i >= mu {
                s * nu * (3 * nu + 1) / 2 + c - 2 * i - 1
            } else if i >= t {
                3 * h(i - 1) - h(i - 2) + s * nu * (nu - 1) / 2 + c - 2 * i - 1
            } else {
                4 * h(i - 1) - h(i - 2) - 4 * i + c
            }
        })
        .collect();
    to_table(values)
}

/// `HF_{S/𝔐 I_{(ν-1)X}}(i - 3)` from ideal slices, with `I_{0X} = S`. For
/// equimultiple schemes on a conic this is `HF_{Ω^3}`.
pub fn conic_three_forms_via_ideal(spec: &ConicSchemeSpec) -> Result<HFTable, FormulaError> {
    let nu = spec.nu().ok_or(FormulaError::NotEquimultiple)?;
    let len = conic_window(spec);
    let prev = spec.support().shifted(nu as i64 - 2);
    let values = (0..len as i64)
        .map(|i| {
            let e = i - 3;
            if e < 0 {
                return 0;
            }
            let full = slice_dim(2, e);
            match &prev {
                // 𝔐 itself: only the constants survive
                None => u64::from(e == 0),
                // (𝔐 I)_e = I_e once e exceeds every generator degree
                Some(p) if e as usize >= p.regularity_index() + 2 => p.hilbert_function(e),
                Some(p) => {
                    let below = if e == 0 { Vec::new() } else { p.ideal_slice(e as u32 - 1) };
                    full - maximal_ideal_times(&below, 3, e as u32) as u64
                }
            }
        })
        .collect();
    Ok(HFTable::from_values(values))
}

// ---------------------------------------------------------------------------
// Two-form complex, conjecture, reducedness

/// Both sides of the lower bound for `HF_{Ω^2}(i+2)` coming from the complex
/// `I_{W(1)}/I_{W(2)} → I_W Ω^1/I_{W(1)} Ω^1 → Ω^2_S/I_W Ω^2_S → Ω^2_{R_W} → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    /// In `P^2` with an equimultiple scheme and `i` past every stabilization the
    /// complex is exact, so equality is required.
    pub equality_expected: bool,
}

impl ComplexCheck {
    pub fn ok(&self) -> bool {
        self.holds && (!self.equality_expected || self.lhs == self.rhs)
    }
}

pub fn complex_inequality(engine: &KaehlerEngine, i: usize) -> Result<ComplexCheck, FormulaError> {
    Ok(complex_inequalities(engine, i..=i)?.remove(0))
}

/// [`complex_inequality`] over a range of degrees, sharing the tables.
pub fn complex_inequalities(
    engine: &KaehlerEngine,
    degrees: std::ops::RangeInclusive<usize>,
) -> Result<Vec<ComplexCheck>, FormulaError> {
    let w = engine.scheme();
    let n = w.n() as i64;
    let tw = w.hf_table();
    let t1 = w.shifted(1).expect("nonempty").hf_table();
    let t2 = w.shifted(2).expect("nonempty").hf_table();
    let (hw, h1, h2) = (|d| hf(&tw, d), |d| hf(&t1, d), |d| hf(&t2, d));
    let exact_from = if n == 2 && w.equimultiple().is_some() {
        let ri2 = engine.omega_hf(2, false)?.ri;
        let past = [
            tw.stable_from(),
            t1.stable_from().saturating_sub(1),
            t2.stable_from().saturating_sub(2),
            ri2.saturating_sub(2),
        ];
        past.into_iter().max()
    } else {
        None
    };
    degrees
        .map(|i| {
            let ii = i as i64;
            let lhs = engine.value(2, false, i + 2)? as i64;
            let rhs = n * (n + 1) / 2 * hw(ii) + h2(ii + 2) - h1(ii + 2) - (n + 1) * (h1(ii + 1) - hw(ii + 1));
            Ok(ComplexCheck {
                lhs,
                rhs,
                holds: lhs >= rhs,
                equality_expected: exact_from.is_some_and(|d| i >= d),
            })
        })
        .collect()
}

/// Hilbert polynomials of `Ω^{n+1}_{R_W}` and of `R_Y`, `Y = Σ (m_j - 1) P_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjectureReport {
    pub hp_top: u64,
    pub hp_y: u64,
    pub agree: bool,
}

/// Experimental comparison of `HP(Ω^{n+1}_{R_W})` with `HP_Y`; reports, never asserts.
pub fn conjecture_probe(engine: &KaehlerEngine) -> Result<ConjectureReport, FormulaError> {
    let w = engine.scheme();
    let hp_top = engine.hp(w.n() + 1, false)?;
    let hp_y = w.shifted(-1).map(|y| y.degree()).unwrap_or(0);
    Ok(ConjectureReport {
        hp_top,
        hp_y,
        agree: hp_top == hp_y,
    })
}

/// Reducedness read off the multiplicities and off `HP(Ω^{n+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducednessVerdict {
    pub reduced: bool,
    pub hp_top: u64,
    /// `reduced ⇔ HP(Ω^{n+1}) = 0`.
    pub consistent: bool,
}

pub fn reducedness_test(engine: &KaehlerEngine) -> Result<ReducednessVerdict, FormulaError> {
    let w = engine.scheme();
    let reduced = w.is_reduced();
    let hp_top = engine.hp(w.n() + 1, false)?;
    Ok(ReducednessVerdict {
        reduced,
        hp_top,
        consistent: reduced == (hp_top == 0),
    })
}

/// `HF_{Ω^1}(i) = (n+1) HF_W(i-1) + HF_W(i) - HF_V(i)` with `V` the fattening.
pub fn omega1_via_fattening(w: &FatPointScheme) -> HFTable {
    let n = w.n() as i64;
    let hw = w.hf_table();
    let hv = w.fattening().hf_table();
    let len = hv.stable_from().max(hw.stable_from() + 1) + 2;
    let values = (0..len as i64)
        .map(|i| ((n + 1) * hf(&hw, i - 1) + hf(&hw, i) - hf(&hv, i)) as u64)
        .collect();
    HFTable::from_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kaehler::omega_hf;

    fn conic() -> HomogPoly {
        HomogPoly::parse("3*X0^2 - 4*X0*X1 + X1^2 - 4*X0*X2 + X2^2", 3).unwrap()
    }

    fn eight(nu: u32) -> ConicSchemeSpec {
        let pts: [[i64; 3]; 8] = [[1, 1, 0], [1, 3, 0], [1, 0, 1], [1, 4, 1], [1, 0, 3], [1, 1, 4], [1, 4, 3], [1, 3, 4]];
        let w = FatPointScheme::from_i64(2, &pts.iter().map(|p| (&p[..], nu)).collect::<Vec<_>>()).unwrap();
        ConicSchemeSpec::new(conic(), w).unwrap()
    }

    #[test]
    fn p1_example() {
        let spec = P1SchemeSpec::from_i64(&[0, 1, 2], &[1, 2, 3]).unwrap();
        assert_eq!(p1_hf(&spec, 1, false).unwrap().display_values(), [0, 2, 4, 6, 8, 10, 11, 10, 9, 9]);
        assert_eq!(p1_hf(&spec, 2, false).unwrap().display_values(), [0, 0, 1, 2, 3, 4, 5, 4, 3, 3]);
        assert_eq!(p1_hf(&spec, 1, true).unwrap().display_values(), [0, 1, 2, 3, 4, 5, 5, 4, 3, 3]);
        assert_eq!(p1_hf(&spec, 2, true).unwrap().display_values(), [0, 0]);
        assert_eq!(p1_ri(&spec), 8);
        assert!(p1_hf(&spec, 3, false).is_err());
    }

    #[test]
    fn p1_single_reduced_point() {
        let spec = P1SchemeSpec::from_i64(&[5], &[1]).unwrap();
        let t = p1_hf(&spec, 1, false).unwrap();
        assert_eq!(t.display_values(), [0, 1, 1]);
        assert_eq!(t.hp(), 1);
    }

    #[test]
    fn p1_rejects_bad_specs() {
        assert_eq!(P1SchemeSpec::from_i64(&[1, 1], &[1, 2]), Err(FormulaError::DuplicateRoot));
        assert_eq!(P1SchemeSpec::from_i64(&[], &[]), Err(FormulaError::EmptySpec));
        assert_eq!(P1SchemeSpec::from_i64(&[1], &[0]), Err(FormulaError::ZeroMultiplicity));
    }

    #[test]
    fn bounds_for_double_point() {
        let w = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 2)]).unwrap();
        let b = hp_bounds(&w, 1, false).unwrap();
        assert_eq!((b.lower, b.upper), (3, 9));
        assert_eq!(omega_hf(&w, 1, false).unwrap().hp(), 6);
        assert_eq!(omega1_via_fattening(&w), omega_hf(&w, 1, false).unwrap().table);
    }

    #[test]
    fn exact_cases() {
        let w = eight(2);
        assert_eq!(hp_exact_cases(w.scheme(), 2), Some((32, ExactCase::PlaneTwoForms)));
        assert_eq!(hp_exact_cases(w.scheme(), 3), Some((8, ExactCase::EquimultipleTopForm)));
        assert_eq!(hp_exact_cases(eight(1).scheme(), 1), Some((8, ExactCase::Reduced)));
        let p3 = FatPointScheme::from_i64(3, &[(&[1, 0, 0, 0], 2), (&[1, 1, 0, 0], 2), (&[1, 0, 1, 0], 2), (&[1, 0, 0, 1], 2)]).unwrap();
        assert_eq!(hp_exact_cases(&p3, 4), Some((4, ExactCase::EquimultipleTopForm)));
    }

    #[test]
    fn reduced_ri_bounds_are_sharp() {
        let x = FatPointScheme::from_i64(
            3,
            &[(&[1, 9, 0, 0], 1), (&[1, 6, 0, 1], 1), (&[1, 2, 3, 3], 1), (&[1, 9, 3, 5], 1)],
        )
        .unwrap();
        let want = [3, 4, 5, 5];
        for m in 1..=4 {
            let b = ri_bounds(&x, m, false, None).unwrap();
            assert_eq!(b.reduced, Some(want[m - 1]));
            assert_eq!(omega_hf(&x, m, false).unwrap().ri, want[m - 1]);
        }
    }

    #[test]
    fn hyperplane_small() {
        let w = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 2), (&[1, 1, 0], 2)]).unwrap();
        let h = HomogPoly::parse("X2", 3).unwrap();
        let t = hyperplane_top_form(&w, &h).unwrap();
        assert_eq!(t.display_values(), [0, 0, 0, 1, 2, 2]);
        assert_eq!(t, omega_hf(&w, 3, false).unwrap().table);
        let red = w.support();
        assert_eq!(hyperplane_top_form(&red, &h).unwrap().display_values(), [0, 0]);
        let off = HomogPoly::parse("X1", 3).unwrap();
        assert!(matches!(hyperplane_top_form(&w, &off), Err(FormulaError::PointOffCurve { index: 1 })));
    }

    #[test]
    fn conic_examples() {
        assert_eq!(eight(1).regularity_index(), 4);
        let two = conic_hf(&eight(2), 3, DeltaSource::Printed).unwrap();
        assert_eq!(two.display_values(), [0, 0, 0, 1, 3, 6, 7, 9, 8, 8]);
        let three = conic_hf(&eight(3), 3, DeltaSource::Printed).unwrap();
        assert_eq!(three.display_values(), [0, 0, 0, 1, 3, 6, 10, 15, 18, 22, 23, 25, 24, 24]);
        assert_eq!(
            conic_hf(&eight(2), 2, DeltaSource::Printed).unwrap().display_values(),
            [0, 0, 3, 9, 18, 27, 34, 39, 39, 38, 35, 33, 32, 32]
        );
        assert_eq!(
            conic_hf(&eight(1), 2, DeltaSource::Printed).unwrap().display_values(),
            [0, 0, 3, 6, 7, 6, 3, 1, 0, 0]
        );
        for nu in 1..=3 {
            let spec = eight(nu);
            assert_eq!(conic_three_forms_via_ideal(&spec).unwrap(), conic_hf(&spec, 3, DeltaSource::Printed).unwrap());
            assert_eq!(conic_hf(&spec, 1, DeltaSource::Printed).unwrap(), omega_hf(spec.scheme(), 1, false).unwrap().table);
        }
    }

    #[test]
    fn conic_spec_validation() {
        let w = eight(1);
        let bad = FatPointScheme::from_i64(2, &[(&[1, 1, 0], 1), (&[1, 3, 0], 1), (&[1, 0, 1], 1), (&[1, 2, 2], 1)]).unwrap();
        assert_eq!(ConicSchemeSpec::new(conic(), bad), Err(FormulaError::PointOffCurve { index: 3 }));
        let few = FatPointScheme::from_i64(2, &[(&[1, 1, 0], 1), (&[1, 3, 0], 1), (&[1, 0, 1], 1)]).unwrap();
        assert_eq!(ConicSchemeSpec::new(conic(), few), Err(FormulaError::TooFewPoints(3)));
        let lines = HomogPoly::parse("X1*X2", 3).unwrap();
        assert_eq!(ConicSchemeSpec::new(lines, w.scheme().clone()), Err(FormulaError::SingularConic));
        let mixed = w.scheme().with_mults(&[1, 1, 1, 1, 1, 1, 1, 2]).unwrap();
        let spec = ConicSchemeSpec::new(conic(), mixed).unwrap();
        assert_eq!(conic_hf(&spec, 2, DeltaSource::Printed), Err(FormulaError::NotEquimultiple));
        assert_eq!(spec.mu(), 17);
        assert_eq!(spec.rho(), 3);
    }

    #[test]
    fn complex_and_probe() {
        let e = KaehlerEngine::new(eight(2).scheme());
        for i in 0..14 {
            let c = complex_inequality(&e, i).unwrap();
            assert!(c.ok(), "degree {i}: {c:?}");
        }
        let c = complex_inequality(&e, 20).unwrap();
        assert!(c.equality_expected);
        assert_eq!((c.lhs, c.rhs), (32, 32));
        let p = conjecture_probe(&e).unwrap();
        assert_eq!((p.hp_top, p.hp_y, p.agree), (8, 8, true));
        let r = reducedness_test(&e).unwrap();
        assert!(!r.reduced && r.consistent && r.hp_top == 8);
    }
}
