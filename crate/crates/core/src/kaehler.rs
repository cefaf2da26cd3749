//! Hilbert functions of the modules of Kähler differential m-forms of a fat
//! point scheme, absolute (`Ω^m_{R/K}`) and relative to `K[x_0]`.
//!
//! Three presentations are implemented:
//!
//! * [`KaehlerEngine`], the default. It works modulo `I·Ω^m_S`, where the
//!   quotient `⊕_T (R_W)_{d-m} e_T` is embedded into jet space. The relations
//!   left over are `dF ∧ dX_J` for `F ∈ (I_W)_{d-m+1}` (any `G·dF` differs from
//!   `d(GF)` by an element of `I·Ω`), and the jets of `∂F/∂X_i` below order
//!   `m_P` only see the order-`m_P` Taylor coefficients of `F`. So each degree
//!   needs the image `U_e ⊆ K^δ` of `(I_W)_e` under the order-`m_P` jets
//!   (`δ = deg V - deg W`, `V` the fattening) and a fixed linear map per `J`.
//! * [`DirectPresentation`], the literal presentation: rank of
//!   `(I_W)_{d-m}·e_T` together with monomial multiples of `dF ∧ dX_J` for `F` in
//!   a generating pool, in the free module. Slow; used as a reference.
//! * [`top_form_hf`], the top form through the Jacobian ideal.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactla::{clear_denominators, echelon, int_rank, make_primitive, Rational};
use crate::polyring::{binom, exponents_of_degree, slice_dim, DegreeSlice, HomogPoly, Monomial};
use crate::schemes::{FatPointScheme, HFTable, JetLayout};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KaehlerError {
    #[error("form degree {m} out of range: need 1 <= m <= {max}")]
    FormDegreeOutOfRange { m: usize, max: usize },
    #[error("malformed index set {0:?}: entries must be strictly increasing and at most n")]
    MalformedSubset(Vec<usize>),
    #[error("no stabilization certificate by degree {cap}")]
    NoStabilization { cap: usize },
}

/// Largest admissible form degree: `n + 1` absolute, `n` relative.
pub fn max_form_degree(n: usize, relative: bool) -> usize {
    if relative {
        n
    } else {
        n + 1
    }
}

fn check_m(n: usize, m: usize, relative: bool) -> Result<(), KaehlerError> {
    let max = max_form_degree(n, relative);
    if m == 0 || m > max {
        Err(KaehlerError::FormDegreeOutOfRange { m, max })
    } else {
        Ok(())
    }
}

/// All `k`-subsets of `from..=to` in lexicographic order.
pub fn subsets(from: usize, to: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, to: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=to {
            if to + 1 - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, to, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if from > to {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(from, to, k, &mut Vec::new(), &mut out);
    out
}

/// Sign of `dX_i ∧ dX_J` relative to the sorted basis element, or `None` if
/// `i ∈ J`. Moving `dX_i` past every `dX_j` with `j < i` flips the sign once.
pub fn insertion_sign(i: usize, j: &[usize]) -> Option<(i64, Vec<usize>)> {
    if j.contains(&i) {
        return None;
    }
    let before = j.iter().filter(|&&x| x < i).count();
    let mut t = j.to_vec();
    t.insert(before, i);
    Some((if before % 2 == 0 { 1 } else { -1 }, t))
}

/// The wedge basis `dX_T` of `Ω^m_{S/K}` (or of `Ω^m_{S/K[x_0]}` when relative).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeBasis {
    n: usize,
    m: usize,
    relative: bool,
    subsets: Vec<Vec<usize>>,
}

impl WedgeBasis {
    pub fn new(n: usize, m: usize, relative: bool) -> WedgeBasis {
        let from = if relative { 1 } else { 0 };
        WedgeBasis {
            n,
            m,
            relative,
            subsets: subsets(from, n, m),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn relative(&self) -> bool {
        self.relative
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn position(&self, t: &[usize]) -> Option<usize> {
        self.subsets.binary_search_by(|s| s.as_slice().cmp(t)).ok()
    }
}

/// An element of the free module `Ω^m_S`: one coefficient per basis subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorForm {
    basis: WedgeBasis,
    coeffs: Vec<HomogPoly>,
    coeff_degree: u32,
}

impl ExteriorForm {
    pub fn zero(basis: WedgeBasis, coeff_degree: u32) -> ExteriorForm {
        let nvars = basis.n + 1;
        let coeffs = vec![HomogPoly::zero(nvars, coeff_degree); basis.len()];
        ExteriorForm {
            basis,
            coeffs,
            coeff_degree,
        }
    }

    pub fn basis(&self) -> &WedgeBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[HomogPoly] {
        &self.coeffs
    }

    pub fn coefficient(&self, t: &[usize]) -> Option<&HomogPoly> {
        self.basis.position(t).map(|k| &self.coeffs[k])
    }

    /// Total degree: coefficient degree plus `m`.
    pub fn degree(&self) -> u32 {
        self.coeff_degree + self.basis.m as u32
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(HomogPoly::is_zero)
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> ExteriorForm {
        ExteriorForm {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul_monomial(mono)).collect(),
            coeff_degree: self.coeff_degree + mono.degree(),
        }
    }

    /// Coefficient vector over `(subset, monomial)` pairs, subset-major.
    pub fn coordinates(&self, slice: &DegreeSlice) -> Vec<Rational> {
        self.coeffs.iter().flat_map(|c| slice.coordinates(c)).collect()
    }
}

/// `dF ∧ dX_J = Σ_i ∂F/∂X_i dX_i ∧ dX_J` over the sorted wedge basis. In the
/// relative case the `dX_0` component of `dF` is dropped.
pub fn wedge_with_differential(
    f: &HomogPoly,
    j: &[usize],
    relative: bool,
) -> Result<ExteriorForm, KaehlerError> {
    let n = f.nvars() - 1;
    let from = if relative { 1 } else { 0 };
    if j.windows(2).any(|w| w[0] >= w[1]) || j.iter().any(|&x| x > n || x < from) {
        return Err(KaehlerError::MalformedSubset(j.to_vec()));
    }
    let m = j.len() + 1;
    check_m(n, m, relative)?;
    let basis = WedgeBasis::new(n, m, relative);
    let mut out = ExteriorForm::zero(basis, f.degree().saturating_sub(1));
    for i in from..=n {
        let Some((sign, t)) = insertion_sign(i, j) else {
            continue;
        };
        let d = f.partial(i).expect("index in range");
        let k = out.basis.position(&t).expect("subset in basis");
        let term = d.scale(&Rational::from_integer(sign.into()));
        out.coeffs[k] = out.coeffs[k].add(&term);
    }
    Ok(out)
}

/// Hilbert function of `Ω^m` with its stabilization certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaHF {
    pub m: usize,
    pub relative: bool,
    pub table: HFTable,
    /// Regularity index: least degree from which the Hilbert function is constant.
    pub ri: usize,
    /// `(d, v)` with `d ≥ r_W + m` and `HF(d) = HF(d+1) = v`, which certifies
    /// that `v` is the Hilbert polynomial. Absent for truncated tables.
    pub certificate: Option<(usize, u64)>,
}

impl OmegaHF {
    fn certified(m: usize, relative: bool, values: Vec<u64>, at: usize) -> OmegaHF {
        let v = values[at];
        let table = HFTable::from_values(values);
        OmegaHF {
            m,
            relative,
            ri: table.stable_from(),
            table,
            certificate: Some((at, v)),
        }
    }

    fn truncated(m: usize, relative: bool, values: Vec<u64>) -> OmegaHF {
        let table = HFTable::from_values(values);
        OmegaHF {
            m,
            relative,
            ri: table.stable_from(),
            table,
            certificate: None,
        }
    }

    pub fn hp(&self) -> u64 {
        self.table.hp()
    }

    pub fn value(&self, i: i64) -> u64 {
        self.table.value(i)
    }
}

// Scan degrees with the stopping rule: stop at the first d ≥ start with
// HF(d) = HF(d + 1); give up past `cap`.
fn scan_until_stable(
    m: usize,
    relative: bool,
    start: usize,
    cap: usize,
    mut value: impl FnMut(usize) -> Result<u64, KaehlerError>,
) -> Result<OmegaHF, KaehlerError> {
    let mut values = Vec::new();
    let mut d = 0;
    loop {
        values.push(value(d)?);
        if d > start && values[d - 1] == values[d] {
            return Ok(OmegaHF::certified(m, relative, values, d - 1));
        }
        if d > cap {
            return Err(KaehlerError::NoStabilization { cap });
        }
        d += 1;
    }
}

/// Per-degree data from one elimination of the jet matrix of the fattening.
#[derive(Debug, Clone)]
struct JetSlice {
    hf_w: u64,
    hf_v: u64,
    /// Basis of `U_e`, the image of `(I_W)_e` under the top jets; `None` when
    /// `U_e` is everything.
    image: Option<Vec<Vec<BigInt>>>,
}

#[derive(Default)]
struct EngineCache {
    slices: Vec<JetSlice>,
    local: HashMap<(usize, bool), u64>,
}

/// Fast engine for `HF_{Ω^m}` of one fat point scheme; caches the jet data
/// shared between form degrees.
pub struct KaehlerEngine {
    scheme: FatPointScheme,
    layout: JetLayout,
    deg_w: u64,
    deg_v: u64,
    // (point, multi-index of order m_P) -> column in the top block of that point
    top_index: Vec<HashMap<Vec<u32>, usize>>,
    // multi-indices of order m_P - 1 per point
    below_top: Vec<Vec<Vec<u32>>>,
    cache: Mutex<EngineCache>,
}

impl KaehlerEngine {
    pub fn new(scheme: &FatPointScheme) -> KaehlerEngine {
        let layout = scheme.jet_layout();
        let n = scheme.n();
        let top_index = layout
            .top
            .iter()
            .map(|t| t.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect())
            .collect();
        let below_top = scheme
            .mults()
            .iter()
            .map(|&m| exponents_of_degree(n, m - 1))
            .collect();
        KaehlerEngine {
            scheme: scheme.clone(),
            deg_w: scheme.degree(),
            deg_v: scheme.fattening().degree(),
            layout,
            top_index,
            below_top,
            cache: Mutex::new(EngineCache::default()),
        }
    }

    pub fn scheme(&self) -> &FatPointScheme {
        &self.scheme
    }

    fn compute_slice(&self, e: u32) -> JetSlice {
        let lower = self.layout.lower_len();
        let top = self.layout.top_len();
        let rows = self.layout.monomial_rows(e, true);
        let ech = echelon(rows, lower + top);
        let hf_w = ech.pivots.iter().filter(|&&p| p < lower).count() as u64;
        let hf_v = ech.rank() as u64;
        let image = if hf_v - hf_w == top as u64 {
            None
        } else {
            Some(
                ech.rows
                    .into_iter()
                    .zip(&ech.pivots)
                    .filter(|(_, &p)| p >= lower)
                    .map(|(r, _)| {
                        let mut v = r[lower..].to_vec();
                        make_primitive(&mut v);
                        v
                    })
                    .collect(),
            )
        };
        JetSlice { hf_w, hf_v, image }
    }

    // Ensure slices 0..=e are known; past saturation of V they are implied.
    fn slice(&self, e: usize) -> JetSlice {
        let mut cache = self.cache.lock().expect("engine cache poisoned");
        loop {
            let k = cache.slices.len();
            if e < k {
                return cache.slices[e].clone();
            }
            if let Some(last) = cache.slices.last() {
                if last.hf_v == self.deg_v {
                    return last.clone();
                }
            }
            let s = self.compute_slice(k as u32);
            cache.slices.push(s);
        }
    }

    /// `HF_W(e)`.
    pub fn hf_w(&self, e: i64) -> u64 {
        if e < 0 {
            0
        } else {
            self.slice(e as usize).hf_w
        }
    }

    /// `HF_V(e)` for the fattening `V`.
    pub fn hf_v(&self, e: i64) -> u64 {
        if e < 0 {
            0
        } else {
            self.slice(e as usize).hf_v
        }
    }

    fn first_degree_where(&self, f: impl Fn(&JetSlice) -> bool) -> usize {
        let mut e = 0;
        loop {
            if f(&self.slice(e)) {
                return e;
            }
            e += 1;
        }
    }

    /// Regularity index of `W`.
    pub fn r_w(&self) -> usize {
        self.first_degree_where(|s| s.hf_w == self.deg_w)
    }

    /// Regularity index of the fattening `V`.
    pub fn r_v(&self) -> usize {
        self.first_degree_where(|s| s.hf_v == self.deg_v)
    }

    fn first_variable(&self, relative: bool) -> usize {
        if relative {
            1
        } else {
            0
        }
    }

    // Image of a top-jet vector of point `j` (block `c`) under F ↦ jets of
    // dF ∧ dX_J, written into `out` at the columns of point `j`.
    // `col(t, j, g)` gives the output column of subset t, point j, index g.
    fn apply_block(
        &self,
        j: usize,
        c: &[BigInt],
        jset: &[usize],
        relative: bool,
        wedge: &WedgeBasis,
        col: &impl Fn(usize, usize, usize) -> usize,
        out: &mut [BigInt],
    ) {
        let n = self.scheme.n();
        let (a, b) = self.layout.point_integers(j);
        let gammas = &self.below_top[j];
        let index = &self.top_index[j];
        let shifted = |g: &[u32], k: usize| -> Option<(u32, &BigInt)> {
            let mut beta = g.to_vec();
            beta[k] += 1;
            let pos = index[&beta];
            if c[pos].is_zero() {
                None
            } else {
                Some((g[k] + 1, &c[pos]))
            }
        };
        for i in self.first_variable(relative)..=n {
            let Some((sign, t)) = insertion_sign(i, jset) else {
                continue;
            };
            let ti = wedge.position(&t).expect("subset in basis");
            for (gi, g) in gammas.iter().enumerate() {
                let mut v = BigInt::zero();
                if i >= 1 {
                    if let Some((f, x)) = shifted(g, i - 1) {
                        v = x * BigInt::from(f) * b;
                    }
                } else {
                    for k in 0..n {
                        if let Some((f, x)) = shifted(g, k) {
                            v -= x * BigInt::from(f) * &a[k];
                        }
                    }
                }
                if !v.is_zero() {
                    let slot = &mut out[col(ti, j, gi)];
                    if sign > 0 {
                        *slot += v;
                    } else {
                        *slot -= v;
                    }
                }
            }
        }
    }

    fn top_offsets(&self) -> Vec<usize> {
        let mut off = Vec::new();
        let mut acc = 0;
        for t in &self.layout.top {
            off.push(acc);
            acc += t.len();
        }
        off
    }

    // Rank of Σ_J L_J(U) for a given basis of U ⊆ K^δ.
    fn relation_rank(&self, m: usize, relative: bool, image: &[Vec<BigInt>]) -> u64 {
        let n = self.scheme.n();
        let wedge = WedgeBasis::new(n, m, relative);
        let npts = self.scheme.num_points();
        let mut goff = Vec::new();
        let mut gl = 0;
        for g in &self.below_top {
            goff.push(gl);
            gl += g.len();
        }
        let ncols = wedge.len() * gl;
        let col = |t: usize, j: usize, g: usize| t * gl + goff[j] + g;
        let toff = self.top_offsets();
        let jsets = subsets(self.first_variable(relative), n, m - 1);
        let mut rows = Vec::with_capacity(jsets.len() * image.len());
        for jset in &jsets {
            for u in image {
                let mut out = vec![BigInt::zero(); ncols];
                for j in 0..npts {
                    let c = &u[toff[j]..toff[j] + self.layout.top[j].len()];
                    if c.iter().all(Zero::is_zero) {
                        continue;
                    }
                    self.apply_block(j, c, jset, relative, &wedge, &col, &mut out);
                }
                rows.push(out);
            }
        }
        int_rank(rows, ncols) as u64
    }

    // Σ over points of the rank of Σ_J L_J on the whole top-jet space.
    fn local_rank(&self, m: usize, relative: bool) -> u64 {
        if let Some(&r) = self
            .cache
            .lock()
            .expect("engine cache poisoned")
            .local
            .get(&(m, relative))
        {
            return r;
        }
        let n = self.scheme.n();
        let wedge = WedgeBasis::new(n, m, relative);
        let jsets = subsets(self.first_variable(relative), n, m - 1);
        let mut total = 0;
        for j in 0..self.scheme.num_points() {
            let gl = self.below_top[j].len();
            let ncols = wedge.len() * gl;
            let col = |t: usize, _j: usize, g: usize| t * gl + g;
            let tl = self.layout.top[j].len();
            let mut rows = Vec::new();
            for jset in &jsets {
                for k in 0..tl {
                    let mut c = vec![BigInt::zero(); tl];
                    c[k] = BigInt::one();
                    let mut out = vec![BigInt::zero(); ncols];
                    self.apply_block(j, &c, jset, relative, &wedge, &col, &mut out);
                    rows.push(out);
                }
            }
            total += int_rank(rows, ncols) as u64;
        }
        self.cache
            .lock()
            .expect("engine cache poisoned")
            .local
            .insert((m, relative), total);
        total
    }

    fn wedge_rank(&self, m: usize, relative: bool) -> u64 {
        let n = self.scheme.n() as u64;
        if relative {
            binom(n, m as u64)
        } else {
            binom(n + 1, m as u64)
        }
    }

    /// `HF_{Ω^m}(d)`.
    pub fn value(&self, m: usize, relative: bool, d: usize) -> Result<u64, KaehlerError> {
        check_m(self.scheme.n(), m, relative)?;
        if d < m {
            return Ok(0);
        }
        let e = d - m + 1;
        let hw = self.hf_w(d as i64 - m as i64);
        let slice = self.slice(e);
        let rank = match &slice.image {
            None => self.local_rank(m, relative),
            Some(image) if image.is_empty() => 0,
            Some(image) => self.relation_rank(m, relative, image),
        };
        Ok(self.wedge_rank(m, relative) * hw - rank)
    }

    /// Hilbert polynomial of `Ω^m`, from the stable presentation: once `U_e` is the
    /// whole top-jet space the relation module is a sum of local pieces.
    pub fn hp(&self, m: usize, relative: bool) -> Result<u64, KaehlerError> {
        check_m(self.scheme.n(), m, relative)?;
        Ok(self.wedge_rank(m, relative) * self.deg_w - self.local_rank(m, relative))
    }

    fn cap(&self) -> usize {
        let n = self.scheme.n();
        (2 * self.r_w() + n + 2).max(self.r_v() + n + 2)
    }

    /// Full Hilbert function of `Ω^m` up to its certified stabilization.
    pub fn omega_hf(&self, m: usize, relative: bool) -> Result<OmegaHF, KaehlerError> {
        check_m(self.scheme.n(), m, relative)?;
        let start = self.r_w() + m;
        let cap = self.cap();
        scan_until_stable(m, relative, start, cap, |d| self.value(m, relative, d))
    }

    /// Values for degrees `0..=max_degree` without a stabilization certificate.
    pub fn omega_hf_truncated(
        &self,
        m: usize,
        relative: bool,
        max_degree: usize,
    ) -> Result<OmegaHF, KaehlerError> {
        check_m(self.scheme.n(), m, relative)?;
        let values = (0..=max_degree)
            .map(|d| self.value(m, relative, d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OmegaHF::truncated(m, relative, values))
    }

    /// `Σ_{m=1}^{n+1} (-1)^{m+1} HF_{Ω^m}(d) = HF_W(d) - [d = 0]`.
    pub fn koszul_check(&self, d: usize) -> bool {
        let n = self.scheme.n();
        let mut alt: i128 = 0;
        for m in 1..=n + 1 {
            let v = self.value(m, false, d).expect("m in range") as i128;
            alt += if m % 2 == 1 { v } else { -v };
        }
        let rhs = self.scheme.hilbert_function(d as i64) as i128 - i128::from(d == 0);
        alt == rhs
    }
}

/// `HF_{Ω^m}` of `W` (relative to `K[x_0]` when `relative`).
pub fn omega_hf(w: &FatPointScheme, m: usize, relative: bool) -> Result<OmegaHF, KaehlerError> {
    KaehlerEngine::new(w).omega_hf(m, relative)
}

/// Checks the alternating sum of the Koszul complex at degree `d`.
pub fn koszul_check(w: &FatPointScheme, d: usize) -> bool {
    KaehlerEngine::new(w).koszul_check(d)
}

/// The literal presentation `Ω^m_S / (I Ω^m_S + dI ∧ Ω^{m-1}_S)`.
pub struct DirectPresentation {
    scheme: FatPointScheme,
    hf: HFTable,
    alpha: u32,
    pool: Vec<HomogPoly>,
}

impl DirectPresentation {
    /// Collects the generating pool: bases of `(I_W)_a` for `α_W ≤ a ≤ r_W + 1`.
    pub fn new(w: &FatPointScheme) -> DirectPresentation {
        let hf = w.hf_table();
        let alpha = w.initial_degree();
        let r = hf.stable_from() as u32;
        let pool = (alpha..=r + 1).flat_map(|a| w.ideal_slice(a)).collect();
        DirectPresentation {
            scheme: w.clone(),
            hf,
            alpha,
            pool,
        }
    }

    pub fn pool(&self) -> &[HomogPoly] {
        &self.pool
    }

    /// Dimension of `(I Ω^m + dI ∧ Ω^{m-1})_d`.
    pub fn submodule_slice(&self, m: usize, d: usize, relative: bool) -> Result<usize, KaehlerError> {
        let n = self.scheme.n();
        check_m(n, m, relative)?;
        if d < m {
            return Ok(0);
        }
        let cdeg = (d - m) as u32;
        let nvars = n + 1;
        let slice = DegreeSlice::new(nvars, cdeg);
        let basis = WedgeBasis::new(n, m, relative);
        let ncols = basis.len() * slice.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for g in self.scheme.ideal_slice(cdeg) {
            let coords = clear_denominators(&slice.coordinates(&g));
            for t in 0..basis.len() {
                let mut row = vec![BigInt::zero(); ncols];
                row[t * slice.len()..(t + 1) * slice.len()].clone_from_slice(&coords);
                rows.push(row);
            }
        }
        let from = if relative { 1 } else { 0 };
        let jsets = subsets(from, n, m - 1);
        for f in &self.pool {
            let a = f.degree() as usize;
            if a > d - m + 1 {
                continue;
            }
            let shift = (d - m + 1 - a) as u32;
            let monos = DegreeSlice::new(nvars, shift);
            for jset in &jsets {
                let base = wedge_with_differential(f, jset, relative)?;
                if base.is_zero() {
                    continue;
                }
                for mono in monos.monomials() {
                    let form = base.mul_monomial(mono);
                    rows.push(clear_denominators(&form.coordinates(&slice)));
                }
            }
        }
        Ok(int_rank(rows, ncols))
    }

    /// `HF_{Ω^m}(d) = rank(Ω^m_S)_d - dim(submodule)_d`.
    pub fn value(&self, m: usize, d: usize, relative: bool) -> Result<u64, KaehlerError> {
        let n = self.scheme.n();
        check_m(n, m, relative)?;
        let k = if relative {
            binom(n as u64, m as u64)
        } else {
            binom(n as u64 + 1, m as u64)
        };
        let free = k * slice_dim(n, d as i64 - m as i64);
        Ok(free - self.submodule_slice(m, d, relative)? as u64)
    }

    /// Full Hilbert function with the same stopping rule as the engine.
    pub fn omega_hf(&self, m: usize, relative: bool) -> Result<OmegaHF, KaehlerError> {
        let n = self.scheme.n();
        let r = self.hf.stable_from();
        let r_v = self.scheme.fattening().regularity_index();
        let cap = (2 * r + n + 2).max(r_v + n + 2);
        scan_until_stable(m, relative, r + m, cap, |d| self.value(m, d, relative))
    }

    pub fn initial_degree(&self) -> u32 {
        self.alpha
    }
}

/// `dim (I_W Ω^m + dI_W ∧ Ω^{m-1})_d` via the literal presentation.
pub fn submodule_slice(
    w: &FatPointScheme,
    m: usize,
    d: usize,
    relative: bool,
) -> Result<usize, KaehlerError> {
    DirectPresentation::new(w).submodule_slice(m, d, relative)
}

/// `HF_{Ω^{n+1}}(i) = HF_{S/J}(i - n - 1)` with `J` the Jacobian ideal, the ideal
/// generated by all partials of a generating set of `I_W`.
///
/// Works in jet space: `J ⊇ I_W` (Euler), so `dim S_e - dim J_e = HF_W(e) - dim
/// J_e / (I_W)_e`, and `J_e / (I_W)_e` embeds into the jets of `W`. It is built
/// degree by degree as `X_0 J_{e-1} + ... + X_n J_{e-1}` plus the jets of the
/// partials of the pool forms of degree `e + 1`.
pub fn top_form_hf(w: &FatPointScheme) -> Result<OmegaHF, KaehlerError> {
    let n = w.n();
    let hf = w.hf_table();
    let r = hf.stable_from();
    let alpha = w.initial_degree() as usize;
    let layout = w.jet_layout();
    let len = layout.lower_len();
    let npts = w.num_points();

    // block offsets and index maps of the lower jets
    let mut offsets = Vec::new();
    let mut acc = 0;
    for l in &layout.lower {
        offsets.push(acc);
        acc += l.len();
    }
    let index: Vec<HashMap<Vec<u32>, usize>> = layout
        .lower
        .iter()
        .map(|l| l.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect())
        .collect();

    // Jet vectors of degree-e forms are stored scaled by b_j^e on block j, so
    // multiplication by X_k stays integral: b^{e+1}(x_k g)_β = a_k b^e g_β + b · b^e g_{β-e_k}.
    let times_var = |v: &[BigInt], k: usize| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for j in 0..npts {
            let (a, b) = layout.point_integers(j);
            for (bi, beta) in layout.lower[j].iter().enumerate() {
                let g = &v[offsets[j] + bi];
                let mut val = if k == 0 { g * b } else { g * &a[k - 1] };
                if k >= 1 && beta[k - 1] > 0 {
                    let mut lower = beta.clone();
                    lower[k - 1] -= 1;
                    val += &v[offsets[j] + index[j][&lower]] * b;
                }
                out[offsets[j] + bi] = val;
            }
        }
        out
    };
    let scaled_jets = |f: &HomogPoly, e: u32| -> Vec<BigInt> {
        let mut q = w.jet_vector(f);
        for j in 0..npts {
            let (_, b) = layout.point_integers(j);
            let s = Rational::from_integer(num_traits::pow(b.clone(), e as usize));
            for x in &mut q[offsets[j]..offsets[j] + layout.lower[j].len()] {
                *x *= &s;
            }
        }
        let mut v = clear_denominators(&q);
        make_primitive(&mut v);
        v
    };

    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut jet_dims: Vec<u64> = Vec::new();
    let ensure = |e: usize, basis: &mut Vec<Vec<BigInt>>, jet_dims: &mut Vec<u64>| {
        while jet_dims.len() <= e {
            let cur = jet_dims.len();
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for v in basis.iter() {
                for k in 0..=n {
                    rows.push(times_var(v, k));
                }
            }
            let a = cur + 1;
            if a >= alpha && a <= r + 1 {
                for f in w.ideal_slice(a as u32) {
                    for i in 0..=n {
                        let p = f.partial(i).expect("index in range");
                        if !p.is_zero() {
                            rows.push(scaled_jets(&p, cur as u32));
                        }
                    }
                }
            }
            let ech = echelon(rows, len);
            *basis = ech
                .rows
                .into_iter()
                .map(|mut v| {
                    make_primitive(&mut v);
                    v
                })
                .collect();
            jet_dims.push(basis.len() as u64);
        }
    };

    let shift = n + 1;
    let cap = (2 * r + n + 2).max(w.fattening().regularity_index() + n + 2);
    scan_until_stable(shift, false, r + shift, cap, |i| {
        if i < shift {
            return Ok(0);
        }
        let e = i - shift;
        ensure(e, &mut basis, &mut jet_dims);
        Ok(hf.value(e as i64) - jet_dims[e])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> HomogPoly {
        HomogPoly::parse(s, n + 1).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let f = p("X0^2", 2);
        assert!(wedge_with_differential(&f, &[0], false).unwrap().is_zero());

        let g = p("X0*X1", 2);
        let w1 = wedge_with_differential(&g, &[], false).unwrap();
        assert_eq!(w1.coefficient(&[0]).unwrap(), &p("X1", 2));
        assert_eq!(w1.coefficient(&[1]).unwrap(), &p("X0", 2));
        assert!(w1.coefficient(&[2]).unwrap().is_zero());
        assert_eq!(w1.degree(), 2);

        let w2 = wedge_with_differential(&g, &[0], false).unwrap();
        assert_eq!(w2.coefficient(&[0, 1]).unwrap(), &p("-X0", 2));
        assert!(w2.coefficient(&[0, 2]).unwrap().is_zero());
        assert!(w2.coefficient(&[1, 2]).unwrap().is_zero());

        let rel = wedge_with_differential(&g, &[], true).unwrap();
        assert_eq!(rel.basis().len(), 2);
        assert_eq!(rel.coefficient(&[1]).unwrap(), &p("X0", 2));

        assert!(matches!(
            wedge_with_differential(&g, &[1, 0], false),
            Err(KaehlerError::MalformedSubset(_))
        ));
        assert!(wedge_with_differential(&g, &[0], true).is_err());
    }

    #[test]
    fn wedge_basis_sizes() {
        for n in 1..5 {
            for m in 0..=n + 1 {
                assert_eq!(WedgeBasis::new(n, m, false).len() as u64, binom(n as u64 + 1, m as u64));
                assert_eq!(WedgeBasis::new(n, m, true).len() as u64, binom(n as u64, m as u64));
            }
        }
    }

    fn four_points_p3() -> FatPointScheme {
        FatPointScheme::from_i64(
            3,
            &[(&[1, 9, 0, 0], 1), (&[1, 6, 0, 1], 1), (&[1, 2, 3, 3], 1), (&[1, 9, 3, 5], 1)],
        )
        .unwrap()
    }

    #[test]
    fn four_reduced_points_in_p3() {
        let x = four_points_p3();
        let e = KaehlerEngine::new(&x);
        let expect: [&[u64]; 4] = [&[0, 4, 10, 4, 4], &[0, 0, 6, 4, 0, 0], &[0, 0, 0, 4, 1, 0, 0], &[0, 0, 0, 0, 1, 0, 0]];
        for (m, want) in (1..=4).zip(expect) {
            let h = e.omega_hf(m, false).unwrap();
            assert_eq!(h.table.prefix(want.len()), want, "m = {m}");
        }
        assert_eq!(top_form_hf(&x).unwrap().table.prefix(7), [0, 0, 0, 0, 1, 0, 0]);
        let direct = DirectPresentation::new(&x);
        assert_eq!(direct.submodule_slice(2, 2, false).unwrap(), 0);
        assert_eq!(direct.submodule_slice(2, 4, false).unwrap(), 60);
    }

    #[test]
    fn engine_matches_direct_presentation() {
        let w = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 2), (&[1, 1, 2], 1), (&[1, -1, 3], 2)]).unwrap();
        let e = KaehlerEngine::new(&w);
        let direct = DirectPresentation::new(&w);
        for relative in [false, true] {
            for m in 1..=max_form_degree(2, relative) {
                let a = e.omega_hf(m, relative).unwrap();
                let b = direct.omega_hf(m, relative).unwrap();
                assert_eq!(a.table, b.table, "m = {m}, relative = {relative}");
                assert_eq!(a.hp(), e.hp(m, relative).unwrap());
            }
        }
        let t = top_form_hf(&w).unwrap();
        assert_eq!(t.table, e.omega_hf(3, false).unwrap().table);
    }

    #[test]
    fn koszul_small() {
        let w = FatPointScheme::from_i64(2, &[(&[1, 0, 0], 2), (&[1, 1, 1], 1)]).unwrap();
        let e = KaehlerEngine::new(&w);
        for d in 0..10 {
            assert!(e.koszul_check(d), "degree {d}");
        }
    }

    #[test]
    fn rejects_bad_form_degree() {
        let x = four_points_p3();
        assert!(omega_hf(&x, 0, false).is_err());
        assert!(omega_hf(&x, 5, false).is_err());
        assert!(omega_hf(&x, 4, true).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(0, 2, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(1, 2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(1, 0, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(1, 0, 1).is_empty());
    }
}
