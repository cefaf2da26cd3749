//! Homogeneous polynomials in `K[X_0, ..., X_n]` over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactla::{parse_rational, Rational};

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `C(a, k)` for a possibly negative top argument, clipped to zero when `a < k`
/// or `a < 0`. This is the convention under which `dim S_d = C(n+d, n)` vanishes
/// for negative `d`.
pub fn binom_clipped(a: i64, k: i64) -> u64 {
    if a < 0 || k < 0 || a < k {
        0
    } else {
        binom(a as u64, k as u64)
    }
}

/// Dimension of `S_d` for `S = K[X_0..X_n]`; zero for negative `d`.
pub fn slice_dim(n: usize, d: i64) -> u64 {
    binom_clipped(n as i64 + d, n as i64)
}

/// Exponent vector of a monomial in `X_0..X_n`.
///
/// Ordered by degree, then reverse-lexicographically: within a degree,
/// `X_0^d` is the largest monomial and `X_n^d` the smallest.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    // larger exponent on a later variable means smaller
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "X{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All exponent vectors of total degree `d` in `nvars` variables, in
/// lexicographic order of the exponent tuples.
pub fn exponents_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(nvars, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// The monomial basis of `S_d`, sorted from largest to smallest.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    nvars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeSlice {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let mut monomials: Vec<Monomial> = exponents_of_degree(nvars, degree)
            .into_iter()
            .map(Monomial)
            .collect();
        monomials.sort_by(|a, b| b.cmp(a));
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        DegreeSlice {
            nvars,
            degree,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coefficient vector of `f` in this slice's basis.
    pub fn coordinates(&self, f: &HomogPoly) -> Vec<Rational> {
        assert_eq!(f.degree(), self.degree, "degree mismatch");
        let mut v = vec![Rational::zero(); self.len()];
        for (m, c) in f.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    /// Polynomial with the given coefficient vector.
    pub fn polynomial<T: Clone + Into<Rational>>(&self, coeffs: &[T]) -> HomogPoly {
        assert_eq!(coeffs.len(), self.len());
        let mut terms = BTreeMap::new();
        for (m, c) in self.monomials.iter().zip(coeffs) {
            let c: Rational = c.clone().into();
            if !c.is_zero() {
                terms.insert(m.clone(), c);
            }
        }
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Homogeneous polynomial; the zero polynomial of degree `d` has no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl HomogPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.nvars(), m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Build from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars, degree);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(PolyError::ArityMismatch {
                    expected: nvars,
                    got: m.nvars(),
                });
            }
            if m.degree() != degree {
                return Err(PolyError::NotHomogeneous);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, g: &HomogPoly) -> HomogPoly {
        assert_eq!(self.degree, g.degree, "adding polynomials of different degrees");
        let mut r = self.clone();
        for (m, c) in &g.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> HomogPoly {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, g: &HomogPoly) -> HomogPoly {
        self.add(&g.neg())
    }

    pub fn scale(&self, c: &Rational) -> HomogPoly {
        if c.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn multiply(&self, g: &HomogPoly) -> HomogPoly {
        let mut r = Self::zero(self.nvars, self.degree + g.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &g.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HomogPoly {
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree + m.degree(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `X_i`.
    pub fn partial(&self, i: usize) -> Result<HomogPoly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut r = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[i] -= 1;
            r.add_term(Monomial(ex), c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(r)
    }

    /// Value at the point with coordinates `p`.
    pub fn evaluate(&self, p: &[Rational]) -> Result<Rational, PolyError> {
        if p.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: p.len(),
            });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in p.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Parse text such as `3*X0^2 - 4*X0*X1 + X1^2` or `-1/2*X2`.
    pub fn parse(s: &str, nvars: usize) -> Result<HomogPoly, PolyError> {
        let perr = |msg: &str| PolyError::Parse(format!("{msg} in {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(perr("empty input"));
        }
        // split into signed terms
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (k, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(k > 0 && cur.ends_with('^')) {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                } else if k > 0 {
                    return Err(perr("dangling sign"));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(perr("trailing sign"));
        }
        pieces.push((neg, cur));

        let mut terms = Vec::new();
        let mut degree = None;
        for (neg, body) in pieces {
            let mut coeff = Rational::one();
            let mut ex = vec![0u32; nvars];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(perr("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('X') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((a, b)) => (a, b.parse::<u32>().map_err(|_| perr("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| perr("bad variable"))?;
                    if i >= nvars {
                        return Err(PolyError::VariableOutOfRange { index: i, nvars });
                    }
                    ex[i] += pow;
                } else {
                    coeff *= parse_rational(factor).map_err(|_| perr("bad coefficient"))?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            let m = Monomial(ex);
            match degree {
                None => degree = Some(m.degree()),
                Some(d) if d != m.degree() => return Err(PolyError::NotHomogeneous),
                _ => {}
            }
            terms.push((m, coeff));
        }
        Self::from_terms(nvars, degree.unwrap_or(0), terms)
    }
}

impl fmt::Display for HomogPoly {
    /// Terms from largest to smallest monomial; unit coefficients are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.degree() == 0;
            if a.is_one() {
                if is_const {
                    write!(f, "1")?;
                } else {
                    write!(f, "{m}")?;
                }
            } else if is_const {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    fn p(s: &str, n: usize) -> HomogPoly {
        HomogPoly::parse(s, n).unwrap()
    }

    #[test]
    fn products() {
        assert_eq!(p("X0", 2).multiply(&p("X1", 2)), p("X0*X1", 2));
        assert_eq!(
            p("X1 - X0", 2).multiply(&p("X1 + X0", 2)),
            p("X1^2 - X0^2", 2)
        );
        assert!(p("3*X0^2 - X1^2", 2).multiply(&HomogPoly::zero(2, 1)).is_zero());
    }

    #[test]
    fn partials() {
        assert_eq!(p("X0^2*X1", 2).partial(0).unwrap(), p("2*X0*X1", 2));
        assert!(p("X1^3", 2).partial(0).unwrap().is_zero());
        assert!(p("X1^3", 2).partial(2).is_err());
        let f = p("X0*X1", 2);
        let euler = (0..2)
            .map(|i| HomogPoly::var(2, i).multiply(&f.partial(i).unwrap()))
            .fold(HomogPoly::zero(2, 2), |a, b| a.add(&b));
        assert_eq!(euler, f.scale(&q(2)));
    }

    #[test]
    fn evaluation() {
        assert!(p("X1 - X0", 3).evaluate(&[q(1), q(1), q(0)]).unwrap().is_zero());
        assert_eq!(p("X0^2", 2).evaluate(&[q(1), q(3)]).unwrap(), q(1));
        let c = p("3*X0^2 - 4*X0*X1 + X1^2 - 4*X0*X2 + X2^2", 3);
        assert!(c.evaluate(&[q(1), q(1), q(0)]).unwrap().is_zero());
        assert!(c.evaluate(&[q(1), q(1)]).is_err());
    }

    #[test]
    fn printing_is_degrevlex_descending() {
        let c = p("X2^2 - 4*X0*X2 + X1^2 + 3*X0^2 - 4*X0*X1", 3);
        assert_eq!(c.to_string(), "3*X0^2 - 4*X0*X1 + X1^2 - 4*X0*X2 + X2^2");
        assert_eq!(p("-1/2*X1", 2).to_string(), "-1/2*X1");
        assert_eq!(HomogPoly::constant(2, q(-3)).to_string(), "-3");
        assert_eq!(HomogPoly::zero(2, 4).to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(HomogPoly::parse("X0 + X1^2", 2), Err(PolyError::NotHomogeneous)));
        assert!(HomogPoly::parse("X0 +", 2).is_err());
        assert!(HomogPoly::parse("Y0", 2).is_err());
        assert!(HomogPoly::parse("", 2).is_err());
    }

    #[test]
    fn slice_sizes_and_order() {
        for n in 0..=5usize {
            for d in 0..=12u32 {
                let s = DegreeSlice::new(n + 1, d);
                assert_eq!(s.len() as u64, binom(n as u64 + d as u64, n as u64));
                assert!(s.monomials().windows(2).all(|w| w[0] > w[1]));
            }
        }
        let s = DegreeSlice::new(3, 2);
        let names: Vec<String> = s.monomials().iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["X0^2", "X0*X1", "X1^2", "X0*X2", "X1*X2", "X2^2"]);
    }

    #[test]
    fn clipped_binomials() {
        assert_eq!(binom_clipped(-1, 0), 0);
        assert_eq!(binom_clipped(4, 2), 6);
        assert_eq!(slice_dim(2, -1), 0);
        assert_eq!(slice_dim(2, 0), 1);
        assert_eq!(slice_dim(3, 2), 10);
    }

    fn poly_strategy(nvars: usize) -> impl Strategy<Value = HomogPoly> {
        (0u32..5).prop_flat_map(move |d| {
            let slice = DegreeSlice::new(nvars, d);
            let len = slice.len();
            proptest::collection::vec(-5i64..=5, len)
                .prop_map(move |v| slice.polynomial(&v.iter().map(|&x| q(x)).collect::<Vec<_>>()))
        })
    }

    proptest! {
        #[test]
        fn euler_relation(f in poly_strategy(4)) {
            let d = f.degree();
            prop_assume!(d > 0);
            let mut acc = HomogPoly::zero(4, d);
            for i in 0..4 {
                acc = acc.add(&HomogPoly::var(4, i).multiply(&f.partial(i).unwrap()));
            }
            prop_assert_eq!(acc, f.scale(&q(d as i64)));
        }

        #[test]
        fn mixed_partials_commute(f in poly_strategy(3), i in 0usize..3, j in 0usize..3) {
            let a = f.partial(i).unwrap().partial(j).unwrap();
            let b = f.partial(j).unwrap().partial(i).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn print_parse_round_trip(f in poly_strategy(3)) {
            let text = f.to_string();
            if !f.is_zero() {
                prop_assert_eq!(HomogPoly::parse(&text, 3).unwrap(), f);
            }
        }

        #[test]
        fn multiplication_is_evaluation_compatible(
            f in poly_strategy(3), g in poly_strategy(3),
            pt in proptest::collection::vec(-4i64..=4, 3),
        ) {
            let pt: Vec<Rational> = pt.into_iter().map(q).collect();
            let lhs = f.multiply(&g).evaluate(&pt).unwrap();
            let rhs = f.evaluate(&pt).unwrap() * g.evaluate(&pt).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
