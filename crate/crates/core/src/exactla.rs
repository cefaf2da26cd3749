//! Exact rational scalars and dense matrices with fraction-free rank.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Parse `"3"`, `"-7"`, `"3/2"` or `"-1/6"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let bad = || ParseRationalError(s.to_string());
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| bad()),
        Some((a, b)) => {
            let num = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Least common multiple of the denominators of `row`.
pub fn common_denominator<'a>(row: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    row.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scale a rational row by the lcm of its denominators, giving an integer row
/// that spans the same line.
pub fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = common_denominator(row);
    row.iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect()
}

/// Divide an integer vector by the gcd of its entries (sign kept).
pub fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Build from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            entries.extend(r);
        }
        ExactMatrix {
            rows: nrows,
            cols,
            entries,
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| clear_denominators(self.row(i))).collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        int_rank(self.integer_rows(), self.cols)
    }

    pub fn kernel_dimension(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel `{x : Mx = 0}`, one primitive integer vector
    /// per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        int_kernel_basis(self.integer_rows(), self.cols)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Row echelon form produced by fraction-free elimination.
///
/// `rows[k]` has its leading nonzero entry in column `pivots[k]` and zeros
/// to the left of it; pivot columns are strictly increasing.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

// Work below this many entry updates per step runs on the calling thread.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 4096;

fn bareiss_update(r: &mut [BigInt], p: &[BigInt], piv: &BigInt, prev: &BigInt, c: usize) {
    let f = std::mem::take(&mut r[c]);
    let exact = prev.is_one();
    if f.is_zero() {
        if piv.is_one() && exact {
            return;
        }
        for x in r[c + 1..].iter_mut() {
            if !x.is_zero() {
                let y = &*x * piv;
                *x = if exact { y } else { y / prev };
            }
        }
    } else {
        for (x, pj) in r[c + 1..].iter_mut().zip(&p[c + 1..]) {
            let y = if pj.is_zero() {
                if x.is_zero() {
                    continue;
                }
                &*x * piv
            } else if x.is_zero() {
                -(&f * pj)
            } else {
                &*x * piv - &f * pj
            };
            *x = if exact { y } else { y / prev };
        }
    }
}

/// Fraction-free (Bareiss) row echelon form of an integer matrix.
///
/// Columns are processed left to right; in each column the pivot is the
/// remaining entry of least magnitude. Every division is exact.
pub fn echelon(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    rows.retain(|r| {
        debug_assert_eq!(r.len(), ncols);
        r.iter().any(|x| !x.is_zero())
    });
    let mut out = Echelon {
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if rows.is_empty() {
            break;
        }
        let mut best: Option<(usize, u64)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !r[c].is_zero() {
                let b = r[c].bits();
                if best.is_none_or(|(_, bb)| b < bb) {
                    best = Some((i, b));
                }
            }
        }
        let Some((pi, _)) = best else { continue };
        let prow = rows.swap_remove(pi);
        let piv = prow[c].clone();
        #[cfg(feature = "parallel")]
        {
            if rows.len() * (ncols - c) >= PAR_THRESHOLD {
                rows.par_iter_mut()
                    .for_each(|r| bareiss_update(r, &prow, &piv, &prev, c));
            } else {
                rows.iter_mut()
                    .for_each(|r| bareiss_update(r, &prow, &piv, &prev, c));
            }
        }
        #[cfg(not(feature = "parallel"))]
        rows.iter_mut()
            .for_each(|r| bareiss_update(r, &prow, &piv, &prev, c));
        rows.retain(|r| r[c + 1..].iter().any(|x| !x.is_zero()));
        prev = piv.abs();
        out.rows.push(prow);
        out.pivots.push(c);
    }
    out
}

/// Rank of an integer matrix given as rows of length `ncols`.
///
/// Tries a rank modulo a prime first: it never exceeds the rational rank, so
/// when it reaches `min(#nonzero rows, ncols)` that is the answer. Otherwise
/// falls back to Bareiss elimination.
pub fn int_rank(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let bound = rows.len().min(ncols);
    if bound == 0 {
        return 0;
    }
    if modular_rank(&rows, ncols, RANK_PRIME) == bound {
        return bound;
    }
    echelon(rows, ncols).rank()
}

/// The Mersenne prime `2^61 - 1`.
pub const RANK_PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Rank of the reduction of an integer matrix modulo the prime `p`; a lower
/// bound for its rank over `Q`.
pub fn modular_rank(rows: &[Vec<BigInt>], ncols: usize, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let y = x.mod_floor(&pb);
                    y.iter_u64_digits().next().unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pi) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, pi);
        let inv = powmod(m[rank][c], p - 2, p);
        let prow: Vec<u64> = m[rank].iter().map(|&x| mulmod(x, inv, p)).collect();
        for r in m[rank + 1..].iter_mut() {
            let f = r[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in r[c..].iter_mut().zip(&prow[c..]) {
                let t = mulmod(f, y, p);
                *x = if *x >= t { *x - t } else { *x + p - t };
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank of a matrix given as rows of rationals.
pub fn rational_rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    int_rank(rows.iter().map(|r| clear_denominators(r)).collect(), ncols)
}

/// Basis of the right kernel of an integer matrix, as primitive integer vectors.
///
/// The vector for a free column `f` has entry 1·scale at `f`, zero at the other
/// free columns, and is determined on the pivot columns by the reduced echelon form.
pub fn int_kernel_basis(rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let e = echelon(rows, ncols);
    let rref = reduced_rows(&e, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (k, &p) in e.pivots.iter().enumerate() {
                x[p] = -rref[k][f].clone();
            }
            let mut v = clear_denominators(&x);
            make_primitive(&mut v);
            v
        })
        .collect()
}

/// Reduced row echelon form (pivots normalized to 1) from an echelon form.
pub fn reduced_rows(e: &Echelon, ncols: usize) -> Vec<Vec<Rational>> {
    let mut r: Vec<Vec<Rational>> = e
        .rows
        .iter()
        .zip(&e.pivots)
        .map(|(row, &p)| {
            let d = row[p].clone();
            row.iter()
                .map(|x| Rational::new(x.clone(), d.clone()))
                .collect()
        })
        .collect();
    for k in (0..r.len()).rev() {
        let p = e.pivots[k];
        let (upper, lower) = r.split_at_mut(k);
        let pivot_row = &lower[0];
        for row in upper.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for j in p..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    /// Textbook Gaussian elimination over the rationals.
    fn naive_rank(m: &ExactMatrix) -> usize {
        let mut a: Vec<Vec<Rational>> = (0..m.nrows()).map(|i| m.row(i).to_vec()).collect();
        let mut rank = 0;
        for c in 0..m.ncols() {
            let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in 0..a.len() {
                if i != rank && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[rank][c];
                    for j in c..m.ncols() {
                        let t = &f * &a[rank][j];
                        a[i][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(ExactMatrix::zeros(0, 0).rank(), 0);
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(ExactMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
    }

    #[test]
    fn trivial_kernels() {
        assert_eq!(ExactMatrix::identity(3).kernel_dimension(), 0);
        assert_eq!(ExactMatrix::from_i64_rows(&[&[0, 0, 0, 0]]).kernel_dimension(), 4);
        assert_eq!(ExactMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).kernel_dimension(), 1);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = ExactMatrix::from_rows(
            4,
            vec![
                vec![q(1, 2), q(1, 3), q(0, 1), q(5, 1)],
                vec![q(1, 1), q(2, 3), q(1, 7), q(-1, 1)],
            ],
        );
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            for i in 0..m.nrows() {
                let s: Rational = (0..4)
                    .map(|j| m.get(i, j) * Rational::from_integer(v[j].clone()))
                    .sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn rational_entries() {
        let m = ExactMatrix::from_rows(2, vec![vec![q(1, 3), q(1, 6)], vec![q(2, 1), q(1, 1)]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_rational(" -55/6 ").unwrap(), q(-55, 6));
        assert_eq!(parse_rational("4").unwrap(), q(4, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rank_falls_back_when_the_prime_divides() {
        let p = BigInt::from(RANK_PRIME);
        let rows = vec![vec![p.clone(), BigInt::zero()], vec![BigInt::zero(), &p * 3]];
        assert_eq!(modular_rank(&rows, 2, RANK_PRIME), 0);
        assert_eq!(int_rank(rows, 2), 2);
        let neg = vec![vec![BigInt::from(-1), BigInt::from(2)], vec![BigInt::from(2), BigInt::from(-4)]];
        assert_eq!(modular_rank(&neg, 2, RANK_PRIME), 1);
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                ExactMatrix::from_rows(
                    c,
                    v.chunks(c)
                        .map(|ch| ch.iter().map(|&x| Rational::from_integer(x.into())).collect())
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_naive(m in small_matrix(8)) {
            prop_assert_eq!(m.rank(), naive_rank(&m));
        }

        #[test]
        fn rank_of_transpose(m in small_matrix(7)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_invariant_under_scaling_and_permutation(
            m in small_matrix(6),
            scales in proptest::collection::vec((1i64..=5, 1i64..=5, any::<bool>()), 6),
            shift in 0usize..6,
        ) {
            let rows: Vec<Vec<Rational>> = (0..m.nrows()).map(|i| {
                let (a, b, neg) = scales[i];
                let s = q(if neg { -a } else { a }, b);
                m.row(i).iter().map(|x| x * &s).collect()
            }).collect();
            let mut rows = rows;
            let k = shift % rows.len();
            rows.rotate_left(k);
            let scaled = ExactMatrix::from_rows(m.ncols(), rows);
            prop_assert_eq!(scaled.rank(), m.rank());
        }

        #[test]
        fn modular_rank_is_a_lower_bound(m in small_matrix(7)) {
            let rows = m.integer_rows();
            let exact = echelon(rows.clone(), m.ncols()).rank();
            prop_assert!(modular_rank(&rows, m.ncols(), 5) <= exact);
            prop_assert_eq!(modular_rank(&rows, m.ncols(), RANK_PRIME), exact);
        }

        #[test]
        fn kernel_dimension_is_cols_minus_rank(m in small_matrix(6)) {
            prop_assert_eq!(m.kernel_basis().len(), m.kernel_dimension());
        }
    }
}
