//! Exact rational scalars and dense rational matrices.
//!
//! Everything here is exact: there is no floating-point conversion on any
//! code path except the explicit [`Rational::to_f64`] used for display.
//! Rank, determinant and linear solves go through fraction-free (Bareiss)
//! elimination on integer rows, so intermediate entries stay bounded by the
//! minors of the input instead of growing as rational fractions would.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

/// Column vector of rationals.
pub type RatVector = Vec<Rational>;

impl Rational {
    /// `numer / denom`; panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_i128_ratio(numer: i128, denom: i128) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Nearest double. Only for human-readable output.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

/// Always `p/q`, including integers (`2/1`, `0/1`).
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` and bare integers `p`. Decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Rational::from_bigints(n, d)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Exact inner product.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds from integer rows; panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().map(|&x| Rational::from(x)).collect();
        RatMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Ok(RatMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
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

    /// Sub-matrix made of the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        RatMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let v = (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self.row_iter().map(|r| dot(r, v)).collect())
    }

    /// Each row multiplied by the lcm of its denominators, as big integers.
    /// Returns the integer rows and the per-row scale factors.
    fn integer_rows(&self, extra: Option<&[Rational]>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut entries: Vec<&Rational> = self.row(i).iter().collect();
            if let Some(e) = extra {
                entries.push(&e[i]);
            }
            let lcm = entries
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(
                entries
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect(),
            );
            scales.push(lcm);
        }
        (rows, scales)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_iter()).finish()
    }
}

/// Ring operations needed by fraction-free elimination. Checked integer
/// types return `None` on overflow; big integers never do.
pub(crate) trait FractionFree: Clone {
    fn ff_is_zero(&self) -> bool;
    fn ff_one() -> Self;
    /// `(a*b - c*d) / e`, where the division is known to be exact.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
}

impl FractionFree for BigInt {
    fn ff_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ff_one() -> Self {
        One::one()
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        Some((a * b - c * d) / e)
    }
}

impl FractionFree for i128 {
    fn ff_is_zero(&self) -> bool {
        *self == 0
    }
    fn ff_one() -> Self {
        1
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        a.checked_mul(*b)?
            .checked_sub(c.checked_mul(*d)?)?
            .checked_div(*e)
    }
}

/// Outcome of fraction-free row reduction.
pub(crate) struct Echelon {
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// `true` when an odd number of row swaps happened.
    pub odd_swaps: bool,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination in place. Pivots are searched only among the first
/// `pivot_cols` columns; any remaining columns (an augmented right-hand
/// side) are carried along. After the call, row `r < rank` has its pivot at
/// `pivots[r]` and rows below `rank` are zero on the pivot columns.
pub(crate) fn bareiss<T: FractionFree>(m: &mut [Vec<T>], pivot_cols: usize) -> Option<Echelon> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = T::ff_one();
    let mut pivots = Vec::new();
    let mut odd_swaps = false;
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].ff_is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            odd_swaps = !odd_swaps;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                row[j] = T::cross_div(&pivot_row[c], &row[j], &lead, &pivot_row[j], &prev)?;
            }
            row[c] = T::cross_div(&pivot_row[c], &row[c], &lead, &pivot_row[c], &prev)?;
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Some(Echelon { pivots, odd_swaps })
}

/// Exact rank via fraction-free elimination.
pub fn rank(m: &RatMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let (mut rows, _) = m.integer_rows(None);
    bareiss(&mut rows, m.cols)
        .expect("big-integer elimination cannot overflow")
        .rank()
}

/// Exact determinant of a square matrix.
pub fn det(m: &RatMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::Shape(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut rows, scales) = m.integer_rows(None);
    let ech = bareiss(&mut rows, n).expect("big-integer elimination cannot overflow");
    if ech.rank() < n {
        return Ok(Rational::zero());
    }
    let mut value = rows[n - 1][n - 1].clone();
    if ech.odd_swaps {
        value = -value;
    }
    let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Rational::from_bigints(value, scale)
}

/// Why a linear system has no unique solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveFailure {
    /// The right-hand side is outside the column space.
    NoSolution,
    /// Consistent, but the matrix has a nontrivial null space.
    Underdetermined,
}

/// Exact solution of `a x = b` when it exists and is unique.
pub fn solve(
    a: &RatMatrix,
    b: &[Rational],
) -> Result<std::result::Result<RatVector, SolveFailure>> {
    if a.rows != b.len() {
        return Err(Error::Shape(format!(
            "{} rows but right-hand side of length {}",
            a.rows,
            b.len()
        )));
    }
    let n = a.cols;
    let (mut rows, _) = a.integer_rows(Some(b));
    let ech = bareiss(&mut rows, n).expect("big-integer elimination cannot overflow");
    let r = ech.rank();
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Ok(Err(SolveFailure::NoSolution));
    }
    if r < n {
        return Ok(Err(SolveFailure::Underdetermined));
    }
    // Full column rank: pivots sit on the diagonal of the first n rows.
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from(BigRational::from_integer(rows[i][n].clone()));
        for j in i + 1..n {
            acc -= &(Rational::from(BigRational::from_integer(rows[i][j].clone())) * &x[j]);
        }
        x[i] = acc / Rational::from(BigRational::from_integer(rows[i][i].clone()));
    }
    Ok(Ok(x))
}

/// Unique solution of a square integer system as `numerators / denom`
/// with `denom > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSolution {
    pub numerators: Vec<i128>,
    pub denom: i128,
}

/// Square integer solve in checked `i128` arithmetic.
///
/// `Some(None)` means the matrix is singular; `None` means an intermediate
/// value overflowed and the caller should fall back to [`solve`].
pub fn solve_square_i128(a: &[&[i64]], b: &[i64]) -> Option<Option<IntSolution>> {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            debug_assert_eq!(row.len(), n);
            row.iter()
                .map(|&x| x as i128)
                .chain([rhs as i128])
                .collect()
        })
        .collect();
    let ech = bareiss(&mut m, n)?;
    if ech.rank() < n {
        return Some(None);
    }
    let d = m[n - 1][n - 1];
    // y = d * x is integral (adjugate formula), so every division is exact.
    let mut y = vec![0i128; n];
    for i in (0..n).rev() {
        let mut acc = d.checked_mul(m[i][n])?;
        for j in i + 1..n {
            acc = acc.checked_sub(m[i][j].checked_mul(y[j])?)?;
        }
        y[i] = acc / m[i][i];
    }
    if d < 0 {
        for v in &mut y {
            *v = v.checked_neg()?;
        }
        Some(Some(IntSolution {
            numerators: y,
            denom: d.checked_neg()?,
        }))
    } else {
        Some(Some(IntSolution {
            numerators: y,
            denom: d,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn reduced_and_positive_denominator() {
        let x = Rational::new(4, -6);
        assert_eq!(x.to_string(), "-2/3");
        assert_eq!(x, r(-2, 3));
        assert_eq!(Rational::from(3).to_string(), "3/1");
        assert_eq!(Rational::zero().to_string(), "0/1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("2/5".parse::<Rational>().unwrap(), r(2, 5));
        assert_eq!(" -3 ".parse::<Rational>().unwrap(), r(-3, 1));
        assert_eq!("6/-4".parse::<Rational>().unwrap(), r(-3, 2));
        assert!("0.5".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn rank_examples() {
        let m = RatMatrix::from_i64_rows(&[vec![3, 2, 2], vec![2, 3, 2], vec![0, 0, -1]]);
        assert_eq!(rank(&m), 3);
        assert_eq!(rank(&RatMatrix::zeros(4, 7)), 0);
        assert_eq!(rank(&RatMatrix::zeros(0, 3)), 0);
        let mac3 = RatMatrix::from_i64_rows(&[
            vec![3, 2, 2],
            vec![2, 3, 2],
            vec![2, 2, 3],
            vec![-1, 0, 0],
            vec![0, -1, 0],
            vec![0, 0, -1],
        ]);
        assert_eq!(rank(&mac3), 3);
        let deficient = RatMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 0]]);
        assert_eq!(rank(&deficient), 1);
    }

    #[test]
    fn rank_with_fractions() {
        let m = RatMatrix::from_rows(vec![vec![r(1, 2), r(1, 3)], vec![r(3, 2), r(1, 1)]]).unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn det_examples() {
        let m2 = RatMatrix::from_i64_rows(&[vec![1, 1], vec![4, 1]]);
        assert_eq!(det(&m2).unwrap(), r(-3, 1));
        assert_eq!(det(&RatMatrix::identity(5)).unwrap(), Rational::one());
        assert!(det(&RatMatrix::zeros(2, 3)).is_err());
        let swapped = RatMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(det(&swapped).unwrap(), r(-1, 1));
        let frac =
            RatMatrix::from_rows(vec![vec![r(1, 2), r(0, 1)], vec![r(0, 1), r(2, 3)]]).unwrap();
        assert_eq!(det(&frac).unwrap(), r(1, 3));
    }

    #[test]
    fn solve_examples() {
        let hj = RatMatrix::from_i64_rows(&[vec![3, 2, 2], vec![2, 3, 2], vec![0, 0, -1]]);
        let x = solve(&hj, &[r(2, 1), r(2, 1), r(0, 1)]).unwrap().unwrap();
        assert_eq!(x, vec![r(2, 5), r(2, 5), r(0, 1)]);

        let b = vec![r(7, 3), r(-1, 2), r(5, 1)];
        assert_eq!(solve(&RatMatrix::identity(3), &b).unwrap().unwrap(), b);

        let singular = RatMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(
            solve(&singular, &[r(1, 1), r(2, 1)]).unwrap(),
            Err(SolveFailure::Underdetermined)
        );
        assert_eq!(
            solve(&singular, &[r(1, 1), r(3, 1)]).unwrap(),
            Err(SolveFailure::NoSolution)
        );
        assert!(solve(&singular, &[r(1, 1)]).is_err());
    }

    #[test]
    fn overdetermined_consistent_and_inconsistent() {
        let a = RatMatrix::from_i64_rows(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(
            solve(&a, &[r(1, 1), r(2, 1), r(3, 1)]).unwrap(),
            Ok(vec![r(1, 1), r(2, 1)])
        );
        assert_eq!(
            solve(&a, &[r(1, 1), r(2, 1), r(4, 1)]).unwrap(),
            Err(SolveFailure::NoSolution)
        );
    }

    #[test]
    fn integer_fast_path_matches_rational_solve() {
        let rows: [&[i64]; 3] = [&[3, 2, 2], &[2, 3, 2], &[0, 0, -1]];
        let sol = solve_square_i128(&rows, &[2, 2, 0]).unwrap().unwrap();
        let x: Vec<Rational> = sol
            .numerators
            .iter()
            .map(|&n| Rational::from_i128_ratio(n, sol.denom))
            .collect();
        assert_eq!(x, vec![r(2, 5), r(2, 5), r(0, 1)]);
        assert!(sol.denom > 0);

        let singular: [&[i64]; 2] = [&[1, 2], &[2, 4]];
        assert_eq!(solve_square_i128(&singular, &[1, 2]), Some(None));
    }
}
