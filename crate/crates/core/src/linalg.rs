//! Dense rational matrices, Sylvester positive-definiteness and certified
//! bounds on the smallest singular value.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::LinalgError;
use crate::rational::{RatInterval, Rational, MAX_WIDENINGS};

/// Decimal places for singular-value bounds unless overridden.
pub const DEFAULT_SIGMA_DIGITS: u32 = 4;

/// Row-major dense matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = RatMatrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RatMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self[(i, k)].is_zero() && !rhs[(k, j)].is_zero())
                .map(|k| &self[(i, k)] * &rhs[(k, j)])
                .sum()
        }))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `self - c * I`
    pub fn shift_diagonal(&self, c: &Rational) -> Result<RatMatrix, LinalgError> {
        self.require_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] = &m[(i, i)] - c;
        }
        Ok(m)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Each row multiplied by the lcm of its denominators. Returns the
    /// integer rows and the per-row scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scales.push(l);
        }
        (rows, scales)
    }

    /// Whole matrix multiplied by the lcm of all denominators.
    fn integer_scaled(&self) -> Vec<Vec<BigInt>> {
        let l = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect()
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

/// `AᵀA` when `A` has no more columns than rows (ties included), else `AAᵀ`.
pub fn gram(a: &RatMatrix) -> RatMatrix {
    let at = a.transpose();
    if a.cols() <= a.rows() {
        at.matmul(a).expect("inner dimensions agree")
    } else {
        a.matmul(&at).expect("inner dimensions agree")
    }
}

/// Fraction-free Bareiss elimination with row swaps.
pub fn exact_determinant(m: &RatMatrix) -> Result<Rational, LinalgError> {
    m.require_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut a, scales) = m.integer_rows();
    let mut sign_negative = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_negative = !sign_negative;
                }
                None => return Ok(Rational::zero()),
            }
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign_negative {
        det = -det;
    }
    let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(Rational::new(det, scale)?)
}

/// One Bareiss update below and right of pivot `(k, k)`. After the step,
/// `a[k+1][k+1]` equals the `(k+2)`-th leading principal minor when no
/// rows were swapped.
fn bareiss_step(a: &mut [Vec<BigInt>], k: usize, prev: &BigInt) {
    let n = a.len();
    let (top, bottom) = a.split_at_mut(k + 1);
    let pivot_row = &top[k];
    let pivot = &pivot_row[k];
    for row in bottom.iter_mut() {
        let factor = row[k].clone();
        for j in k + 1..n {
            let v = pivot * &row[j] - &factor * &pivot_row[j];
            row[j] = v / prev;
        }
        row[k] = BigInt::zero();
    }
}

/// Sylvester's criterion: every leading principal minor is strictly positive.
pub fn is_positive_definite(m: &RatMatrix) -> Result<bool, LinalgError> {
    if !m.is_symmetric() {
        return Err(if m.is_square() {
            LinalgError::NotSymmetric
        } else {
            LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            }
        });
    }
    Ok(leading_minors_positive(m))
}

fn leading_minors_positive(m: &RatMatrix) -> bool {
    let n = m.rows();
    // a positive scalar multiple preserves the sign of every minor
    let mut a = m.integer_scaled();
    let mut prev = BigInt::one();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        if k + 1 < n {
            bareiss_step(&mut a, k, &prev);
            prev = a[k][k].clone();
        }
    }
    true
}

/// Leading principal minors computed independently by exact determinants.
pub fn leading_principal_minors(m: &RatMatrix) -> Result<Vec<Rational>, LinalgError> {
    m.require_square()?;
    (1..=m.rows())
        .map(|k| exact_determinant(&RatMatrix::from_fn(k, k, |i, j| m[(i, j)].clone())))
        .collect()
}

/// Non-certified floating estimate of the smallest singular value.
pub fn float_min_singular_value(a: &RatMatrix) -> Result<f64, LinalgError> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(LinalgError::Empty);
    }
    let f = a.to_f64();
    if f.iter().any(|x| !x.is_finite()) {
        return Err(LinalgError::EstimateUnavailable);
    }
    let svd = f.try_svd(false, false, f64::EPSILON, 10_000);
    let values = svd.ok_or(LinalgError::EstimateUnavailable)?.singular_values;
    values
        .iter()
        .copied()
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.min(v)))
        })
        .ok_or(LinalgError::EstimateUnavailable)
}

/// Certified enclosure `[lb, ub]` of the smallest singular value of `a`.
///
/// `lb` is certified by `B - lb²·I` being positive definite and `ub` by
/// `B - ub²·I` failing to be, where `B` is [`gram`]`(a)`. `lb = 0` needs no
/// certificate.
pub fn sigma_min_bounds(a: &RatMatrix, digits: u32) -> Result<RatInterval, LinalgError> {
    let estimate = float_min_singular_value(a)?;
    let b = gram(a);
    let f = Rational::from_f64_exact(estimate)?;
    let step = Rational::decimal_step(digits);

    let mut lb = f.floor_to_digits(digits);
    let mut certified_lb = false;
    for _ in 0..=MAX_WIDENINGS {
        if !lb.is_positive() {
            lb = Rational::zero();
            certified_lb = true;
            break;
        }
        if leading_minors_positive(&b.shift_diagonal(&lb.square())?) {
            certified_lb = true;
            break;
        }
        lb = &lb - &step;
    }
    if !certified_lb {
        return Err(LinalgError::SigmaUncertified { which: "lower" });
    }

    let mut ub = f.ceil_to_digits(digits);
    if ub.is_negative() {
        ub = Rational::zero();
    }
    let mut certified_ub = false;
    for _ in 0..=MAX_WIDENINGS {
        if !leading_minors_positive(&b.shift_diagonal(&ub.square())?) {
            certified_ub = true;
            break;
        }
        ub = &ub + &step;
    }
    if !certified_ub {
        return Err(LinalgError::SigmaUncertified { which: "upper" });
    }
    Ok(RatInterval::new(lb, ub)?)
}
