//! Linear complementarity problems solved by Lemke's complementary pivoting,
//! the KKT reduction of convex quadratic programs, and exact squared
//! distances between simplices built on top of both.
//!
//! The pivoting engine is written once over [`PivotScalar`] so the same code
//! runs in exact rational arithmetic (the certified path) and in `f64` (the
//! embedder's quick heuristic).

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::LcpError;
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// Field operations plus sign tests. Exact for [`Rational`]; `f64` treats
/// magnitudes below a small tolerance as zero.
pub trait PivotScalar:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    /// `self / rhs`; only ever called with `rhs.is_pos()` or `rhs.is_neg()`.
    fn div_nonzero(&self, rhs: &Self) -> Self;
    fn is_zero_approx(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl PivotScalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn div_nonzero(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("pivot element is nonzero")
    }
}

const F64_TOL: f64 = 1e-12;

impl PivotScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > F64_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -F64_TOL
    }
    fn div_nonzero(&self, rhs: &Self) -> Self {
        self.div(rhs)
    }
}

/// `w = Mz + q`, `z, w >= 0`, `zᵀw = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcpProblem {
    m: RatMatrix,
    q: Vec<Rational>,
}

impl LcpProblem {
    pub fn new(m: RatMatrix, q: Vec<Rational>) -> Result<Self, LcpError> {
        if !m.is_square() || m.rows() != q.len() {
            return Err(LcpError::DimensionMismatch(format!(
                "M is {}x{}, q has length {}",
                m.rows(),
                m.cols(),
                q.len()
            )));
        }
        Ok(LcpProblem { m, q })
    }

    pub fn m(&self) -> &RatMatrix {
        &self.m
    }

    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    pub fn size(&self) -> usize {
        self.q.len()
    }

    /// `Mz + q`
    pub fn slack(&self, z: &[Rational]) -> Vec<Rational> {
        (0..self.size())
            .map(|i| {
                let mz: Rational = self.m.row(i).iter().zip(z).map(|(a, b)| a * b).sum();
                mz + &self.q[i]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcpStatus {
    Solved,
    RayTermination,
    /// Reserved for callers that detect infeasibility by other means.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcpSolution<T = Rational> {
    pub z: Vec<T>,
    pub w: Vec<T>,
    pub status: LcpStatus,
    pub pivots: usize,
}

/// Variable in the Lemke tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    W(usize),
    Z(usize),
    Z0,
}

impl Var {
    fn complement(self) -> Var {
        match self {
            Var::W(i) => Var::Z(i),
            Var::Z(i) => Var::W(i),
            Var::Z0 => Var::Z0,
        }
    }
}

/// Dense tableau for `I·w - M·z - d·z0 = q` with covering vector `d = 1`.
/// Columns: `w_0..w_{n-1}`, `z_0..z_{n-1}`, `z0`, rhs.
struct Tableau<T> {
    n: usize,
    rows: Vec<Vec<T>>,
    basis: Vec<Var>,
}

impl<T: PivotScalar> Tableau<T> {
    fn new(m: &[Vec<T>], q: &[T]) -> Self {
        let n = q.len();
        let width = 2 * n + 2;
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![T::zero(); width];
                row[i] = T::one();
                for j in 0..n {
                    row[n + j] = -m[i][j].clone();
                }
                row[2 * n] = -T::one();
                row[2 * n + 1] = q[i].clone();
                row
            })
            .collect();
        Tableau {
            n,
            rows,
            basis: (0..n).map(Var::W).collect(),
        }
    }

    fn col(&self, v: Var) -> usize {
        match v {
            Var::W(i) => i,
            Var::Z(i) => self.n + i,
            Var::Z0 => 2 * self.n,
        }
    }

    fn rhs(&self, row: usize) -> &T {
        &self.rows[row][2 * self.n + 1]
    }

    fn pivot(&mut self, row: usize, entering: Var) {
        let c = self.col(entering);
        let p = self.rows[row][c].clone();
        let pivot_row: Vec<T> = self.rows[row].iter().map(|x| x.div_nonzero(&p)).collect();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[c].clone();
            if factor.is_zero_approx() {
                r[c] = T::zero();
                continue;
            }
            for (x, pr) in r.iter_mut().zip(&pivot_row) {
                if !pr.is_zero_approx() {
                    *x = x.clone() - factor.clone() * pr;
                }
            }
            r[c] = T::zero();
        }
        self.rows[row] = pivot_row;
        self.basis[row] = entering;
    }

    /// Lexicographic comparison of `row_a / a` against `row_b / b` over
    /// `(rhs, B⁻¹ row)`, the latter living in the `w` columns.
    fn lex_less(&self, ra: usize, a: &T, rb: usize, b: &T) -> bool {
        let n = self.n;
        let keys = std::iter::once(2 * n + 1).chain(0..n);
        for k in keys {
            // compare x/a < y/b  <=>  x*b < y*a  (a, b same sign)
            let lhs = self.rows[ra][k].clone() * b;
            let rhs = self.rows[rb][k].clone() * a;
            let diff = lhs - &rhs;
            if diff.is_neg() {
                return true;
            }
            if diff.is_pos() {
                return false;
            }
        }
        false
    }

    /// Row leaving when `entering` increases; `None` on an unbounded ray.
    fn ratio_test(&self, entering: Var) -> Option<usize> {
        let c = self.col(entering);
        let candidates: Vec<usize> = (0..self.n).filter(|&i| self.rows[i][c].is_pos()).collect();
        let mut best = *candidates.first()?;
        for &i in &candidates[1..] {
            if self.lex_less(i, &self.rows[i][c], best, &self.rows[best][c]) {
                best = i;
            }
        }
        // let z0 leave whenever it ties on the plain ratio; this ends the run
        if let Some(z0_row) = self.basis.iter().position(|&v| v == Var::Z0) {
            if z0_row != best && self.rows[z0_row][c].is_pos() {
                let a = self.rhs(z0_row).clone() * &self.rows[best][c];
                let b = self.rhs(best).clone() * &self.rows[z0_row][c];
                if (a - &b).is_zero_approx() {
                    return Some(z0_row);
                }
            }
        }
        Some(best)
    }

    fn solution(&self, status: LcpStatus, pivots: usize) -> LcpSolution<T> {
        let mut z = vec![T::zero(); self.n];
        let mut w = vec![T::zero(); self.n];
        for (row, var) in self.basis.iter().enumerate() {
            let v = self.rhs(row).clone();
            match *var {
                Var::W(i) => w[i] = v,
                Var::Z(i) => z[i] = v,
                Var::Z0 => {}
            }
        }
        LcpSolution {
            z,
            w,
            status,
            pivots,
        }
    }
}

/// Lemke's algorithm with covering vector `1` and lexicographic ratio tests.
pub(crate) fn lemke<T: PivotScalar>(m: &[Vec<T>], q: &[T]) -> Result<LcpSolution<T>, LcpError> {
    let n = q.len();
    let mut tab = Tableau::new(m, q);
    if q.iter().all(|x| !x.is_neg()) {
        let mut sol = tab.solution(LcpStatus::Solved, 0);
        sol.w = q.to_vec();
        return Ok(sol);
    }

    // z0 enters at the row with the lexicographically most negative q;
    // among equal q entries the largest index keeps the basis lex-feasible.
    let mut leave = 0;
    for i in 1..n {
        let diff = q[i].clone() - &q[leave];
        if !diff.is_pos() {
            leave = i;
        }
    }
    let limit = 50 * (n + 1) * (n + 1) + 100;
    let mut entering = Var::Z0;
    let mut pivots = 0;
    loop {
        let leaving = tab.basis[leave];
        tab.pivot(leave, entering);
        pivots += 1;
        if leaving == Var::Z0 {
            return Ok(tab.solution(LcpStatus::Solved, pivots));
        }
        if pivots > limit {
            return Err(LcpError::Cycling(limit));
        }
        entering = leaving.complement();
        match tab.ratio_test(entering) {
            Some(row) => leave = row,
            None => return Ok(tab.solution(LcpStatus::RayTermination, pivots)),
        }
    }
}

/// Exact solve. On [`LcpStatus::Solved`] the returned `w` is recomputed as
/// `Mz + q` and complementarity is checked as a rational identity.
pub fn lemke_solve(p: &LcpProblem) -> Result<LcpSolution, LcpError> {
    let n = p.size();
    let rows: Vec<Vec<Rational>> = (0..n).map(|i| p.m.row(i).to_vec()).collect();
    let mut sol = lemke(&rows, &p.q)?;
    if sol.status == LcpStatus::Solved {
        let w = p.slack(&sol.z);
        debug_assert!(w.iter().all(|x| !x.is_negative()));
        debug_assert!(sol.z.iter().zip(&w).all(|(a, b)| (a * b).is_zero()));
        sol.w = w;
    }
    Ok(sol)
}

/// `minimize xᵀHx + cᵀx` subject to `Ax >= b`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpProblem {
    pub h: RatMatrix,
    pub c: Vec<Rational>,
    pub a: RatMatrix,
    pub b: Vec<Rational>,
}

impl QpProblem {
    pub fn new(
        h: RatMatrix,
        c: Vec<Rational>,
        a: RatMatrix,
        b: Vec<Rational>,
    ) -> Result<Self, LcpError> {
        let n = h.rows();
        if !h.is_square() || c.len() != n || a.cols() != n || a.rows() != b.len() {
            return Err(LcpError::DimensionMismatch(format!(
                "H {}x{}, c {}, A {}x{}, b {}",
                h.rows(),
                h.cols(),
                c.len(),
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        if !h.is_symmetric() {
            return Err(LcpError::DimensionMismatch("H must be symmetric".into()));
        }
        Ok(QpProblem { h, c, a, b })
    }

    pub fn variables(&self) -> usize {
        self.h.rows()
    }

    pub fn objective(&self, x: &[Rational]) -> Rational {
        let n = self.variables();
        let mut total = Rational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            let hx: Rational = (0..n).map(|j| &self.h[(i, j)] * &x[j]).sum();
            total = total + &x[i] * &hx + &self.c[i] * &x[i];
        }
        total
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.iter().all(|v| !v.is_negative())
            && (0..self.a.rows()).all(|r| {
                let ax: Rational = self.a.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
                ax >= self.b[r]
            })
    }

    pub fn recover_primal(&self, sol: &LcpSolution) -> Vec<Rational> {
        sol.z[..self.variables()].to_vec()
    }
}

/// KKT encoding with `z = (x, λ)`:
///
/// ```text
/// M = [ 2H  -Aᵀ ]    q = [  c ]
///     [  A   0  ]        [ -b ]
/// ```
pub fn qp_to_lcp(p: &QpProblem) -> LcpProblem {
    let n = p.variables();
    let k = p.a.rows();
    let m = RatMatrix::from_fn(n + k, n + k, |i, j| match (i < n, j < n) {
        (true, true) => &p.h[(i, j)] * &Rational::from(2),
        (true, false) => -&p.a[(j - n, i)],
        (false, true) => p.a[(i - n, j)].clone(),
        (false, false) => Rational::zero(),
    });
    let q = p.c.iter().cloned().chain(p.b.iter().map(|x| -x)).collect();
    LcpProblem::new(m, q).expect("KKT system is square by construction")
}

/// Exact minimum squared distance between the convex hulls of two point
/// lists, with one minimizing pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexDistance {
    pub squared: Rational,
    pub bary_x: Vec<Rational>,
    pub bary_y: Vec<Rational>,
    pub point_x: Vec<Rational>,
    pub point_y: Vec<Rational>,
}

impl SimplexDistance {
    /// `(d², ([x…], [y…]))`
    pub fn to_tuple_string(&self) -> String {
        let fmt = |p: &[Rational]| {
            let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(", "))
        };
        format!(
            "({}, ({}, {}))",
            self.squared,
            fmt(&self.point_x),
            fmt(&self.point_y)
        )
    }
}

fn check_points<T>(x: &[Vec<T>], y: &[Vec<T>]) -> Result<usize, LcpError> {
    if x.is_empty() || y.is_empty() {
        return Err(LcpError::EmptyPointList);
    }
    let d = x[0].len();
    if x.iter().chain(y).any(|p| p.len() != d) {
        return Err(LcpError::DimensionMismatch(
            "points of different dimension".into(),
        ));
    }
    Ok(d)
}

fn dot<T: PivotScalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y)
}

/// Barycentric QP with the equalities `Σα = Σβ = 1` written as paired
/// inequalities, already in LCP form.
fn distance_lcp<T: PivotScalar>(x: &[Vec<T>], y: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<T>) {
    let (m, n) = (x.len(), y.len());
    let pts: Vec<&Vec<T>> = x.iter().chain(y).collect();
    let sign = |i: usize| i < m;
    let size = m + n + 4;
    let two = T::one() + &T::one();
    let mut mat = vec![vec![T::zero(); size]; size];
    for i in 0..m + n {
        for j in 0..m + n {
            let g = dot(pts[i], pts[j]);
            let g = if sign(i) == sign(j) { g } else { -g };
            mat[i][j] = two.clone() * &g;
        }
        // constraint rows: Σα >= 1, -Σα >= -1, Σβ >= 1, -Σβ >= -1
        let (plus, minus) = if sign(i) { (0, 1) } else { (2, 3) };
        mat[m + n + plus][i] = T::one();
        mat[m + n + minus][i] = -T::one();
        mat[i][m + n + plus] = -T::one();
        mat[i][m + n + minus] = T::one();
    }
    let mut q = vec![T::zero(); size];
    for k in 0..4 {
        q[m + n + k] = if k % 2 == 0 { -T::one() } else { T::one() };
    }
    (mat, q)
}

fn combine<T: PivotScalar>(points: &[Vec<T>], weights: &[T], d: usize) -> Vec<T> {
    let mut out = vec![T::zero(); d];
    for (p, w) in points.iter().zip(weights) {
        for (o, c) in out.iter_mut().zip(p) {
            *o = o.clone() + w.clone() * c;
        }
    }
    out
}

/// Exact squared distance between `conv(x)` and `conv(y)`.
pub fn simplex_square_distance(
    x: &[Vec<Rational>],
    y: &[Vec<Rational>],
) -> Result<SimplexDistance, LcpError> {
    let d = check_points(x, y)?;
    let (mat, q) = distance_lcp(x, y);
    let sol = lemke(&mat, &q)?;
    if sol.status != LcpStatus::Solved {
        return Err(LcpError::UnexpectedRay);
    }
    let m = x.len();
    let bary_x = sol.z[..m].to_vec();
    let bary_y = sol.z[m..m + y.len()].to_vec();
    let point_x = combine(x, &bary_x, d);
    let point_y = combine(y, &bary_y, d);
    let squared = point_x
        .iter()
        .zip(&point_y)
        .map(|(a, b)| (a - b).square())
        .sum();
    Ok(SimplexDistance {
        squared,
        bary_x,
        bary_y,
        point_x,
        point_y,
    })
}

/// Floating-point squared distance, for heuristics only.
pub fn simplex_square_distance_f64(x: &[Vec<f64>], y: &[Vec<f64>]) -> Result<f64, LcpError> {
    let d = check_points(x, y)?;
    let (mat, q) = distance_lcp(x, y);
    let sol = lemke(&mat, &q)?;
    if sol.status != LcpStatus::Solved {
        return Err(LcpError::UnexpectedRay);
    }
    let m = x.len();
    let px = combine(x, &sol.z[..m], d);
    let py = combine(y, &sol.z[m..m + y.len()], d);
    Ok(px.iter().zip(&py).map(|(a, b)| (a - b) * (a - b)).sum())
}

/// Feasibility LP `Σαᵢxᵢ = Σβⱼyⱼ`, `Σα = Σβ = 1`, `α, β >= 0`, posed as the
/// LCP of `min 0` over those constraints. The skew-symmetric system is
/// copositive-plus, so a ray means the LP is infeasible.
pub fn simplices_intersect(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> Result<bool, LcpError> {
    let d = check_points(x, y)?;
    let (m, n) = (x.len(), y.len());
    let vars = m + n;
    // rows of A (as Ax >= b): ±(coordinate equations), ±(Σα), ±(Σβ)
    let mut a_rows: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    for k in 0..d {
        let row: Vec<Rational> = x
            .iter()
            .map(|p| p[k].clone())
            .chain(y.iter().map(|p| -&p[k]))
            .collect();
        a_rows.push(row.iter().map(|v| -v).collect());
        a_rows.push(row);
        b.push(Rational::zero());
        b.push(Rational::zero());
    }
    for (range, _) in [(0..m, ()), (m..vars, ())] {
        let row: Vec<Rational> = (0..vars)
            .map(|i| {
                if range.contains(&i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        a_rows.push(row.iter().map(|v| -v).collect());
        b.push(-Rational::one());
        a_rows.push(row);
        b.push(Rational::one());
    }
    let a = RatMatrix::from_rows(a_rows).expect("rows share the variable count");
    let qp = QpProblem::new(
        RatMatrix::zeros(vars, vars),
        vec![Rational::zero(); vars],
        a,
        b,
    )?;
    let lcp = qp_to_lcp(&qp);
    let sol = lemke_solve(&lcp)?;
    match sol.status {
        LcpStatus::Solved => Ok(true),
        _ => Ok(false),
    }
}
