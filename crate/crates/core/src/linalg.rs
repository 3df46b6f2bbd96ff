//! Small dense linear-algebra kernels.
//!
//! The systems in this toolkit are modest (a few hundred unknowns at most),
//! so the solvers here are plain textbook implementations kept generic over
//! the scalar type: LU with partial pivoting, Householder least squares,
//! cyclic Jacobi for symmetric eigenproblems, and a clamped cubic spline.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub};

/// 3-vector in meters (or whatever unit the caller assigns).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zero() -> Self {
        Vec3::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(self, o: Vec3<T>) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3<T>) -> Vec3<T> {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: T) -> Vec3<T> {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Vec3<T> {
        let n = self.norm();
        if n == T::zero() {
            self
        } else {
            self.scale(T::one() / n)
        }
    }

    pub fn mirror_y(self) -> Vec3<T> {
        Vec3::new(self.x, -self.y, self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Vec3<T>;
    fn add(self, o: Vec3<T>) -> Vec3<T> {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Vec3<T>) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Vec3<T>;
    fn sub(self, o: Vec3<T>) -> Vec3<T> {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Vec3<T>;
    fn neg(self) -> Vec3<T> {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Vec3<T>;
    fn mul(self, s: T) -> Vec3<T> {
        self.scale(s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Vec3<T>;
    fn div(self, s: T) -> Vec3<T> {
        self.scale(T::one() / s)
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self * v`
    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `self^T * v`
    pub fn t_matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            let vi = v[i];
            for (j, o) in out.iter_mut().enumerate() {
                *o += self[(i, j)] * vi;
            }
        }
        out
    }

    /// `self * other`
    pub fn matmul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// LU decomposition with partial pivoting, reusable across right-hand sides.
pub struct LuDecomp<T> {
    lu: Matrix<T>,
    piv: Vec<usize>,
}

impl<T: Real> LuDecomp<T> {
    pub fn factor(mut a: Matrix<T>) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::Numerical("LU needs a square matrix".into()));
        }
        let mut piv: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        let tol = scale * T::of(1e-14) + T::of(1e-300);
        for k in 0..n {
            let mut p = k;
            let mut best = a[(k, k)].abs();
            for i in k + 1..n {
                let v = a[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tol {
                return Err(Error::Numerical(format!(
                    "singular matrix at pivot {k} (|pivot| = {best:?})"
                )));
            }
            if p != k {
                piv.swap(k, p);
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let m = a[(i, k)] / pivot;
                a[(i, k)] = m;
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] = a[(i, j)] - m * akj;
                }
            }
        }
        Ok(LuDecomp { lu: a, piv })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }
}

/// Solve `a x = b` once.
pub fn lu_solve<T: Real>(a: Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    Ok(LuDecomp::factor(a)?.solve(b))
}

/// Least squares via Householder QR for `m >= n`; errors when the columns
/// are numerically dependent.
pub fn lstsq<T: Real>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let m = a.rows();
    let n = a.cols();
    if m < n {
        return Err(Error::RankDeficient(format!(
            "underdetermined least squares ({m} rows < {n} cols)"
        )));
    }
    assert_eq!(b.len(), m);
    let mut r = a.clone();
    let mut y = b.to_vec();
    let scale = r.max_abs();
    let tol = scale * T::of(1e-13) * T::of_usize(m.max(1)) + T::of(1e-300);
    for k in 0..n {
        // Householder vector for column k
        let mut norm = T::zero();
        for i in k..m {
            norm = norm + r[(i, k)] * r[(i, k)];
        }
        let norm = norm.sqrt();
        if norm <= tol {
            return Err(Error::RankDeficient(format!(
                "column {k} numerically dependent (norm {norm:?})"
            )));
        }
        let alpha = if r[(k, k) ] >= T::zero() { -norm } else { norm };
        let mut v = vec![T::zero(); m - k];
        v[0] = r[(k, k)] - alpha;
        for i in k + 1..m {
            v[i - k] = r[(i, k)];
        }
        let vtv = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
        if vtv == T::zero() {
            continue;
        }
        r[(k, k)] = alpha;
        for i in k + 1..m {
            r[(i, k)] = T::zero();
        }
        for j in k + 1..n {
            let mut dot = T::zero();
            for i in k..m {
                dot = dot + v[i - k] * r[(i, j)];
            }
            let f = T::of(2.0) * dot / vtv;
            for i in k..m {
                let d = f * v[i - k];
                r[(i, j)] = r[(i, j)] - d;
            }
        }
        let mut dot = T::zero();
        for i in k..m {
            dot = dot + v[i - k] * y[i];
        }
        let f = T::of(2.0) * dot / vtv;
        for i in k..m {
            y[i] = y[i] - f * v[i - k];
        }
    }
    // back substitution on the n x n triangle
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in i + 1..n {
            s = s - r[(i, j)] * x[j];
        }
        x[i] = s / r[(i, i)];
    }
    Ok(x)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// matrix columns.
pub fn sym_eigen<T: Real>(a: &Matrix<T>) -> Result<(Vec<T>, Matrix<T>)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Eigen("matrix not square".into()));
    }
    let mut m = a.clone();
    // symmetry guard: average any asymmetry away
    for i in 0..n {
        for j in i + 1..n {
            let v = (m[(i, j)] + m[(j, i)]) / T::of(2.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let mut v = Matrix::identity(n);
    let scale = m.max_abs() + T::of(1e-300);
    let eps = T::of(1e-14);
    let max_sweeps = 64;
    let mut converged = false;
    for _sweep in 0..max_sweeps {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(m[(i, j)].abs());
            }
        }
        if off <= scale * eps {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= scale * eps {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = {
                    let s = if theta >= T::zero() { T::one() } else { -T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        // one last check; Jacobi converges quadratically so this is rare
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(m[(i, j)].abs());
            }
        }
        if off > scale * T::of(1e-10) {
            return Err(Error::Eigen(format!(
                "Jacobi failed to converge: off-diagonal {off:?} vs scale {scale:?}"
            )));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[(i, i)]).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_j)] = v[(i, old_j)];
        }
    }
    Ok((eigenvalues, vectors))
}

/// Boundary condition for the spline ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplineEnd<T> {
    Natural,
    /// First derivative pinned to the given value.
    Clamped(T),
}

/// Cubic spline interpolant through `(xs, ys)` with configurable end
/// conditions. Knots must be strictly increasing.
#[derive(Debug, Clone)]
pub struct CubicSpline<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    y2: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>, start: SplineEnd<T>, end: SplineEnd<T>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::Numerical("spline needs >= 2 matching knots".into()));
        }
        for w in xs.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Numerical("spline knots must strictly increase".into()));
            }
        }
        // tridiagonal solve for second derivatives (Numerical-Recipes style)
        let mut y2 = vec![T::zero(); n];
        let mut u = vec![T::zero(); n];
        match start {
            SplineEnd::Natural => {
                y2[0] = T::zero();
                u[0] = T::zero();
            }
            SplineEnd::Clamped(d) => {
                y2[0] = T::of(-0.5);
                let h = xs[1] - xs[0];
                u[0] = (T::of(3.0) / h) * ((ys[1] - ys[0]) / h - d);
            }
        }
        for i in 1..n - 1 {
            let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
            let p = sig * y2[i - 1] + T::of(2.0);
            y2[i] = (sig - T::one()) / p;
            let a = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
                - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            u[i] = (T::of(6.0) * a / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
        }
        let (qn, un) = match end {
            SplineEnd::Natural => (T::zero(), T::zero()),
            SplineEnd::Clamped(d) => {
                let h = xs[n - 1] - xs[n - 2];
                (
                    T::of(0.5),
                    (T::of(3.0) / h) * (d - (ys[n - 1] - ys[n - 2]) / h),
                )
            }
        };
        y2[n - 1] = (un - qn * u[n - 2]) / (qn * y2[n - 2] + T::one());
        for i in (0..n - 1).rev() {
            y2[i] = y2[i] * y2[i + 1] + u[i];
        }
        Ok(CubicSpline { xs, ys, y2 })
    }

    pub fn eval(&self, x: T) -> T {
        let n = self.xs.len();
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (hi + lo) / 2;
            if self.xs[mid] > x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let h = self.xs[hi] - self.xs[lo];
        let a = (self.xs[hi] - x) / h;
        let b = (x - self.xs[lo]) / h;
        a * self.ys[lo]
            + b * self.ys[hi]
            + ((a * a * a - a) * self.y2[lo] + (b * b * b - b) * self.y2[hi]) * (h * h)
                / T::of(6.0)
    }
}

/// Linear-interpolation quantile (R type 7) of already-sorted data.
pub fn quantile_sorted<T: Real>(sorted: &[T], q: f64) -> T {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = T::of(pos - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}
