//! Dense complex linear algebra.
//!
//! Everything here works on small dense matrices stored row-major. Matrix
//! equality is tolerance based: two matrices are `eps`-equal when the largest
//! entrywise modulus of their difference is at most `eps`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for algebraically exact constructions.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `exp(2 pi i k / n)`, with `k` reduced mod `n` first.
pub fn root_of_unity(k: i64, n: usize) -> Complex64 {
    let n_i = n as i64;
    let k = k.rem_euclid(n_i);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

/// A dense complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// Re-validates the shape invariant after deserialization.
    pub fn check_shape(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: self.entries.len(),
            });
        }
        Ok(())
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

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Trace divided by the dimension.
    pub fn normalized_trace(&self) -> Complex64 {
        self.trace() / self.rows as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, eps: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.max_abs_diff(other) <= eps
    }

    /// Kronecker product with `self` as the most significant factor.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        CMatrix::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `max |U*U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&CMatrix::identity(self.cols))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_defect() <= tol
    }

    /// Row-major vectorization.
    pub fn vectorize(&self) -> Vec<Complex64> {
        self.entries.clone()
    }

    /// Eigenvalues of the Hermitian part `(A + A*)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square());
        let n = self.rows;
        let h = nalgebra::DMatrix::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Number of eigenvalues of the Hermitian part above `threshold`.
    pub fn rank_above(&self, threshold: f64) -> usize {
        self.hermitian_eigenvalues()
            .into_iter()
            .filter(|&e| e > threshold)
            .count()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Whether a vector is a unit vector or exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormClass {
    Zero,
    Unit,
}

/// A vector of norm one, or the zero vector.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    entries: Vec<Complex64>,
    class: NormClass,
}

impl UnitVector {
    /// Classifies `entries`, rejecting vectors whose norm is neither 0 nor 1 within `tol`.
    pub fn new(entries: Vec<Complex64>, tol: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("vector of dimension zero"));
        }
        if entries.iter().all(|z| *z == ZERO) {
            return Ok(Self {
                entries,
                class: NormClass::Zero,
            });
        }
        let norm = norm(&entries);
        if (norm - 1.0).abs() > tol {
            return Err(Error::invalid(format!(
                "vector norm {norm} is neither 0 nor 1"
            )));
        }
        Ok(Self {
            entries,
            class: NormClass::Unit,
        })
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("vector of dimension zero"));
        }
        let n = norm(&entries);
        if n == 0.0 {
            return Ok(Self {
                entries,
                class: NormClass::Zero,
            });
        }
        Ok(Self {
            entries: entries.into_iter().map(|z| z / n).collect(),
            class: NormClass::Unit,
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(vec![ZERO; dim], 0.0)
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::invalid(format!("basis index {index} out of range {dim}")));
        }
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        Self::new(v, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn class(&self) -> NormClass {
        self.class
    }

    pub fn is_zero(&self) -> bool {
        self.class == NormClass::Zero
    }

    /// Inner product, antilinear in `self` and linear in `other`.
    pub fn inner(&self, other: &UnitVector) -> Complex64 {
        inner(&self.entries, &other.entries)
    }

    /// Tensor product, `self` most significant.
    pub fn tensor(&self, other: &UnitVector) -> UnitVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        let class = if self.is_zero() || other.is_zero() {
            NormClass::Zero
        } else {
            NormClass::Unit
        };
        UnitVector {
            entries: out,
            class,
        }
    }
}

/// `<a, b> = sum conj(a_i) b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Rank-one orthogonal projector onto the span of `v`; zero for the zero vector.
pub fn proj(v: &UnitVector) -> CMatrix {
    let n = v.dim();
    if v.is_zero() {
        return CMatrix::zeros(n, n);
    }
    let e = v.entries();
    let nrm2: f64 = e.iter().map(|z| z.norm_sqr()).sum();
    CMatrix::from_fn(n, n, |i, j| e[i] * e[j].conj() / nrm2)
}

/// `P^2 = P = P*` within `tol` (max-entry norm).
pub fn is_projection(p: &CMatrix, tol: f64) -> bool {
    projection_defect(p) <= tol
}

/// `max(|P^2 - P|_max, |P - P*|_max)`.
pub fn projection_defect(p: &CMatrix) -> f64 {
    assert!(p.is_square(), "projection test needs a square matrix");
    let sq = p.matmul(p).max_abs_diff(p);
    let sa = p.max_abs_diff(&p.adjoint());
    sq.max(sa)
}

/// Gram matrix `G_ab = <v_a, v_b>`.
pub fn gram(vectors: &[UnitVector]) -> Result<CMatrix> {
    let Some(first) = vectors.first() else {
        return Err(Error::invalid("gram of an empty family"));
    };
    let dim = first.dim();
    if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let n = vectors.len();
    Ok(CMatrix::from_fn(n, n, |a, b| vectors[a].inner(&vectors[b])))
}
