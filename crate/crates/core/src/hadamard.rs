//! Complex Hadamard matrices, their magic bases, and the Fourier transform on
//! `Z_2^n`.
//!
//! Matrices are stored unnormalized, with unimodular entries and `H H* = N I`.
//! The `1/sqrt(N)` factor only appears when building unit vectors.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, root_of_unity, CMatrix, UnitVector, ONE};
use crate::magic::MagicBasis;
use crate::random::random_phase;

/// Largest Fourier matrix we are willing to build.
pub const MAX_HADAMARD_SIZE: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct HadamardMatrix {
    matrix: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HadamardDiagnostics {
    pub valid: bool,
    /// `max | |H_ij| - 1 |`.
    pub modulus_deviation: f64,
    /// `max_{i != k} |<H_i, H_k>|`.
    pub row_overlap: f64,
    pub tolerance: f64,
}

pub fn validate_hadamard(m: &CMatrix, tol: f64) -> HadamardDiagnostics {
    if !m.is_square() {
        return HadamardDiagnostics {
            valid: false,
            modulus_deviation: f64::INFINITY,
            row_overlap: f64::INFINITY,
            tolerance: tol,
        };
    }
    let n = m.rows();
    let modulus_deviation = m
        .entries()
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let mut row_overlap: f64 = 0.0;
    for i in 0..n {
        for k in (i + 1)..n {
            row_overlap = row_overlap.max(inner(m.row(i), m.row(k)).norm());
        }
    }
    HadamardDiagnostics {
        valid: modulus_deviation <= tol && row_overlap <= tol,
        modulus_deviation,
        row_overlap,
        tolerance: tol,
    }
}

impl HadamardMatrix {
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        let d = validate_hadamard(&matrix, tol);
        if !d.valid {
            return Err(Error::invalid(format!(
                "not a complex Hadamard matrix: modulus deviation {:.3e}, row overlap {:.3e}",
                d.modulus_deviation, d.row_overlap
            )));
        }
        Ok(Self { matrix })
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Rescaled so the first row and column are all ones:
    /// `H_il H_00 / (H_i0 H_0l)`.
    pub fn dephased(&self) -> CMatrix {
        let h = &self.matrix;
        let n = self.size();
        CMatrix::from_fn(n, n, |i, l| h[(i, l)] * h[(0, 0)] / (h[(i, 0)] * h[(0, l)]))
    }

    pub fn to_file(&self) -> HadamardFile {
        HadamardFile {
            kind: "hadamard".into(),
            matrix: self.matrix.clone(),
        }
    }
}

/// On-disk form: the matrix JSON plus `"kind": "hadamard"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HadamardFile {
    pub kind: String,
    #[serde(flatten)]
    pub matrix: CMatrix,
}

impl HadamardFile {
    pub fn into_hadamard(self, tol: f64) -> Result<HadamardMatrix> {
        if self.kind != "hadamard" {
            return Err(Error::invalid(format!("expected kind \"hadamard\", got \"{}\"", self.kind)));
        }
        self.matrix.check_shape()?;
        HadamardMatrix::new(self.matrix, tol)
    }
}

fn product_size(sizes: &[usize]) -> Result<usize> {
    if sizes.is_empty() {
        return Err(Error::invalid("empty list of cycle sizes"));
    }
    let mut n: usize = 1;
    for &s in sizes {
        if s == 0 {
            return Err(Error::invalid("cycle sizes must be positive"));
        }
        n = n
            .checked_mul(s)
            .filter(|&n| n <= MAX_HADAMARD_SIZE)
            .ok_or(Error::CapExceeded {
                what: "Fourier matrix",
                size: n.saturating_mul(s),
                cap: MAX_HADAMARD_SIZE,
            })?;
    }
    Ok(n)
}

/// `F_N = (w^{ij})` with `w = exp(2 pi i / N)`.
pub fn cyclic_fourier(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| root_of_unity((i * j % n) as i64, n))
}

/// `F_{N_1} (x) .. (x) F_{N_s}`, leftmost factor most significant.
pub fn fourier_matrix(sizes: &[usize]) -> Result<HadamardMatrix> {
    product_size(sizes)?;
    let m = sizes
        .iter()
        .map(|&s| cyclic_fourier(s))
        .reduce(|a, b| a.kron(&b))
        .expect("non-empty");
    Ok(HadamardMatrix { matrix: m })
}

/// Parses `4`, `2x2`, `2x3x...` into cycle sizes.
pub fn parse_cycle_sizes(s: &str) -> Result<Vec<usize>> {
    s.split(['x', 'X', ','])
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad cycle size `{t}` in `{s}`")))
        })
        .collect()
}

/// Unimodular `|G| x |H|` array of deformation phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationParam {
    pub left_size: usize,
    pub right_size: usize,
    /// Row-major, `q[i * right_size + b]`.
    pub q: Vec<Complex64>,
}

impl DeformationParam {
    pub fn new(left_size: usize, right_size: usize, q: Vec<Complex64>, tol: f64) -> Result<Self> {
        if q.len() != left_size * right_size {
            return Err(Error::DimensionMismatch {
                expected: left_size * right_size,
                found: q.len(),
            });
        }
        if let Some((k, z)) = q.iter().enumerate().find(|(_, z)| (z.norm() - 1.0).abs() > tol) {
            return Err(Error::invalid(format!(
                "deformation entry ({}, {}) has modulus {}",
                k / right_size + 1,
                k % right_size + 1,
                z.norm()
            )));
        }
        Ok(Self {
            left_size,
            right_size,
            q,
        })
    }

    pub fn ones(left_size: usize, right_size: usize) -> Self {
        Self {
            left_size,
            right_size,
            q: vec![ONE; left_size * right_size],
        }
    }

    /// Phases `exp(2 pi i u)` with `u` uniform.
    pub fn random<R: Rng + ?Sized>(left_size: usize, right_size: usize, rng: &mut R) -> Self {
        Self {
            left_size,
            right_size,
            q: (0..left_size * right_size).map(|_| random_phase(rng)).collect(),
        }
    }

    pub fn get(&self, i: usize, b: usize) -> Complex64 {
        self.q[i * self.right_size + b]
    }
}

/// Deformed Fourier matrix with entries `Q_ib (F_G)_ij (F_H)_ab` at row
/// `i |H| + a`, column `j |H| + b`.
pub fn dita_deform(left: &[usize], right: &[usize], q: &DeformationParam) -> Result<HadamardMatrix> {
    let fg = fourier_matrix(left)?.into_matrix();
    let fh = fourier_matrix(right)?.into_matrix();
    let (m, n) = (fg.rows(), fh.rows());
    product_size(&[m, n])?;
    if q.left_size != m || q.right_size != n {
        return Err(Error::invalid(format!(
            "deformation parameter is {}x{}, expected {m}x{n}",
            q.left_size, q.right_size
        )));
    }
    DeformationParam::new(m, n, q.q.clone(), 1e-9)?;
    let matrix = CMatrix::from_fn(m * n, m * n, |r, c| {
        let (i, a) = (r / n, r % n);
        let (j, b) = (c / n, c % n);
        q.get(i, b) * fg[(i, j)] * fh[(a, b)]
    });
    Ok(HadamardMatrix { matrix })
}

/// `xi_ij = (H_i / H_j) / sqrt(N)`, entrywise quotient of rows.
pub fn magic_from_hadamard(h: &HadamardMatrix) -> MagicBasis {
    let n = h.size();
    let scale = 1.0 / (n as f64).sqrt();
    let vectors = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let v = h
                .matrix
                .row(i)
                .iter()
                .zip(h.matrix.row(j))
                .map(|(a, b)| a / b * scale)
                .collect();
            UnitVector::normalized(v).expect("nonempty")
        })
        .collect();
    MagicBasis::new_unchecked(n, vectors).expect("square grid")
}

/// Why a magic basis is not of Hadamard type. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DimensionMismatch { size: usize, dim: usize },
    ZeroEntry { i: usize, j: usize, coord: usize },
    NotUnimodular { i: usize, j: usize, coord: usize, modulus: f64 },
    DiagonalNotOnes { i: usize, deviation: f64 },
    Multiplicative { i: usize, j: usize, k: usize, deviation: f64 },
    Exchange { i: usize, j: usize, k: usize, l: usize, deviation: f64 },
    RowsNotOrthogonal { overlap: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::DimensionMismatch { size, dim } => {
                write!(f, "vector dimension {dim} differs from grid size {size}")
            }
            Violation::ZeroEntry { i, j, coord } => {
                write!(f, "zero entry: coordinate {} of xi_({},{})", coord + 1, i + 1, j + 1)
            }
            Violation::NotUnimodular { i, j, coord, modulus } => write!(
                f,
                "rescaled xi_({},{}) has coordinate {} of modulus {modulus:.6}",
                i + 1,
                j + 1,
                coord + 1
            ),
            Violation::DiagonalNotOnes { i, deviation } => {
                write!(f, "xi_({0},{0}) is not the all-one vector (deviation {deviation:.3e})", i + 1)
            }
            Violation::Multiplicative { i, j, k, deviation } => write!(
                f,
                "xi_ij xi_jk != xi_ik at (i,j,k) = ({},{},{}), deviation {deviation:.3e}",
                i + 1,
                j + 1,
                k + 1
            ),
            Violation::Exchange { i, j, k, l, deviation } => write!(
                f,
                "xi_ij xi_kl != xi_il xi_kj at (i,j,k,l) = ({},{},{},{}), deviation {deviation:.3e}",
                i + 1,
                j + 1,
                k + 1,
                l + 1
            ),
            Violation::RowsNotOrthogonal { overlap } => {
                write!(f, "reconstructed rows are not orthogonal (overlap {overlap:.3e})")
            }
        }
    }
}

fn max_dev(a: impl Iterator<Item = Complex64>, b: impl Iterator<Item = Complex64>) -> f64 {
    a.zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Tests whether `xi` comes from a complex Hadamard matrix.
///
/// Each vector is rescaled by `sqrt(N)` and divided by its first coordinate,
/// which fixes the phase freedom of the projectors. The rescaled vectors must
/// be unimodular, with `xi_ii = 1`, `xi_ij xi_jk = xi_ik` and
/// `xi_ij xi_kl = xi_il xi_kj` entrywise. On success the rows `H_i = xi_i1`
/// form the dephased Hadamard matrix (first row and column all ones).
pub fn magic_basis_is_hadamard_type(
    xi: &MagicBasis,
    tol: f64,
) -> std::result::Result<HadamardMatrix, Violation> {
    let n = xi.size();
    if xi.dim() != n {
        return Err(Violation::DimensionMismatch {
            size: n,
            dim: xi.dim(),
        });
    }
    let s = (n as f64).sqrt();
    // zeros make the rescaling impossible, so report them before anything else
    for (k, v) in xi.vectors().iter().enumerate() {
        if let Some(c) = v.entries().iter().position(|z| z.norm() * s <= tol) {
            return Err(Violation::ZeroEntry {
                i: k / n,
                j: k % n,
                coord: c,
            });
        }
    }
    let mut eta: Vec<Vec<Complex64>> = Vec::with_capacity(n * n);
    for (k, v) in xi.vectors().iter().enumerate() {
        let (i, j) = (k / n, k % n);
        let raw: Vec<Complex64> = v.entries().iter().map(|z| z * s).collect();
        if let Some((c, z)) = raw.iter().enumerate().find(|(_, z)| (z.norm() - 1.0).abs() > tol) {
            return Err(Violation::NotUnimodular {
                i,
                j,
                coord: c,
                modulus: z.norm(),
            });
        }
        let lead = raw[0];
        eta.push(raw.into_iter().map(|z| z / lead).collect());
    }
    let get = |i: usize, j: usize| &eta[i * n + j];
    for i in 0..n {
        let deviation = max_dev(get(i, i).iter().copied(), std::iter::repeat(ONE));
        if deviation > tol {
            return Err(Violation::DiagonalNotOnes { i, deviation });
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = get(i, j).iter().zip(get(j, k)).map(|(a, b)| a * b);
                let deviation = max_dev(lhs, get(i, k).iter().copied());
                if deviation > tol {
                    return Err(Violation::Multiplicative { i, j, k, deviation });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = get(i, j).iter().zip(get(k, l)).map(|(a, b)| a * b);
                    let rhs = get(i, l).iter().zip(get(k, j)).map(|(a, b)| a * b);
                    let deviation = max_dev(lhs, rhs);
                    if deviation > tol {
                        return Err(Violation::Exchange { i, j, k, l, deviation });
                    }
                }
            }
        }
    }
    let matrix = CMatrix::from_fn(n, n, |i, c| get(i, 0)[c]);
    // orthogonality follows from that of xi, which is not checked on unchecked grids
    let d = validate_hadamard(&matrix, tol * n as f64);
    if !d.valid {
        return Err(Violation::RowsNotOrthogonal {
            overlap: d.row_overlap,
        });
    }
    Ok(HadamardMatrix { matrix })
}

fn check_power_of_two(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::invalid(format!("length {len} is not a power of two")));
    }
    Ok(())
}

fn walsh_hadamard(v: &mut [Complex64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for k in block..block + h {
                let (a, b) = (v[k], v[k + h]);
                v[k] = a + b;
                v[k + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `alpha(f)_j = 2^{-n} sum_i (-1)^{<i,j>} f_i`.
pub fn z2n_fourier_forward(f: &[Complex64]) -> Result<Vec<Complex64>> {
    check_power_of_two(f.len())?;
    let mut v = f.to_vec();
    walsh_hadamard(&mut v);
    let scale = 1.0 / f.len() as f64;
    Ok(v.into_iter().map(|z| z * scale).collect())
}

/// `beta(g)_i = sum_j (-1)^{<i,j>} g_j`, inverse of the forward map.
pub fn z2n_fourier_inverse(g: &[Complex64]) -> Result<Vec<Complex64>> {
    check_power_of_two(g.len())?;
    let mut v = g.to_vec();
    walsh_hadamard(&mut v);
    Ok(v)
}

/// Moments of the free Poisson law of parameter `t`:
/// `m_p = sum_k N(p, k) t^k` with Narayana numbers `N(p, k)`.
pub fn free_poisson_moments(t: f64, p_max: usize) -> Vec<f64> {
    (1..=p_max)
        .map(|p| {
            (1..=p)
                .map(|k| narayana(p as u64, k as u64) as f64 * t.powi(k as i32))
                .sum()
        })
        .collect()
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn narayana(p: u64, k: u64) -> u128 {
    binomial(p, k) * binomial(p, k - 1) / p as u128
}
