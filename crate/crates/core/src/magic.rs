//! Magic bases and magic unitaries.
//!
//! A magic basis is an `N x N` grid of vectors in `C^K`, each a unit vector or
//! zero, pairwise orthogonal along every row and every column. Its projector
//! grid `P_ij = Proj(xi_ij)` is a magic unitary when each row and column of
//! projectors sums to the identity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{proj, projection_defect, CMatrix, UnitVector};

#[derive(Debug, Clone, PartialEq)]
pub struct MagicBasis {
    size: usize,
    dim: usize,
    vectors: Vec<UnitVector>,
}

impl MagicBasis {
    /// `vectors` in row-major order, `vectors[i * size + j] = xi_ij`.
    pub fn new(size: usize, vectors: Vec<UnitVector>, tol: f64) -> Result<Self> {
        let b = Self::new_unchecked(size, vectors)?;
        let defect = b.orthogonality_defect();
        if defect > tol {
            return Err(Error::invalid(format!(
                "magic basis rows/columns not orthogonal (defect {defect:.3e})"
            )));
        }
        Ok(b)
    }

    /// Checks shapes only.
    pub fn new_unchecked(size: usize, vectors: Vec<UnitVector>) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("magic basis of size zero"));
        }
        if vectors.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                found: vectors.len(),
            });
        }
        let dim = vectors[0].dim();
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        Ok(Self { size, dim, vectors })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[UnitVector] {
        &self.vectors
    }

    pub fn get(&self, i: usize, j: usize) -> &UnitVector {
        &self.vectors[i * self.size + j]
    }

    /// Largest `|<xi_ij, xi_ik>|` or `|<xi_ji, xi_ki>|` over `j != k`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.size;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in (j + 1)..n {
                    worst = worst
                        .max(self.get(i, j).inner(self.get(i, k)).norm())
                        .max(self.get(j, i).inner(self.get(k, i)).norm());
                }
            }
        }
        worst
    }

    pub fn projectors(&self) -> MagicUnitary {
        MagicUnitary {
            size: self.size,
            dim: self.dim,
            grid: self.vectors.iter().map(proj).collect(),
        }
    }

    /// Gram matrix of all `N^2` vectors, indexed by `i * N + j`.
    pub fn full_gram(&self) -> CMatrix {
        let m = self.vectors.len();
        let mut g = CMatrix::zeros(m, m);
        for a in 0..m {
            for b in a..m {
                let z = self.vectors[a].inner(&self.vectors[b]);
                g[(a, b)] = z;
                g[(b, a)] = z.conj();
            }
        }
        g
    }
}

/// `N x N` grid of `K x K` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicUnitary {
    size: usize,
    dim: usize,
    grid: Vec<CMatrix>,
}

impl MagicUnitary {
    pub fn new(size: usize, grid: Vec<CMatrix>) -> Result<Self> {
        if size == 0 || grid.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                found: grid.len(),
            });
        }
        let dim = grid[0].rows();
        if let Some(m) = grid.iter().find(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.rows().max(m.cols()),
            });
        }
        Ok(Self { size, dim, grid })
    }

    /// The `K = 1` grid of a permutation: `u_ij = [s(j) = i]`.
    pub fn permutation(images: &[usize]) -> Self {
        let n = images.len();
        let grid = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let mut m = CMatrix::zeros(1, 1);
                if images[j] == i {
                    m[(0, 0)] = crate::linalg::ONE;
                }
                m
            })
            .collect();
        Self { size: n, dim: 1, grid }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &CMatrix {
        &self.grid[i * self.size + j]
    }

    pub fn grid(&self) -> &[CMatrix] {
        &self.grid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagicDiagnostics {
    pub projection_defect: f64,
    pub sum_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn validate_magic(m: &MagicUnitary, tol: f64) -> MagicDiagnostics {
    let n = m.size;
    let id = CMatrix::identity(m.dim);
    let proj_defect = m.grid.iter().map(projection_defect).fold(0.0, f64::max);
    let mut sum_defect: f64 = 0.0;
    for a in 0..n {
        let mut row = CMatrix::zeros(m.dim, m.dim);
        let mut col = CMatrix::zeros(m.dim, m.dim);
        for b in 0..n {
            row = &row + m.get(a, b);
            col = &col + m.get(b, a);
        }
        sum_defect = sum_defect.max(row.max_abs_diff(&id)).max(col.max_abs_diff(&id));
    }
    MagicDiagnostics {
        projection_defect: proj_defect,
        sum_defect,
        tolerance: tol,
        passed: proj_defect <= tol && sum_defect <= tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flatness {
    Flat,
    QuasiFlat,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessReport {
    pub verdict: Flatness,
    /// Row-major numerical ranks.
    pub ranks: Vec<usize>,
    /// No entry is zero; with rank at most one this forces flatness.
    pub all_nonzero: bool,
}

/// Numerical ranks (eigenvalues of the Hermitian part above 1/2) and the
/// resulting classification.
pub fn flatness(m: &MagicUnitary) -> FlatnessReport {
    let ranks: Vec<usize> = m.grid.iter().map(|p| p.rank_above(0.5)).collect();
    let all_nonzero = ranks.iter().all(|&r| r > 0);
    let verdict = if ranks.iter().all(|&r| r == 1) {
        Flatness::Flat
    } else if ranks.iter().all(|&r| r <= 1) {
        Flatness::QuasiFlat
    } else {
        Flatness::Neither
    };
    FlatnessReport {
        verdict,
        ranks,
        all_nonzero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DEFAULT_TOL, ONE};

    #[test]
    fn single_identity_entry_is_magic() {
        let m = MagicUnitary::new(1, vec![CMatrix::identity(3)]).unwrap();
        assert!(validate_magic(&m, 1e-12).passed);
        assert_eq!(flatness(&m).verdict, Flatness::Neither);
    }

    #[test]
    fn permutation_grid_is_quasi_flat() {
        let m = MagicUnitary::permutation(&[1, 2, 0]);
        assert!(validate_magic(&m, 0.0).passed);
        let f = flatness(&m);
        assert_eq!(f.verdict, Flatness::QuasiFlat);
        assert!(!f.all_nonzero);
        assert_eq!(flatness(&MagicUnitary::permutation(&[0])).verdict, Flatness::Flat);
    }

    #[test]
    fn broken_row_sum_is_reported() {
        let mut grid = MagicUnitary::permutation(&[0, 1]).grid;
        grid[1][(0, 0)] = ONE;
        let m = MagicUnitary::new(2, grid).unwrap();
        let d = validate_magic(&m, DEFAULT_TOL);
        assert!(!d.passed);
        assert!((d.sum_defect - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_rejects_non_orthogonal_rows() {
        let e0 = UnitVector::basis(2, 0).unwrap();
        let e1 = UnitVector::basis(2, 1).unwrap();
        assert!(MagicBasis::new(2, vec![e0.clone(), e1.clone(), e1.clone(), e0.clone()], 1e-12).is_ok());
        assert!(MagicBasis::new(2, vec![e0.clone(), e0.clone(), e1.clone(), e1], 1e-12).is_err());
    }

    #[test]
    fn full_gram_is_hermitian() {
        let e0 = UnitVector::basis(2, 0).unwrap();
        let e1 = UnitVector::basis(2, 1).unwrap();
        let b = MagicBasis::new(2, vec![e0.clone(), e1.clone(), e1, e0], 1e-12).unwrap();
        let g = b.full_gram();
        assert!(g.approx_eq(&g.adjoint(), 0.0));
        assert_eq!(g[(0, 3)], ONE);
        assert_eq!(g[(0, 1)], crate::linalg::ZERO);
    }
}
