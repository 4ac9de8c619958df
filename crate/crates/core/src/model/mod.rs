//! Flat matrix models given as finite weighted samples of magic bases.
//!
//! A model of size `N` and dimension `K` assigns to every sample point `x` a
//! magic basis `xi^x` in `C^K`; the model state is
//! `u_i1j1 .. u_ipjp -> sum_x w_x tr(P_i1j1^x .. P_ipjp^x)` with `tr` the
//! normalized trace on `M_K`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{UnitVector, DEFAULT_TOL};
use crate::magic::{flatness, validate_magic, Flatness, MagicBasis};

mod builders;
pub(crate) mod moments;
mod relations;

pub use builders::{
    classical_model, direct_sum_model, fourier_model, hadamard_model, latin_square_model,
    latin_square_point, regular_model, tensor_model, universal_latin_model,
};
pub use moments::{
    cesaro_from_tensor, cesaro_moments, character_law, stationarity_test, t_matrix, t_matrix_capped,
    CesaroResult, CharacterLaw, MomentEstimate, MomentTensor, StationarityReport,
    DEFAULT_TENSOR_CAP,
};
pub use relations::{
    double_transitivity_table, double_transitivity_test, orbit_relations, transitivity_estimate,
    DoubleTransitivityReport, OrbitRelation, TransitivityReport,
};

/// Tolerance on `sum w_x = 1`.
const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    pub weight: f64,
    pub basis: MagicBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatModel {
    size: usize,
    dim: usize,
    points: Vec<ModelPoint>,
}

impl FlatModel {
    pub fn new(points: Vec<ModelPoint>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("model has no sample points"))?;
        let (size, dim) = (first.basis.size(), first.basis.dim());
        for p in &points {
            if p.basis.size() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: p.basis.size(),
                });
            }
            if p.basis.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.basis.dim(),
                });
            }
            if !(p.weight > 0.0 && p.weight.is_finite()) {
                return Err(Error::invalid(format!("weight {} is not positive", p.weight)));
            }
        }
        let total: f64 = points.iter().map(|p| p.weight).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { size, dim, points })
    }

    /// Equal weights `1 / len`.
    pub fn uniform(bases: Vec<MagicBasis>) -> Result<Self> {
        let w = 1.0 / bases.len().max(1) as f64;
        Self::new(
            bases
                .into_iter()
                .map(|basis| ModelPoint { weight: w, basis })
                .collect(),
        )
    }

    pub fn single(basis: MagicBasis) -> Self {
        Self {
            size: basis.size(),
            dim: basis.dim(),
            points: vec![ModelPoint { weight: 1.0, basis }],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ModelPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sub-model on a contiguous range of points, weights renormalized.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<FlatModel> {
        let pts = &self.points[range];
        let total: f64 = pts.iter().map(|p| p.weight).sum();
        FlatModel::new(
            pts.iter()
                .map(|p| ModelPoint {
                    weight: p.weight / total,
                    basis: p.basis.clone(),
                })
                .collect(),
        )
    }

    /// Magic-unitary check at every point.
    pub fn validate(&self, tol: f64) -> ModelCheck {
        let mut out = ModelCheck {
            points: self.points.len(),
            projection_defect: 0.0,
            sum_defect: 0.0,
            orthogonality_defect: 0.0,
            tolerance: tol,
            passed: true,
        };
        for p in &self.points {
            let d = validate_magic(&p.basis.projectors(), tol);
            out.projection_defect = out.projection_defect.max(d.projection_defect);
            out.sum_defect = out.sum_defect.max(d.sum_defect);
            out.orthogonality_defect = out.orthogonality_defect.max(p.basis.orthogonality_defect());
        }
        out.passed = out.projection_defect <= tol
            && out.sum_defect <= tol
            && out.orthogonality_defect <= tol;
        out
    }

    /// Worst classification over all points.
    pub fn flatness(&self) -> Flatness {
        let mut worst = Flatness::Flat;
        for p in &self.points {
            match flatness(&p.basis.projectors()).verdict {
                Flatness::Neither => return Flatness::Neither,
                Flatness::QuasiFlat => worst = Flatness::QuasiFlat,
                Flatness::Flat => {}
            }
        }
        worst
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            size: self.size,
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| PointFile {
                    weight: p.weight,
                    vectors: p
                        .basis
                        .vectors()
                        .iter()
                        .map(|v| v.entries().to_vec())
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelCheck {
    pub points: usize,
    pub projection_defect: f64,
    pub sum_defect: f64,
    pub orthogonality_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// On-disk model: `{"size", "dim", "points": [{"weight", "vectors"}]}`, with
/// `N^2` row-major vectors of `[re, im]` pairs per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub size: usize,
    pub dim: usize,
    pub points: Vec<PointFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFile {
    pub weight: f64,
    pub vectors: Vec<Vec<Complex64>>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<FlatModel> {
        let n = self.size;
        let points = self
            .points
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                if p.vectors.len() != n * n {
                    return Err(Error::invalid(format!(
                        "point {} has {} vectors, expected {}",
                        k + 1,
                        p.vectors.len(),
                        n * n
                    )));
                }
                let vectors = p
                    .vectors
                    .into_iter()
                    .map(|v| {
                        if v.len() != self.dim {
                            return Err(Error::DimensionMismatch {
                                expected: self.dim,
                                found: v.len(),
                            });
                        }
                        UnitVector::new(v, DEFAULT_TOL)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ModelPoint {
                    weight: p.weight,
                    basis: MagicBasis::new(n, vectors, DEFAULT_TOL)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FlatModel::new(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fourier_matrix;
    use crate::perm::families;

    #[test]
    fn file_roundtrip() {
        let m = fourier_model(&[4]).unwrap();
        let json = serde_json::to_string(&m.to_file()).unwrap();
        let back: ModelFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_model().unwrap(), m);
    }

    #[test]
    fn rejects_bad_weights_and_vectors() {
        let f = fourier_matrix(&[2]).unwrap();
        let b = crate::hadamard::magic_from_hadamard(&f);
        let bad = FlatModel::new(vec![ModelPoint {
            weight: 0.5,
            basis: b.clone(),
        }]);
        assert!(bad.is_err());
        let mut file = FlatModel::single(b).to_file();
        file.points[0].vectors[0][0] *= 2.0;
        assert!(file.into_model().is_err());
    }

    #[test]
    fn classical_model_is_quasi_flat() {
        let m = classical_model(&families::cyclic(3).unwrap());
        assert!(m.validate(0.0).passed);
        assert_eq!(m.flatness(), Flatness::QuasiFlat);
        assert_eq!(fourier_model(&[3]).unwrap().flatness(), Flatness::Flat);
    }
}
