use super::{FlatModel, ModelPoint};
use crate::error::{Error, Result};
use crate::hadamard::{fourier_matrix, magic_from_hadamard, HadamardMatrix};
use crate::linalg::{CMatrix, UnitVector, DEFAULT_TOL};
use crate::magic::MagicBasis;
use crate::perm::{enumerate_latin_tuples, LatinSquare, PermGroup};

/// One point per group element, `K = 1`, `xi_ij = [s(j) = i]`.
pub fn classical_model(g: &PermGroup) -> FlatModel {
    let n = g.degree();
    let w = 1.0 / g.order() as f64;
    let points = g
        .elements()
        .iter()
        .map(|s| {
            let vectors = (0..n * n)
                .map(|k| {
                    let (i, j) = (k / n, k % n);
                    if s.apply(j) == i {
                        UnitVector::basis(1, 0)
                    } else {
                        UnitVector::zero(1)
                    }
                    .expect("dimension one")
                })
                .collect();
            ModelPoint {
                weight: w,
                basis: MagicBasis::new_unchecked(n, vectors).expect("square grid"),
            }
        })
        .collect();
    FlatModel::new(points).expect("uniform weights")
}

/// Single point for a group acting regularly on `N = |G|` points:
/// `xi_ij = e_{s(0)}` where `s` is the unique element with `s(j) = i`.
pub fn regular_model(g: &PermGroup) -> Result<FlatModel> {
    let n = g.degree();
    if g.order() != n || !g.is_transitive() {
        return Err(Error::invalid(format!(
            "action of degree {n} and order {} is not regular",
            g.order()
        )));
    }
    let mut vectors = vec![None; n * n];
    for s in g.elements() {
        let e = UnitVector::basis(n, s.apply(0))?;
        for j in 0..n {
            vectors[s.apply(j) * n + j] = Some(e.clone());
        }
    }
    let vectors = vectors
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::invalid("action is not regular")))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlatModel::single(MagicBasis::new(n, vectors, DEFAULT_TOL)?))
}

/// `xi_ij` = column `a` of `frame`, where row `a` of the square sends `j` to `i`.
pub fn latin_square_point(g: &PermGroup, square: &LatinSquare, frame: &CMatrix) -> Result<MagicBasis> {
    let n = g.degree();
    if square.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: square.order(),
        });
    }
    square.check_rows_in(g)?;
    if frame.rows() != n || !frame.is_unitary(DEFAULT_TOL) {
        return Err(Error::invalid("frame must be an N x N unitary"));
    }
    let columns: Vec<UnitVector> = (0..n)
        .map(|a| UnitVector::new(frame.column(a), DEFAULT_TOL))
        .collect::<Result<_>>()?;
    let mut vectors = vec![None; n * n];
    for a in 0..n {
        for j in 0..n {
            vectors[square.get(a, j) * n + j] = Some(columns[a].clone());
        }
    }
    let vectors = vectors.into_iter().map(|v| v.expect("latin square")).collect();
    MagicBasis::new(n, vectors, DEFAULT_TOL)
}

pub fn latin_square_model(g: &PermGroup, square: &LatinSquare, frame: &CMatrix) -> Result<FlatModel> {
    Ok(FlatModel::single(latin_square_point(g, square, frame)?))
}

/// Uniform sample over (Latin tuples of `g`, up to `limit`) x `frames`.
pub fn universal_latin_model(g: &PermGroup, frames: &[CMatrix], limit: usize) -> Result<FlatModel> {
    let tuples = enumerate_latin_tuples(g, limit);
    if tuples.is_empty() {
        return Err(Error::invalid("the group has no Latin tuples"));
    }
    if frames.is_empty() {
        return Err(Error::invalid("no frames supplied"));
    }
    let mut bases = Vec::with_capacity(tuples.len() * frames.len());
    for t in &tuples {
        let square = LatinSquare::from_tuple(t)?;
        for f in frames {
            bases.push(latin_square_point(g, &square, f)?);
        }
    }
    FlatModel::uniform(bases)
}

pub fn hadamard_model(h: &HadamardMatrix) -> FlatModel {
    FlatModel::single(magic_from_hadamard(h))
}

pub fn fourier_model(sizes: &[usize]) -> Result<FlatModel> {
    Ok(hadamard_model(&fourier_matrix(sizes)?))
}

/// Product sample with `xi_{(i,a),(j,b)} = xi^A_ij (x) xi^B_ab`, where the
/// pair `(i, a)` is index `i N_B + a`.
pub fn tensor_model(a: &FlatModel, b: &FlatModel) -> Result<FlatModel> {
    let (na, nb) = (a.size(), b.size());
    let n = na * nb;
    let mut points = Vec::with_capacity(a.len() * b.len());
    for pa in a.points() {
        for pb in b.points() {
            let vectors = (0..n * n)
                .map(|k| {
                    let (r, c) = (k / n, k % n);
                    let (i, x) = (r / nb, r % nb);
                    let (j, y) = (c / nb, c % nb);
                    pa.basis.get(i, j).tensor(pb.basis.get(x, y))
                })
                .collect();
            points.push(ModelPoint {
                weight: pa.weight * pb.weight,
                basis: MagicBasis::new_unchecked(n, vectors)?,
            });
        }
    }
    renormalized(points)
}

/// Block-diagonal grid `diag(xi^A, xi^B)` with zero vectors off the blocks,
/// over the product sample. Needs `N_A = N_B = K`, so that each block row
/// still sums to the identity.
pub fn direct_sum_model(a: &FlatModel, b: &FlatModel) -> Result<FlatModel> {
    let k = a.dim();
    if b.dim() != k || a.size() != k || b.size() != k {
        return Err(Error::invalid(format!(
            "direct sum needs equal sizes and dimensions, got {}x{} and {}x{}",
            a.size(),
            a.dim(),
            b.size(),
            b.dim()
        )));
    }
    let n = 2 * k;
    let zero = UnitVector::zero(k)?;
    let mut points = Vec::with_capacity(a.len() * b.len());
    for pa in a.points() {
        for pb in b.points() {
            let vectors = (0..n * n)
                .map(|idx| {
                    let (i, j) = (idx / n, idx % n);
                    match (i < k, j < k) {
                        (true, true) => pa.basis.get(i, j).clone(),
                        (false, false) => pb.basis.get(i - k, j - k).clone(),
                        _ => zero.clone(),
                    }
                })
                .collect();
            points.push(ModelPoint {
                weight: pa.weight * pb.weight,
                basis: MagicBasis::new_unchecked(n, vectors)?,
            });
        }
    }
    renormalized(points)
}

/// Products of weights that summed to 1 can drift by an ulp or so.
fn renormalized(mut points: Vec<ModelPoint>) -> Result<FlatModel> {
    let total: f64 = points.iter().map(|p| p.weight).sum();
    for p in &mut points {
        p.weight /= total;
    }
    FlatModel::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magic::Flatness;
    use crate::model::{stationarity_test, t_matrix};
    use crate::perm::families;
    use crate::random::haar_unitary;

    #[test]
    fn z2_latin_square_model_is_classical() {
        let g = families::cyclic(2).unwrap();
        let sq = LatinSquare::from_one_based(&[vec![1, 2], vec![2, 1]]).unwrap();
        let m = latin_square_model(&g, &sq, &CMatrix::identity(2)).unwrap();
        let b = &m.points()[0].basis;
        assert_eq!(b.get(0, 0), &UnitVector::basis(2, 0).unwrap());
        assert_eq!(b.get(1, 0), &UnitVector::basis(2, 1).unwrap());
        assert_eq!(b.get(0, 1), &UnitVector::basis(2, 1).unwrap());
        assert!(m.validate(0.0).passed);
    }

    #[test]
    fn z4_cyclic_square_with_random_frame_is_magic() {
        let g = families::cyclic(4).unwrap();
        let sq = LatinSquare::from_tuple(&enumerate_latin_tuples(&g, 1)[0]).unwrap();
        let m = latin_square_model(&g, &sq, &haar_unitary(4, 3)).unwrap();
        assert!(m.validate(1e-10).passed);
        assert_eq!(m.flatness(), Flatness::Flat);
    }

    #[test]
    fn rows_outside_group_rejected() {
        let g = families::cyclic(3).unwrap();
        let sq = LatinSquare::from_one_based(&[vec![2, 1, 3], vec![1, 3, 2], vec![3, 2, 1]]).unwrap();
        assert!(matches!(
            latin_square_model(&g, &sq, &CMatrix::identity(3)),
            Err(Error::RowNotInGroup { row: 1 })
        ));
    }

    #[test]
    fn regular_model_checks_action() {
        assert!(regular_model(&families::symmetric(3).unwrap()).is_err());
        let m = regular_model(&families::cyclic(2).unwrap()).unwrap();
        assert!(m.validate(0.0).passed);
        assert_eq!(m.flatness(), Flatness::Flat);
        let s3 = regular_model(&families::symmetric(3).unwrap().regular_action()).unwrap();
        assert_eq!(s3.size(), 6);
        assert_eq!(s3.flatness(), Flatness::Flat);
    }

    #[test]
    fn tensor_of_regular_models() {
        let z2 = regular_model(&families::cyclic(2).unwrap()).unwrap();
        let t = tensor_model(&z2, &z2).unwrap();
        assert_eq!((t.size(), t.dim()), (4, 4));
        assert!(t.validate(1e-12).passed);
        assert_eq!(t.flatness(), Flatness::Flat);
        assert!(stationarity_test(&t, 2, 1e-10).unwrap().stationary);
    }

    #[test]
    fn direct_sum_is_quasi_flat_and_blocked() {
        let f = fourier_model(&[2]).unwrap();
        let d = direct_sum_model(&f, &f).unwrap();
        assert!(d.validate(1e-12).passed);
        assert_eq!(d.flatness(), Flatness::QuasiFlat);
        let t1 = t_matrix(&d, 1).unwrap();
        assert!(t1.matrix()[(0, 3)].norm() < 1e-15);
        assert!(direct_sum_model(&f, &fourier_model(&[3]).unwrap()).is_err());
    }
}
