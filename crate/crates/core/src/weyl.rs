//! Weyl models: clock-and-shift bases of `G = H x H^` for a finite abelian
//! `H`, their 2-cocycles, and the matrix model `u_kl -> Proj(g_k x g_l^*)`.
//!
//! An element `(i, a)` of `G` has flat index `i n + a` with `n = |H|`; each of
//! `i` and `a` is a mixed-radix index over the cycle sizes of `H`, first
//! cycle most significant. `g_(i,a) = X^a Z^i` factor by factor, with `Z`
//! the clock `diag(w^k)` and `X` the shift `e_k -> e_{k+1}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, CMatrix, UnitVector, DEFAULT_TOL, ONE, ZERO};
use crate::magic::MagicBasis;
use crate::model::moments::{tensor_side, weighted_mean_and_stderr};
use crate::model::{FlatModel, ModelPoint, MomentTensor, DEFAULT_TENSOR_CAP};

/// Largest `|H|` accepted, so that `N = |H|^2` stays at 1024.
pub const MAX_BASE_ORDER: usize = 32;

/// A unitary `x` with its weight in the integration sample.
pub type WeightedSample = (CMatrix, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct WeylBasis {
    cycles: Vec<usize>,
    n: usize,
    elements: Vec<CMatrix>,
    product: Vec<usize>,
    inverse: Vec<usize>,
}

fn digits(mut k: usize, cycles: &[usize]) -> Vec<usize> {
    let mut out = vec![0; cycles.len()];
    for (slot, &c) in out.iter_mut().zip(cycles).rev() {
        *slot = k % c;
        k /= c;
    }
    out
}

fn undigits(d: &[usize], cycles: &[usize]) -> usize {
    d.iter().zip(cycles).fold(0, |acc, (&x, &c)| acc * c + x)
}

fn clock(m: usize, power: usize) -> CMatrix {
    CMatrix::from_fn(m, m, |r, c| {
        if r == c {
            root_of_unity((r * power) as i64, m)
        } else {
            ZERO
        }
    })
}

fn shift(m: usize, power: usize) -> CMatrix {
    CMatrix::from_fn(m, m, |r, c| if r == (c + power) % m { ONE } else { ZERO })
}

/// Group table of `H x H^` as a product of cyclic groups.
fn group_tables(cycles: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n: usize = cycles.iter().product();
    let big = n * n;
    let split = |k: usize| (digits(k / n, cycles), digits(k % n, cycles));
    let join = |i: &[usize], a: &[usize]| undigits(i, cycles) * n + undigits(a, cycles);
    let mut product = vec![0; big * big];
    let mut inverse = vec![0; big];
    for k in 0..big {
        let (ki, ka) = split(k);
        let neg = |d: &[usize]| -> Vec<usize> {
            d.iter().zip(cycles).map(|(&x, &c)| (c - x) % c).collect()
        };
        inverse[k] = join(&neg(&ki), &neg(&ka));
        for l in 0..big {
            let (li, la) = split(l);
            let add = |x: &[usize], y: &[usize]| -> Vec<usize> {
                x.iter().zip(y).zip(cycles).map(|((&a, &b), &c)| (a + b) % c).collect()
            };
            product[k * big + l] = join(&add(&ki, &li), &add(&ka, &la));
        }
    }
    (product, inverse)
}

impl WeylBasis {
    /// Clock-and-shift basis for `H = Z_{c_1} x .. x Z_{c_r}`; an empty list
    /// is the trivial group.
    pub fn new(cycles: &[usize]) -> Result<Self> {
        if cycles.contains(&0) {
            return Err(Error::invalid("cycle sizes must be positive"));
        }
        let n = cycles.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c));
        let n = match n {
            Some(n) if n <= MAX_BASE_ORDER => n,
            _ => {
                return Err(Error::CapExceeded {
                    what: "Weyl base group order",
                    size: n.unwrap_or(usize::MAX),
                    cap: MAX_BASE_ORDER,
                })
            }
        };
        let mut elements = Vec::with_capacity(n * n);
        for i in 0..n {
            let di = digits(i, cycles);
            for a in 0..n {
                let da = digits(a, cycles);
                let g = cycles
                    .iter()
                    .enumerate()
                    .fold(CMatrix::identity(1), |acc, (f, &c)| {
                        acc.kron(&shift(c, da[f]).matmul(&clock(c, di[f])))
                    });
                elements.push(g);
            }
        }
        let (product, inverse) = group_tables(cycles);
        Ok(Self {
            cycles: cycles.to_vec(),
            n,
            elements,
            product,
            inverse,
        })
    }

    /// Basis from supplied unitaries, indexed like the clock-and-shift one.
    /// Checks unitarity, trace-orthogonality and that index 0 is the identity.
    pub fn from_elements(cycles: &[usize], elements: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let template = Self::new(cycles)?;
        let n = template.n;
        if elements.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: elements.len(),
            });
        }
        for g in &elements {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.rows(),
                });
            }
            if !g.is_unitary(tol) {
                return Err(Error::invalid("basis element is not unitary"));
            }
        }
        if !elements[0].approx_eq(&CMatrix::identity(n), tol) {
            return Err(Error::invalid("basis element 0 is not the identity"));
        }
        for k in 0..elements.len() {
            for l in 0..elements.len() {
                let t = elements[k].adjoint().matmul(&elements[l]).normalized_trace();
                let expect = if k == l { 1.0 } else { 0.0 };
                if (t - expect).norm() > tol {
                    return Err(Error::invalid(format!(
                        "basis elements {} and {} are not trace-orthogonal",
                        k + 1,
                        l + 1
                    )));
                }
            }
        }
        Ok(Self { elements, ..template })
    }

    pub fn cycles(&self) -> &[usize] {
        &self.cycles
    }

    /// `n = |H|`, the matrix size.
    pub fn base_order(&self) -> usize {
        self.n
    }

    /// `N = n^2`, the model size.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn get(&self, k: usize) -> &CMatrix {
        &self.elements[k]
    }

    /// `(i, a)` of a flat index.
    pub fn pair(&self, k: usize) -> (usize, usize) {
        (k / self.n, k % self.n)
    }

    pub fn index(&self, i: usize, a: usize) -> usize {
        i * self.n + a
    }

    pub fn mul(&self, k: usize, l: usize) -> usize {
        self.product[k * self.order() + l]
    }

    pub fn inv(&self, k: usize) -> usize {
        self.inverse[k]
    }

    /// `tr(g_k^* g_l)` with the normalized trace.
    pub fn trace_table(&self) -> CMatrix {
        let big = self.order();
        CMatrix::from_fn(big, big, |k, l| {
            self.elements[k].adjoint().matmul(&self.elements[l]).normalized_trace()
        })
    }
}

/// The displayed Pauli-type matrices `W_00, W_10, W_11, W_01`.
pub fn pauli_display() -> [CMatrix; 4] {
    [
        CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]]),
        CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
        CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]),
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
    ]
}

/// For `H = Z_2`, the scalars `s` with `g_(i,a) = s W_ia`, in the order
/// `W_00, W_10, W_11, W_01`. `None` for other groups, or when some element
/// is not a multiple of its display.
pub fn pauli_scalars(basis: &WeylBasis) -> Option<[Complex64; 4]> {
    if basis.cycles() != [2] {
        return None;
    }
    let display = pauli_display();
    let order = [(0, 0), (1, 0), (1, 1), (0, 1)];
    let mut out = [ZERO; 4];
    for (slot, (w, &(i, a))) in out.iter_mut().zip(display.iter().zip(&order)) {
        let g = basis.get(basis.index(i, a));
        let s = w.adjoint().matmul(g).normalized_trace();
        if !w.scale(s).approx_eq(g, DEFAULT_TOL) {
            return None;
        }
        *slot = s;
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cocycle {
    order: usize,
    table: Vec<Complex64>,
}

impl Cocycle {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.table[k * self.order + l]
    }

    pub fn table(&self) -> &[Complex64] {
        &self.table
    }

    /// `max |s(gh,k) s(g,h) - s(g,hk) s(h,k)|` over all triples.
    pub fn identity_residual(&self, basis: &WeylBasis) -> f64 {
        let big = self.order;
        let mut worst: f64 = 0.0;
        for g in 0..big {
            for h in 0..big {
                let gh = basis.mul(g, h);
                for k in 0..big {
                    let hk = basis.mul(h, k);
                    let lhs = self.get(gh, k) * self.get(g, h);
                    let rhs = self.get(g, hk) * self.get(h, k);
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }
}

/// `s(k, l) = tr(g_{kl}^* g_k g_l)`, so that `g_k g_l = s(k, l) g_{kl}`. The
/// identity row and column are set to exactly 1.
pub fn extract_cocycle(basis: &WeylBasis) -> Result<Cocycle> {
    extract_cocycle_tol(basis, DEFAULT_TOL)
}

pub fn extract_cocycle_tol(basis: &WeylBasis, tol: f64) -> Result<Cocycle> {
    let big = basis.order();
    let mut table = vec![ONE; big * big];
    for k in 1..big {
        for l in 1..big {
            let kl = basis.mul(k, l);
            let s = basis
                .get(kl)
                .adjoint()
                .matmul(&basis.get(k).matmul(basis.get(l)))
                .normalized_trace();
            if (s.norm() - 1.0).abs() > tol {
                return Err(Error::NotProjectivelyClosed {
                    k: k + 1,
                    l: l + 1,
                    modulus: s.norm(),
                });
            }
            table[k * big + l] = s;
        }
    }
    Ok(Cocycle { order: big, table })
}

fn check_samples(samples: &[WeightedSample], n: usize) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::invalid("no samples"));
    }
    for (idx, (x, w)) in samples.iter().enumerate() {
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.rows(),
            });
        }
        if !x.is_unitary(DEFAULT_TOL) {
            return Err(Error::invalid(format!(
                "sample {} is not unitary (defect {:e})",
                idx + 1,
                x.unitarity_defect()
            )));
        }
        if !(*w > 0.0 && w.is_finite()) {
            return Err(Error::invalid(format!("weight {w} is not positive")));
        }
    }
    Ok(())
}

/// Equal-weight samples.
pub fn uniform_samples(xs: Vec<CMatrix>) -> Vec<WeightedSample> {
    let w = 1.0 / xs.len().max(1) as f64;
    xs.into_iter().map(|x| (x, w)).collect()
}

/// One point per sample `x`, with `xi_kl = vec(g_k x g_l^*) / sqrt(n)`.
pub fn weyl_model(basis: &WeylBasis, samples: &[WeightedSample]) -> Result<FlatModel> {
    let n = basis.base_order();
    check_samples(samples, n)?;
    let big = basis.order();
    let adj: Vec<CMatrix> = basis.elements().iter().map(CMatrix::adjoint).collect();
    let scale = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let points = samples
        .par_iter()
        .map(|(x, w)| {
            let left: Vec<CMatrix> = basis.elements().iter().map(|g| g.matmul(x)).collect();
            let mut vectors = Vec::with_capacity(big * big);
            for gx in &left {
                for ga in &adj {
                    let v: Vec<Complex64> = gx.matmul(ga).vectorize().into_iter().map(|z| z * scale).collect();
                    vectors.push(UnitVector::new(v, DEFAULT_TOL)?);
                }
            }
            Ok(ModelPoint {
                weight: *w,
                basis: MagicBasis::new(big, vectors, DEFAULT_TOL)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FlatModel::new(points)
}

/// `A[k][l] = tr(g_k x g_l x^*)`, normalized trace.
fn twisted_traces(basis: &WeylBasis, x: &CMatrix) -> Vec<Complex64> {
    let n = basis.base_order();
    let big = basis.order();
    let xa = x.adjoint();
    let conj: Vec<CMatrix> = basis.elements().iter().map(|g| x.matmul(g).matmul(&xa)).collect();
    let mut out = Vec::with_capacity(big * big);
    for g in basis.elements() {
        for b in &conj {
            let mut t = ZERO;
            for r in 0..n {
                for c in 0..n {
                    t += g[(r, c)] * b[(c, r)];
                }
            }
            out.push(t / n as f64);
        }
    }
    out
}

/// `T_p` from the cocycle prefactors and the sample average of
/// `tr(g_{i_1^-1 i_2} x g_{j_2^-1 j_1} x^*) .. tr(g_{i_p^-1 i_1} x g_{j_1^-1 j_p} x^*)`.
pub fn t_matrix_closed_form(
    basis: &WeylBasis,
    cocycle: &Cocycle,
    samples: &[WeightedSample],
    p: usize,
) -> Result<MomentTensor> {
    if p == 0 {
        return Err(Error::invalid("moment order must be at least 1"));
    }
    check_samples(samples, basis.base_order())?;
    let big = basis.order();
    let side = tensor_side(big, p, DEFAULT_TENSOR_CAP)?;
    let traces: Vec<Vec<Complex64>> = samples.par_iter().map(|(x, _)| twisted_traces(basis, x)).collect();
    let weights: Vec<f64> = samples.iter().map(|(_, w)| *w).collect();
    let decode = |mut k: usize| {
        let mut out = vec![0; p];
        for slot in out.iter_mut().rev() {
            *slot = k % big;
            k /= big;
        }
        out
    };
    let entries: Vec<Complex64> = (0..side)
        .into_par_iter()
        .flat_map_iter(|r| {
            let i = decode(r);
            let traces = &traces;
            let weights = &weights;
            (0..side).map(move |c| {
                let j = decode(c);
                let mut rho = ONE;
                let mut pairs = Vec::with_capacity(p);
                for m in 0..p {
                    let next = (m + 1) % p;
                    let u = basis.mul(basis.inv(i[m]), i[next]);
                    let v = basis.mul(basis.inv(j[next]), j[m]);
                    rho *= cocycle.get(i[m], u).conj() * cocycle.get(j[next], v).conj();
                    pairs.push(u * big + v);
                }
                let mut acc = ZERO;
                for (t, w) in traces.iter().zip(weights) {
                    let mut prod = Complex64::new(*w, 0.0);
                    for &q in &pairs {
                        prod *= t[q];
                    }
                    acc += prod;
                }
                rho * acc / big as f64
            })
        })
        .collect();
    Ok(MomentTensor::from_parts(big, p, CMatrix::from_vec(side, side, entries)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylMoment {
    pub p: usize,
    pub value: f64,
    pub stderr: f64,
    /// Largest imaginary part seen in a per-sample value.
    pub max_imaginary: f64,
}

/// Sample estimates of `c_p = sum over j_1 .. j_p = 1 of the average of
/// tr(g_{j_1} x g_{j_1}^* x^*) .. tr(g_{j_p} x g_{j_p}^* x^*)`, for `p = 1..=p_max`.
///
/// The constrained sum is evaluated as a `p`-fold convolution over the
/// group, read at the identity.
pub fn weyl_character_moments(
    basis: &WeylBasis,
    _cocycle: &Cocycle,
    samples: &[WeightedSample],
    p_max: usize,
) -> Result<Vec<WeylMoment>> {
    if p_max == 0 {
        return Err(Error::invalid("p_max must be at least 1"));
    }
    check_samples(samples, basis.base_order())?;
    let big = basis.order();
    let per_sample: Vec<Vec<Complex64>> = samples
        .par_iter()
        .map(|(x, _)| {
            let xa = x.adjoint();
            let t: Vec<Complex64> = basis
                .elements()
                .iter()
                .map(|g| g.matmul(x).matmul(&g.adjoint()).matmul(&xa).normalized_trace())
                .collect();
            let mut f = t.clone();
            let mut out = Vec::with_capacity(p_max);
            out.push(f[0]);
            for _ in 1..p_max {
                let mut next = vec![ZERO; big];
                for (h, fh) in f.iter().enumerate() {
                    if *fh == ZERO {
                        continue;
                    }
                    for (k, tk) in t.iter().enumerate() {
                        next[basis.mul(h, k)] += fh * tk;
                    }
                }
                f = next;
                out.push(f[0]);
            }
            out
        })
        .collect();
    let weights: Vec<f64> = samples.iter().map(|(_, w)| *w).collect();
    Ok((0..p_max)
        .map(|m| {
            let vals: Vec<f64> = per_sample.iter().map(|v| v[m].re).collect();
            let max_imaginary = per_sample.iter().map(|v| v[m].im.abs()).fold(0.0, f64::max);
            let (value, stderr) = weighted_mean_and_stderr(&vals, &weights);
            WeylMoment {
                p: m + 1,
                value,
                stderr,
                max_imaginary,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::t_matrix;
    use crate::random::{haar_samples, haar_unitary};

    #[test]
    fn z2_basis_is_the_pauli_display() {
        let b = WeylBasis::new(&[2]).unwrap();
        let s = pauli_scalars(&b).unwrap();
        assert!(s.iter().all(|z| (z - ONE).norm() < 1e-15), "{s:?}");
        assert!(b.trace_table().approx_eq(&CMatrix::identity(4), 1e-15));
    }

    #[test]
    fn bases_are_trace_orthogonal() {
        for cycles in [vec![3], vec![2, 2], vec![4], vec![2, 3]] {
            let b = WeylBasis::new(&cycles).unwrap();
            let n: usize = cycles.iter().product();
            assert_eq!(b.order(), n * n);
            assert!(b.trace_table().approx_eq(&CMatrix::identity(n * n), 1e-12));
            assert!(b.elements().iter().all(|g| g.is_unitary(1e-12)));
            assert_eq!(b.get(0), &CMatrix::identity(n));
        }
        assert!(WeylBasis::new(&[33]).is_err());
        assert_eq!(WeylBasis::new(&[]).unwrap().order(), 1);
    }

    #[test]
    fn cocycle_identity_holds() {
        for cycles in [vec![2], vec![3], vec![2, 2]] {
            let b = WeylBasis::new(&cycles).unwrap();
            let s = extract_cocycle(&b).unwrap();
            assert!(s.identity_residual(&b) < 1e-12, "{cycles:?}");
            for g in 0..b.order() {
                assert_eq!(s.get(0, g), ONE);
                assert_eq!(s.get(g, 0), ONE);
                for h in 0..b.order() {
                    // oracle: g_k g_l equals s(k, l) g_{kl} as matrices
                    let lhs = b.get(g).matmul(b.get(h));
                    let rhs = b.get(b.mul(g, h)).scale(s.get(g, h));
                    assert!(lhs.approx_eq(&rhs, 1e-12));
                }
            }
        }
    }

    #[test]
    fn clock_shift_anticommute_for_z2() {
        let b = WeylBasis::new(&[2]).unwrap();
        let s = extract_cocycle(&b).unwrap();
        let (z, x) = (b.index(1, 0), b.index(0, 1));
        assert!((s.get(z, x) / s.get(x, z) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn non_closed_basis_is_rejected() {
        // swapping the labels of Z and X keeps the set trace-orthogonal, but
        // X X is not a multiple of the element labelled Z^2
        let b = WeylBasis::new(&[3]).unwrap();
        let mut els = b.elements().to_vec();
        els.swap(b.index(1, 0), b.index(0, 1));
        let swapped = WeylBasis::from_elements(&[3], els, 1e-12).unwrap();
        assert!(matches!(
            extract_cocycle(&swapped),
            Err(Error::NotProjectivelyClosed { .. })
        ));
    }

    #[test]
    fn identity_sample_gives_pauli_products() {
        let b = WeylBasis::new(&[2]).unwrap();
        let m = weyl_model(&b, &[(CMatrix::identity(2), 1.0)]).unwrap();
        let pt = &m.points()[0].basis;
        let expect = b.get(1).matmul(&b.get(2).adjoint()).vectorize();
        let got = pt.get(1, 2).entries();
        for (e, g) in expect.iter().zip(got) {
            assert!((e / 2f64.sqrt() - g).norm() < 1e-15);
        }
    }

    #[test]
    fn non_unitary_sample_rejected() {
        let b = WeylBasis::new(&[2]).unwrap();
        let x = CMatrix::identity(2).scale(2.0.into());
        assert!(weyl_model(&b, &[(x, 1.0)]).is_err());
    }

    #[test]
    fn single_sample_is_flat() {
        let b = WeylBasis::new(&[3]).unwrap();
        let m = weyl_model(&b, &[(haar_unitary(3, 5), 1.0)]).unwrap();
        assert!(m.validate(1e-10).passed);
        let t1 = t_matrix(&m, 1).unwrap();
        let flat = CMatrix::from_fn(9, 9, |_, _| (1.0 / 9.0).into());
        assert!(t1.matrix().approx_eq(&flat, 1e-12));
    }

    #[test]
    fn closed_form_matches_generic_tensor() {
        let b = WeylBasis::new(&[2]).unwrap();
        let s = extract_cocycle(&b).unwrap();
        let samples = uniform_samples(haar_samples(2, 12, 9));
        let m = weyl_model(&b, &samples).unwrap();
        for p in 1..=3 {
            let closed = t_matrix_closed_form(&b, &s, &samples, p).unwrap();
            let generic = t_matrix(&m, p).unwrap();
            let d = closed.matrix().max_abs_diff(generic.matrix());
            assert!(d < 1e-9, "p={p} diff {d}");
        }
    }

    #[test]
    fn closed_form_matches_on_z3() {
        let b = WeylBasis::new(&[3]).unwrap();
        let s = extract_cocycle(&b).unwrap();
        let samples = uniform_samples(haar_samples(3, 4, 2));
        let m = weyl_model(&b, &samples).unwrap();
        let d = t_matrix_closed_form(&b, &s, &samples, 2)
            .unwrap()
            .matrix()
            .max_abs_diff(t_matrix(&m, 2).unwrap().matrix());
        assert!(d < 1e-9);
    }

    #[test]
    fn trivial_group_moments_are_one() {
        let b = WeylBasis::new(&[]).unwrap();
        let s = extract_cocycle(&b).unwrap();
        let samples = uniform_samples(vec![CMatrix::identity(1); 3]);
        for m in weyl_character_moments(&b, &s, &samples, 4).unwrap() {
            assert!((m.value - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn moments_match_tensor_diagonal() {
        // c_p is the diagonal sum of T_p on the same samples
        let b = WeylBasis::new(&[2]).unwrap();
        let s = extract_cocycle(&b).unwrap();
        let samples = uniform_samples(haar_samples(2, 50, 4));
        let m = weyl_model(&b, &samples).unwrap();
        let c = weyl_character_moments(&b, &s, &samples, 3).unwrap();
        for p in 1..=3 {
            let t = t_matrix(&m, p).unwrap();
            let side = t.matrix().rows();
            let diag: f64 = (0..side).map(|k| t.matrix()[(k, k)].re).sum();
            assert!((c[p - 1].value - diag).abs() < 1e-9, "p={p}");
        }
        assert!((c[0].value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z2_second_moment_is_two() {
        let b = WeylBasis::new(&[2]).unwrap();
        let s = extract_cocycle(&b).unwrap();
        let samples = uniform_samples(haar_samples(2, 4000, 11));
        let c = weyl_character_moments(&b, &s, &samples, 2).unwrap();
        assert!((c[1].value - 2.0).abs() < 3.0 * c[1].stderr + 1e-9, "{:?}", c[1]);
    }
}
