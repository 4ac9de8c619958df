use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::FlatModel;
use crate::error::{Error, Result};
use crate::linalg::{gram, CMatrix, UnitVector, ZERO};

/// Default cap on `N^p`, the side of a moment tensor.
pub const DEFAULT_TENSOR_CAP: usize = 1024;

/// Points per parallel chunk is chosen from the sample size alone, so the
/// reduction order (and the floating-point result) does not depend on the
/// number of threads.
const MAX_CHUNKS: usize = 32;

/// Largest number of point tuples enumerated exactly in the Gram route.
const TUPLE_CAP: usize = 20_000;

const BATCHES: usize = 10;

/// `(T_p)_{(i_1..i_p),(j_1..j_p)}`, tuples flattened row-major with `i_1`
/// most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTensor {
    size: usize,
    order: usize,
    matrix: CMatrix,
}

impl MomentTensor {
    pub(crate) fn from_parts(size: usize, order: usize, matrix: CMatrix) -> Self {
        Self { size, order, matrix }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `|T^2 - T|_max`.
    pub fn idempotency_defect(&self) -> f64 {
        self.matrix.matmul(&self.matrix).max_abs_diff(&self.matrix)
    }

    pub fn power(&self, r: usize) -> CMatrix {
        assert!(r >= 1);
        let mut out = self.matrix.clone();
        for _ in 1..r {
            out = out.matmul(&self.matrix);
        }
        out
    }

    /// Flat index of a tuple.
    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &i| acc * self.size + i)
    }
}

pub(crate) fn tensor_side(n: usize, p: usize, cap: usize) -> Result<usize> {
    let side = (0..p).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&s| s <= cap));
    side.ok_or(Error::CapExceeded {
        what: "moment tensor side N^p",
        size: n.checked_pow(p as u32).unwrap_or(usize::MAX),
        cap,
    })
}

pub fn t_matrix(model: &FlatModel, p: usize) -> Result<MomentTensor> {
    t_matrix_capped(model, p, DEFAULT_TENSOR_CAP)
}

/// `(1/K) sum_x w_x prod_m <xi_{i_m j_m}, xi_{i_{m+1} j_{m+1}}>`, indices cyclic.
pub fn t_matrix_capped(model: &FlatModel, p: usize, cap: usize) -> Result<MomentTensor> {
    if p == 0 {
        return Err(Error::invalid("moment order must be at least 1"));
    }
    let n = model.size();
    let side = tensor_side(n, p, cap)?;
    // pair index a_m = i_m * N + j_m for every entry and every slot m
    let mut slots: Vec<u32> = Vec::with_capacity(side * side * p);
    let mut rows = vec![0usize; p];
    let mut cols = vec![0usize; p];
    for r in 0..side {
        decode(r, n, &mut rows);
        for c in 0..side {
            decode(c, n, &mut cols);
            slots.extend((0..p).map(|m| (rows[m] * n + cols[m]) as u32));
        }
    }
    let points = model.points();
    let chunk = points.len().div_ceil(MAX_CHUNKS).max(1);
    let partials: Vec<Vec<Complex64>> = points
        .par_chunks(chunk)
        .map(|pts| {
            let mut acc = vec![ZERO; side * side];
            let nn = n * n;
            for pt in pts {
                let g = pt.basis.full_gram();
                let ge = g.entries();
                for (e, a) in acc.iter_mut().zip(slots.chunks_exact(p)) {
                    let mut prod = Complex64::new(pt.weight, 0.0);
                    for m in 0..p {
                        let x = a[m] as usize;
                        let y = a[(m + 1) % p] as usize;
                        prod *= ge[x * nn + y];
                    }
                    *e += prod;
                }
            }
            acc
        })
        .collect();
    let scale = 1.0 / model.dim() as f64;
    let mut total = vec![ZERO; side * side];
    for part in &partials {
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    let matrix = CMatrix::from_vec(side, side, total.into_iter().map(|z| z * scale).collect())?;
    Ok(MomentTensor {
        size: n,
        order: p,
        matrix,
    })
}

fn decode(mut k: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = k % n;
        k /= n;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityReport {
    /// `defects[p - 1] = |T_p^2 - T_p|_max`.
    pub defects: Vec<f64>,
    pub tolerance: f64,
    pub stationary: bool,
}

pub fn stationarity_test(model: &FlatModel, p_max: usize, tol: f64) -> Result<StationarityReport> {
    if p_max == 0 {
        return Err(Error::invalid("p_max must be at least 1"));
    }
    let defects = (1..=p_max)
        .map(|p| t_matrix(model, p).map(|t| t.idempotency_defect()))
        .collect::<Result<Vec<_>>>()?;
    let stationary = defects.iter().all(|&d| d <= tol);
    Ok(StationarityReport {
        defects,
        tolerance: tol,
        stationary,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CesaroResult {
    /// `averages[k - 1] = (1/k) sum_{r <= k} T^r`.
    pub averages: Vec<CMatrix>,
    /// Distance between consecutive averages, starting at `k = 2`.
    pub distances: Vec<f64>,
    /// Whether the last distance fell below `tol / 10`.
    pub converged: bool,
}

impl CesaroResult {
    pub fn limit(&self) -> &CMatrix {
        self.averages.last().expect("at least one average")
    }
}

/// Cesaro averages of the powers of `t`, stopping once consecutive averages
/// are closer than `tol / 10` or after `r_max` terms.
pub fn cesaro_from_tensor(t: &CMatrix, r_max: usize, tol: f64) -> CesaroResult {
    let r_max = r_max.max(1);
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut averages = vec![t.clone()];
    let mut distances = Vec::new();
    let mut converged = false;
    for k in 2..=r_max {
        power = power.matmul(t);
        sum = &sum + &power;
        let avg = sum.scale(Complex64::new(1.0 / k as f64, 0.0));
        let d = avg.max_abs_diff(averages.last().expect("non-empty"));
        distances.push(d);
        averages.push(avg);
        if d < tol / 10.0 {
            converged = true;
            break;
        }
    }
    CesaroResult {
        averages,
        distances,
        converged,
    }
}

pub fn cesaro_moments(model: &FlatModel, p: usize, r_max: usize, tol: f64) -> Result<CesaroResult> {
    Ok(cesaro_from_tensor(t_matrix(model, p)?.matrix(), r_max, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub p: usize,
    /// `E[(chi/N)^p]` from the diagonal of `T_p^r`.
    pub value: f64,
    pub stderr: Option<f64>,
    /// Same moment from the Gram matrices of the tensor vectors, when feasible.
    pub gram_value: Option<f64>,
    pub gram_stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterLaw {
    pub size: usize,
    pub r: usize,
    pub moments: Vec<MomentEstimate>,
}

impl CharacterLaw {
    /// `E[chi^p]`, unnormalized.
    pub fn chi_moment(&self, p: usize) -> f64 {
        self.moments[p - 1].value * (self.size as f64).powi(p as i32)
    }
}

/// Moments of `chi / N` with `chi = sum_i u_ii` under the `r`-th convolution
/// power of the model state.
pub fn character_law(model: &FlatModel, r: usize, p_max: usize) -> Result<CharacterLaw> {
    if r == 0 || p_max == 0 {
        return Err(Error::invalid("r and p_max must be at least 1"));
    }
    let n = model.size() as f64;
    let mut moments = Vec::with_capacity(p_max);
    let gram_route = gram_moments(model, r, p_max);
    for p in 1..=p_max {
        let t = t_matrix(model, p)?;
        let value = diag_sum(&t, r) / n.powi(p as i32);
        let stderr = if model.len() == 1 {
            Some(0.0)
        } else if r == 1 {
            gram_route.as_ref().map(|g| g[p - 1].1.unwrap_or(0.0))
        } else {
            batch_stderr(model, p, r)?
        };
        let (gram_value, gram_stderr) = match &gram_route {
            Some(g) => (Some(g[p - 1].0), g[p - 1].1),
            None => (None, None),
        };
        moments.push(MomentEstimate {
            p,
            value,
            stderr,
            gram_value,
            gram_stderr,
        });
    }
    Ok(CharacterLaw {
        size: model.size(),
        r,
        moments,
    })
}

fn diag_sum(t: &MomentTensor, r: usize) -> f64 {
    let m = if r == 1 { t.matrix().clone() } else { t.power(r) };
    m.trace().re
}

/// Standard error of `tr(T_p^r)/N^p` from contiguous batches of points.
fn batch_stderr(model: &FlatModel, p: usize, r: usize) -> Result<Option<f64>> {
    let len = model.len();
    if len < 2 * BATCHES {
        return Ok(None);
    }
    let n = model.size() as f64;
    let mut vals = Vec::with_capacity(BATCHES);
    for b in 0..BATCHES {
        let sub = model.slice(b * len / BATCHES..(b + 1) * len / BATCHES)?;
        vals.push(diag_sum(&t_matrix(&sub, p)?, r) / n.powi(p as i32));
    }
    let (_, se) = mean_and_stderr(&vals);
    Ok(Some(se))
}

fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Weighted mean with the standard error of a weighted average of i.i.d. values.
pub(crate) fn weighted_mean_and_stderr(vals: &[f64], weights: &[f64]) -> (f64, f64) {
    let wsum: f64 = weights.iter().sum();
    let mean = vals.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / wsum;
    let w2: f64 = weights.iter().map(|w| (w / wsum).powi(2)).sum();
    if vals.len() < 2 || w2 >= 1.0 {
        return (mean, 0.0);
    }
    let var = vals
        .iter()
        .zip(weights)
        .map(|(v, w)| w / wsum * (v - mean).powi(2))
        .sum::<f64>()
        / (1.0 - w2);
    (mean, (var * w2).sqrt())
}

/// Gram route: for an `r`-tuple of points, the vectors
/// `xi^{x_1}_{a_1 a_2} (x) .. (x) xi^{x_r}_{a_r a_1}` over `a` in `[N]^r` have
/// Gram matrix `Z`, and `tr(T_p^r) = K^{-r} E[Tr(Z^p)]` over independent
/// tuples. Returns `(value, stderr)` per `p`, or `None` when the tensor
/// vectors are too large to build.
fn gram_moments(model: &FlatModel, r: usize, p_max: usize) -> Option<Vec<(f64, Option<f64>)>> {
    let n = model.size();
    let k = model.dim();
    let count = n.checked_pow(r as u32).filter(|&c| c <= 256)?;
    k.checked_pow(r as u32).filter(|&d| d <= 4096)?;
    let len = model.len();
    let scale_for = |p: usize| 1.0 / ((k as f64).powi(r as i32) * (n as f64).powi(p as i32));

    // which tuples: all of them when affordable, otherwise disjoint consecutive runs
    let exhaustive = len.checked_pow(r as u32).is_some_and(|c| c <= TUPLE_CAP);
    let tuples: Vec<Vec<usize>> = if exhaustive {
        let total = len.pow(r as u32);
        (0..total)
            .map(|mut t| {
                let mut v = vec![0; r];
                for s in v.iter_mut().rev() {
                    *s = t % len;
                    t /= len;
                }
                v
            })
            .collect()
    } else {
        (0..len / r).map(|t| (t * r..(t + 1) * r).collect()).collect()
    };
    if tuples.is_empty() {
        return None;
    }

    let per_tuple: Vec<(f64, Vec<f64>)> = tuples
        .par_iter()
        .map(|tuple| {
            let pts: Vec<_> = tuple.iter().map(|&x| &model.points()[x]).collect();
            let weight: f64 = pts.iter().map(|p| p.weight).product();
            let mut a = vec![0usize; r];
            let vectors: Vec<UnitVector> = (0..count)
                .map(|idx| {
                    decode(idx, n, &mut a);
                    let mut v = pts[0].basis.get(a[0], a[1 % r]).clone();
                    for s in 1..r {
                        v = v.tensor(pts[s].basis.get(a[s], a[(s + 1) % r]));
                    }
                    v
                })
                .collect();
            let z = gram(&vectors).expect("equal dimensions");
            let mut power = z.clone();
            let mut traces = Vec::with_capacity(p_max);
            for p in 1..=p_max {
                if p > 1 {
                    power = power.matmul(&z);
                }
                traces.push(power.trace().re * scale_for(p));
            }
            (weight, traces)
        })
        .collect();

    let weights: Vec<f64> = per_tuple.iter().map(|(w, _)| *w).collect();
    Some(
        (0..p_max)
            .map(|pi| {
                let vals: Vec<f64> = per_tuple.iter().map(|(_, t)| t[pi]).collect();
                if exhaustive && r > 1 {
                    let wsum: f64 = weights.iter().sum();
                    let v = vals.iter().zip(&weights).map(|(v, w)| v * w).sum::<f64>() / wsum;
                    (v, None)
                } else if r == 1 {
                    let (v, se) = weighted_mean_and_stderr(&vals, &weights);
                    (v, Some(se))
                } else {
                    let (v, _) = weighted_mean_and_stderr(&vals, &weights);
                    let batch = vals.len() / BATCHES;
                    let se = (batch >= 2).then(|| {
                        let means: Vec<f64> = (0..BATCHES)
                            .map(|b| {
                                let rng = b * batch..(b + 1) * batch;
                                weighted_mean_and_stderr(&vals[rng.clone()], &weights[rng]).0
                            })
                            .collect();
                        mean_and_stderr(&means).1
                    });
                    (v, se)
                }
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::super::{classical_model, fourier_model, regular_model, FlatModel};
    use super::*;
    use crate::linalg::ONE;
    use crate::magic::MagicBasis;
    use crate::perm::{character_measure, families};
    use crate::random::{haar_unitary, rng};
    use proptest::prelude::*;

    /// Direct `tr(P_1 .. P_p)` with explicit projector products.
    fn brute_t(model: &FlatModel, p: usize) -> CMatrix {
        let n = model.size();
        let side = n.pow(p as u32);
        let mut out = CMatrix::zeros(side, side);
        let mut rows = vec![0; p];
        let mut cols = vec![0; p];
        for pt in model.points() {
            let grid = pt.basis.projectors();
            for r in 0..side {
                decode(r, n, &mut rows);
                for c in 0..side {
                    decode(c, n, &mut cols);
                    let mut prod = grid.get(rows[0], cols[0]).clone();
                    for m in 1..p {
                        prod = prod.matmul(grid.get(rows[m], cols[m]));
                    }
                    out[(r, c)] += prod.normalized_trace() * pt.weight;
                }
            }
        }
        out
    }

    fn random_frame_model(n: usize, seed: u64) -> FlatModel {
        // xi_ij = column (i + j) mod n of a Haar unitary: a Latin square frame
        let u = haar_unitary(n, seed);
        let vectors = (0..n * n)
            .map(|k| UnitVector::normalized(u.column((k / n + k % n) % n)).unwrap())
            .collect();
        FlatModel::single(MagicBasis::new(n, vectors, 1e-9).unwrap())
    }

    #[test]
    fn first_order_is_uniform_for_flat_models() {
        for m in [fourier_model(&[3]).unwrap(), random_frame_model(4, 1)] {
            let t = t_matrix(&m, 1).unwrap();
            let n = m.size() as f64;
            for z in t.matrix().entries() {
                assert!((z - ONE / n).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn z2_regular_second_order_is_idempotent() {
        let m = regular_model(&families::cyclic(2).unwrap()).unwrap();
        let t = t_matrix(&m, 2).unwrap();
        // hand enumeration: T_2[(i1,i2),(j1,j2)] = 1/2 when i1 - j1 = i2 - j2 mod 2
        for r in 0..4 {
            for c in 0..4 {
                let (i1, i2, j1, j2) = (r / 2, r % 2, c / 2, c % 2);
                let expect = if (i1 + j1) % 2 == (i2 + j2) % 2 { 0.5 } else { 0.0 };
                assert!((t.matrix()[(r, c)] - Complex64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
        assert!(t.idempotency_defect() <= 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let m = fourier_model(&[6]).unwrap();
        assert!(matches!(
            t_matrix(&m, 4),
            Err(Error::CapExceeded { size: 1296, cap: 1024, .. })
        ));
        assert!(t_matrix_capped(&m, 4, 2000).is_ok());
    }

    #[test]
    fn stationary_examples() {
        for n in 2..=6 {
            let r = stationarity_test(&regular_model(&families::cyclic(n).unwrap()).unwrap(), 3, 1e-10).unwrap();
            assert!(r.stationary, "regular Z_{n}: {:?}", r.defects);
            let f = stationarity_test(&fourier_model(&[n]).unwrap(), 3, 1e-10).unwrap();
            assert!(f.stationary, "Fourier Z_{n}: {:?}", f.defects);
        }
    }

    #[test]
    fn cesaro_of_stationary_model_is_constant() {
        let m = fourier_model(&[4]).unwrap();
        let c = cesaro_moments(&m, 2, 10, 1e-9).unwrap();
        let t = t_matrix(&m, 2).unwrap();
        assert!(c.converged);
        for a in &c.averages {
            assert!(a.approx_eq(t.matrix(), 1e-10));
        }
    }

    #[test]
    fn fourier_character_moments() {
        for n in [2usize, 3, 4, 5] {
            let m = fourier_model(&[n]).unwrap();
            let law = character_law(&m, 1, 3).unwrap();
            for p in 1..=3 {
                let expect = (n as f64).powi(p as i32 - 1);
                assert!((law.chi_moment(p) - expect).abs() < 1e-9);
                let g = law.moments[p - 1].gram_value.unwrap();
                assert!((g - law.moments[p - 1].value).abs() < 1e-12);
            }
            assert_eq!(law.moments[0].stderr, Some(0.0));
        }
    }

    #[test]
    fn regular_s3_matches_permutation_measure() {
        let s3 = families::symmetric(3).unwrap().regular_action();
        let m = regular_model(&s3).unwrap();
        let mu = character_measure(&s3);
        for r in [1, 2] {
            let law = character_law(&m, r, 3).unwrap();
            for p in 1..=3u32 {
                let exact = mu.moment(p);
                let exact = *exact.numer() as f64 / *exact.denom() as f64;
                assert!((law.chi_moment(p as usize) - exact).abs() < 1e-9, "r={r} p={p}");
                let gv = law.moments[p as usize - 1].gram_value.unwrap();
                assert!((gv - law.moments[p as usize - 1].value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_route_agrees_on_multi_point_models() {
        let bases: Vec<MagicBasis> = (0..5)
            .map(|s| random_frame_model(3, s).points()[0].basis.clone())
            .collect();
        let m = FlatModel::uniform(bases).unwrap();
        for r in [1, 2] {
            let law = character_law(&m, r, 3).unwrap();
            for e in &law.moments {
                assert!((e.gram_value.unwrap() - e.value).abs() < 1e-12, "r={r} {e:?}");
            }
        }
    }

    #[test]
    fn classical_model_matches_group_average() {
        let g = families::symmetric(3).unwrap();
        let m = classical_model(&g);
        let t = t_matrix(&m, 2).unwrap();
        for r in 0..9 {
            for c in 0..9 {
                let (i1, i2, j1, j2) = (r / 3, r % 3, c / 3, c % 3);
                let count = g
                    .elements()
                    .iter()
                    .filter(|s| s.apply(j1) == i1 && s.apply(j2) == i2)
                    .count();
                let expect = count as f64 / 6.0;
                assert!((t.matrix()[(r, c)].re - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let bases: Vec<MagicBasis> = (0..200)
            .map(|s| random_frame_model(3, s).points()[0].basis.clone())
            .collect();
        let m = FlatModel::uniform(bases).unwrap();
        let a = t_matrix(&m, 2).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| t_matrix(&m, 2).unwrap());
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn inner_product_form_matches_projector_products(seed in any::<u64>(), p in 1usize..=3) {
            let mut r = rng(seed);
            let n = 3;
            let bases: Vec<MagicBasis> = (0..3)
                .map(|_| random_frame_model(n, rand::Rng::random(&mut r)).points()[0].basis.clone())
                .collect();
            let m = FlatModel::uniform(bases).unwrap();
            let fast = t_matrix(&m, p).unwrap();
            prop_assert!(fast.matrix().max_abs_diff(&brute_t(&m, p)) <= 1e-12);
            // doubly stochastic at first order
            if p == 1 {
                for i in 0..n {
                    let row: Complex64 = (0..n).map(|j| fast.matrix()[(i, j)]).sum();
                    let col: Complex64 = (0..n).map(|j| fast.matrix()[(j, i)]).sum();
                    prop_assert!((row - ONE).norm() < 1e-12 && (col - ONE).norm() < 1e-12);
                }
            }
        }
    }
}
