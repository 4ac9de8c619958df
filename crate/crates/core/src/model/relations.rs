use serde::Serialize;

use super::moments::{cesaro_from_tensor, t_matrix};
use super::FlatModel;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, UnitVector};

/// `i ~_k j` on `k`-tuples: `u_{i_1 j_1} .. u_{i_k j_k} != 0`, detected on the
/// sample as a product of projectors with max-entry above the threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRelation {
    pub k: usize,
    /// Number of `k`-tuples, `N^k`; tuples are flattened row-major.
    pub elements: usize,
    #[serde(skip)]
    pub relation: Vec<bool>,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    /// Equivalence classes, when the relation is an equivalence.
    pub classes: Option<Vec<Vec<usize>>>,
}

impl OrbitRelation {
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.relation[a * self.elements + b]
    }

    pub fn is_equivalence(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }
}

fn max_entry(v: &UnitVector) -> f64 {
    v.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Computes `~_k` for `k` in 1..=3. At `k <= 2` the relation must be an
/// equivalence; if roundoff breaks that, this fails with `RelationBroken`.
/// At `k = 3` the properties are only reported.
pub fn orbit_relations(model: &FlatModel, k: usize, threshold: f64) -> Result<OrbitRelation> {
    if !(1..=3).contains(&k) {
        return Err(Error::invalid(format!("orbit relations need k in 1..=3, got {k}")));
    }
    let n = model.size();
    let m = n.pow(k as u32);
    let mut rel = vec![false; m * m];
    let mut a = vec![0usize; k];
    let mut b = vec![0usize; k];
    for pt in model.points() {
        let basis = &pt.basis;
        let norms: Vec<f64> = basis.vectors().iter().map(max_entry).collect();
        for s in 0..m {
            decode(s, n, &mut a);
            for t in 0..m {
                if rel[s * m + t] {
                    continue;
                }
                decode(t, n, &mut b);
                // P_1 .. P_k = xi_1 (prod <xi_m, xi_{m+1}>) xi_k^*
                let first = a[0] * n + b[0];
                let last = a[k - 1] * n + b[k - 1];
                let mut size = norms[first] * norms[last];
                for q in 0..k - 1 {
                    if size <= threshold {
                        break;
                    }
                    let x = basis.get(a[q], b[q]);
                    let y = basis.get(a[q + 1], b[q + 1]);
                    size *= x.inner(y).norm();
                }
                if size > threshold {
                    rel[s * m + t] = true;
                }
            }
        }
    }

    let reflexive = (0..m).all(|s| rel[s * m + s]);
    let symmetric = (0..m).all(|s| (0..m).all(|t| rel[s * m + t] == rel[t * m + s]));
    let transitive = (0..m).all(|s| {
        (0..m)
            .filter(|&t| rel[s * m + t])
            .all(|t| (0..m).all(|u| !rel[t * m + u] || rel[s * m + u]))
    });
    if k <= 2 {
        let broken: Vec<&str> = [
            (!reflexive, "reflexivity"),
            (!symmetric, "symmetry"),
            (!transitive, "transitivity"),
        ]
        .iter()
        .filter(|(bad, _)| *bad)
        .map(|(_, name)| *name)
        .collect();
        if !broken.is_empty() {
            return Err(Error::RelationBroken(format!(
                "k = {k} relation fails {} (support threshold {threshold:e})",
                broken.join(", ")
            )));
        }
    }
    let classes = (reflexive && symmetric && transitive).then(|| {
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for s in 0..m {
            if !seen[s] {
                let class: Vec<usize> = (0..m).filter(|&t| rel[s * m + t]).collect();
                for &t in &class {
                    seen[t] = true;
                }
                out.push(class);
            }
        }
        out
    });
    Ok(OrbitRelation {
        k,
        elements: m,
        relation: rel,
        reflexive,
        symmetric,
        transitive,
        classes,
    })
}

fn decode(mut k: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = k % n;
        k /= n;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitivityReport {
    /// Row-major Cesaro estimates of the integrals of `u_ij`.
    pub estimates: Vec<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub transitive: bool,
    pub cesaro_steps: usize,
}

/// Compares the Cesaro limit of `T_1` with the uniform value `1/N`.
pub fn transitivity_estimate(model: &FlatModel, r_max: usize, tol: f64) -> Result<TransitivityReport> {
    let t = t_matrix(model, 1)?;
    let c = cesaro_from_tensor(t.matrix(), r_max, tol);
    let target = 1.0 / model.size() as f64;
    let estimates: Vec<f64> = c.limit().entries().iter().map(|z| z.re).collect();
    let max_deviation = c
        .limit()
        .entries()
        .iter()
        .map(|z| (z - target).norm())
        .fold(0.0, f64::max);
    Ok(TransitivityReport {
        estimates,
        max_deviation,
        tolerance: tol,
        transitive: max_deviation <= tol,
        cesaro_steps: c.averages.len(),
    })
}

/// Expected `int u_ij u_kl` for a doubly transitive action, arranged like
/// `T_2` with row `(i, k)` and column `(j, l)`: `1/N` when `i = k, j = l`, `0`
/// when exactly one of those holds, `1/(N(N-1))` otherwise.
pub fn double_transitivity_table(n: usize) -> CMatrix {
    let generic = if n > 1 { 1.0 / (n * (n - 1)) as f64 } else { 0.0 };
    CMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        let v = match (i == k, j == l) {
            (true, true) => 1.0 / n as f64,
            (false, false) => generic,
            _ => 0.0,
        };
        v.into()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubleTransitivityReport {
    /// `tr(P_ij P_kl)` follows the table at every point.
    pub doubly_flat: bool,
    pub flat_defect: f64,
    /// Cesaro estimate of `int u_ij u_kl` follows the table.
    pub doubly_transitive: bool,
    pub integral_defect: f64,
    /// `[min, max]` of the estimates over cells with `i = k, j = l`.
    pub diagonal_cells: [f64; 2],
    /// Cells where exactly one of `i = k`, `j = l` holds.
    pub mixed_cells: [f64; 2],
    /// Cells with `i != k` and `j != l`.
    pub generic_cells: [f64; 2],
    pub tolerance: f64,
    pub cesaro_converged: bool,
}

pub fn double_transitivity_test(model: &FlatModel, r_max: usize, tol: f64) -> Result<DoubleTransitivityReport> {
    let n = model.size();
    let table = double_transitivity_table(n);
    let k = model.dim() as f64;

    let mut flat_defect: f64 = 0.0;
    for pt in model.points() {
        let b = &pt.basis;
        for r in 0..n * n {
            for c in 0..n * n {
                let (i, kk) = (r / n, r % n);
                let (j, l) = (c / n, c % n);
                let v = b.get(i, j).inner(b.get(kk, l)).norm_sqr() / k;
                flat_defect = flat_defect.max((v - table[(r, c)].re).abs());
            }
        }
    }

    let t2 = t_matrix(model, 2)?;
    let c = cesaro_from_tensor(t2.matrix(), r_max, tol);
    let est = c.limit();
    let integral_defect = est.max_abs_diff(&table);
    let mut cells = [[f64::INFINITY, f64::NEG_INFINITY]; 3];
    for r in 0..n * n {
        for col in 0..n * n {
            let (i, kk) = (r / n, r % n);
            let (j, l) = (col / n, col % n);
            let slot = match (i == kk, j == l) {
                (true, true) => 0,
                (false, false) => 2,
                _ => 1,
            };
            let v = est[(r, col)].re;
            cells[slot][0] = cells[slot][0].min(v);
            cells[slot][1] = cells[slot][1].max(v);
        }
    }
    Ok(DoubleTransitivityReport {
        doubly_flat: flat_defect <= tol,
        flat_defect,
        doubly_transitive: integral_defect <= tol,
        integral_defect,
        diagonal_cells: cells[0],
        mixed_cells: cells[1],
        generic_cells: cells[2],
        tolerance: tol,
        cesaro_converged: c.converged,
    })
}
