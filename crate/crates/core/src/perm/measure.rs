//! Law of the fixed-point count.

use num_rational::Rational64;

use super::PermGroup;

/// Discrete measure `c_0 delta_0 + .. + c_N delta_N` with exact weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralMeasure {
    degree: usize,
    weights: Vec<Rational64>,
}

impl SpectralMeasure {
    pub fn new(weights: Vec<Rational64>) -> Self {
        assert!(!weights.is_empty(), "measure needs at least one atom");
        Self {
            degree: weights.len() - 1,
            weights,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &[Rational64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> Rational64 {
        self.weights.get(i).copied().unwrap_or_default()
    }

    pub fn total(&self) -> Rational64 {
        self.weights.iter().sum()
    }

    /// `sum_i c_i i^k`.
    pub fn moment(&self, k: u32) -> Rational64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational64::from_integer((i as i64).pow(k)))
            .sum()
    }

    pub fn mean(&self) -> Rational64 {
        self.moment(1)
    }

    /// Weights rendered as `"a/b"` strings, for reports.
    pub fn to_strings(&self) -> Vec<String> {
        self.weights.iter().map(|c| c.to_string()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|c| *c.numer() as f64 / *c.denom() as f64)
            .collect()
    }
}

/// `c_i = #{s in G : s has i fixed points} / |G|`.
pub fn character_measure(g: &PermGroup) -> SpectralMeasure {
    let n = g.degree();
    let mut counts = vec![0i64; n + 1];
    for s in g.elements() {
        counts[s.fixed_points()] += 1;
    }
    let order = g.order() as i64;
    SpectralMeasure::new(
        counts
            .into_iter()
            .map(|c| Rational64::new(c, order))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::super::families;
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn trivial_group_is_dirac() {
        let m = character_measure(&PermGroup::trivial(4));
        assert_eq!(m.weights(), &[r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(1, 1)]);
    }

    #[test]
    fn s3_weights() {
        let m = character_measure(&families::symmetric(3).unwrap());
        assert_eq!(m.weights(), &[r(1, 3), r(1, 2), r(0, 1), r(1, 6)]);
        assert_eq!(m.mean(), r(1, 1));
    }

    #[test]
    fn pgl2_matches_closed_form() {
        for p in [3i64, 5, 7] {
            let m = character_measure(&families::pgl2(p as u64).unwrap());
            let mut expect = vec![r(0, 1); p as usize + 2];
            expect[0] = r(p, 2 * (p + 1));
            expect[1] = r(1, p);
            expect[2] = r(p - 2, 2 * (p - 1));
            expect[p as usize + 1] = r(1, (p - 1) * p * (p + 1));
            assert_eq!(m.weights(), expect.as_slice(), "p = {p}");
        }
        let m3 = character_measure(&families::pgl2(3).unwrap());
        assert_eq!(m3.weights(), &[r(3, 8), r(1, 3), r(1, 4), r(0, 1), r(1, 24)]);
    }

    #[test]
    fn identities_hold_on_families() {
        for g in [
            families::cyclic(6).unwrap(),
            families::symmetric(5).unwrap(),
            families::dihedral(5).unwrap(),
            families::alternating(4).unwrap(),
        ] {
            let m = character_measure(&g);
            let n = g.degree();
            assert_eq!(m.total(), r(1, 1));
            assert_eq!(m.weight(n - 1), r(0, 1));
            assert_eq!(m.weight(n), r(1, g.order() as i64));
            assert_eq!(m.weight(0), r(g.derangements().len() as i64, g.order() as i64));
            // transitive groups have one fixed point on average
            assert_eq!(m.mean(), r(1, 1));
        }
    }
}
