//! Finite permutation groups on `{0, .., N-1}`.
//!
//! Internally points are 0-based; files and the command line use 1-based
//! one-line notation. Composition is right-to-left: `(a * b)(x) = a(b(x))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod families;
mod latin;
mod measure;
mod search;

pub use latin::LatinSquare;
pub use measure::{character_measure, SpectralMeasure};
pub use search::{
    all_subgroups, deranging_subgroups, enumerate_latin_tuples, min_graph_cover,
    strongest_transitive_certificate, transitivity_level,
};

/// Default cap on the number of elements a closure may produce.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A permutation in one-line notation, `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u32).collect(),
        }
    }

    /// From 0-based images; rejects non-bijections.
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(images: &[u32]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::invalid("one-line notation is 1-based"));
        }
        Self::new(images.iter().map(|&x| x - 1).collect())
    }

    pub fn to_one_line(&self) -> Vec<u32> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as u32 == y)
            .count()
    }

    pub fn is_derangement(&self) -> bool {
        self.fixed_points() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.fixed_points() == self.degree()
    }

    /// Whether `self^{-1} other` is a derangement, i.e. the two permutations
    /// disagree at every point.
    pub fn differs_everywhere(&self, other: &Permutation) -> bool {
        self.images.iter().zip(&other.images).all(|(a, b)| a != b)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_one_line())
    }
}

/// A finite permutation group with its elements listed in lexicographic
/// order of their one-line notation (identity first).
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Closure of `generators` under composition, capped at `cap` elements.
    pub fn generate(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DimensionMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = g.compose(&x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Permutation> = seen.into_iter().collect();
        Ok(Self::from_parts(degree, elements, generators.to_vec()))
    }

    /// Closure with the default cap.
    pub fn closure(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::generate(degree, generators, DEFAULT_GROUP_CAP)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_parts(degree, vec![Permutation::identity(degree)], Vec::new())
    }

    /// Assumes `elements` is already closed; sorts and indexes it.
    pub(crate) fn from_parts(
        degree: usize,
        mut elements: Vec<Permutation>,
        generators: Vec<Permutation>,
    ) -> Self {
        elements.sort_unstable();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Self {
            degree,
            elements,
            generators,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> &Permutation {
        &self.elements[0]
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// The derangement subset `D_G`, in canonical order.
    pub fn derangements(&self) -> Vec<Permutation> {
        self.elements
            .iter()
            .filter(|p| p.is_derangement())
            .cloned()
            .collect()
    }

    /// Orbit partition of the natural action; blocks sorted by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree;
        let mut block = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        let movers = if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        };
        for start in 0..n {
            if block[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            block[start] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for g in movers {
                    let y = g.apply(x);
                    if block[y] == usize::MAX {
                        block[y] = id;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    /// Left-translation action of the group on its own elements, as a group of
    /// degree `|G|` (points are element indices in canonical order).
    pub fn regular_action(&self) -> PermGroup {
        let perms: Vec<Permutation> = self
            .elements
            .iter()
            .map(|g| Permutation {
                images: self
                    .elements
                    .iter()
                    .map(|y| self.index[&g.compose(y)] as u32)
                    .collect(),
            })
            .collect();
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .map(|g| perms[self.index[g]].clone())
            .collect();
        PermGroup::from_parts(self.order(), perms, gens)
    }

    /// Subgroup generated by `gens`, which must lie in `self`.
    pub fn subgroup(&self, gens: &[Permutation]) -> Result<PermGroup> {
        if let Some(g) = gens.iter().find(|g| !self.contains(g)) {
            return Err(Error::invalid(format!("{g:?} is not an element of the group")));
        }
        PermGroup::generate(self.degree, gens, self.order())
    }

    /// Direct product acting on the disjoint union of the point sets.
    pub fn direct_product(&self, other: &PermGroup) -> Result<PermGroup> {
        let n = self.degree;
        let m = other.degree;
        let lift_left = |p: &Permutation| Permutation {
            images: p
                .images
                .iter()
                .copied()
                .chain((n as u32)..(n + m) as u32)
                .collect(),
        };
        let lift_right = |p: &Permutation| Permutation {
            images: (0..n as u32)
                .chain(p.images.iter().map(|&x| x + n as u32))
                .collect(),
        };
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .map(lift_left)
            .chain(other.generators.iter().map(lift_right))
            .collect();
        PermGroup::generate(n + m, &gens, self.order().saturating_mul(other.order()).max(1))
    }
}

/// On-disk group description: 1-based generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupSpec {
    pub fn from_group(g: &PermGroup) -> Self {
        Self {
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.to_one_line()).collect(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                if g.len() != self.degree {
                    return Err(Error::DimensionMismatch {
                        expected: self.degree,
                        found: g.len(),
                    });
                }
                Permutation::from_one_line(g)
            })
            .collect::<Result<Vec<_>>>()?;
        PermGroup::generate(self.degree, &gens, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn p(one_line: &[u32]) -> Permutation {
        Permutation::from_one_line(one_line).unwrap()
    }

    /// All permutations of `n` points, by Heap's algorithm.
    pub(crate) fn all_perms(n: usize) -> Vec<Permutation> {
        fn heap(k: usize, a: &mut Vec<u32>, out: &mut Vec<Permutation>) {
            if k <= 1 {
                out.push(Permutation { images: a.clone() });
                return;
            }
            for i in 0..k {
                heap(k - 1, a, out);
                if k % 2 == 0 {
                    a.swap(i, k - 1);
                } else {
                    a.swap(0, k - 1);
                }
            }
        }
        let mut a: Vec<u32> = (0..n as u32).collect();
        let mut out = Vec::new();
        heap(n, &mut a, &mut out);
        out
    }

    #[test]
    fn closure_small_examples() {
        assert_eq!(PermGroup::closure(2, &[p(&[2, 1])]).unwrap().order(), 2);
        assert_eq!(PermGroup::closure(3, &[p(&[2, 3, 1])]).unwrap().order(), 3);
    }

    #[test]
    fn closure_of_transposition_and_four_cycle_is_s4() {
        let g = PermGroup::closure(4, &[p(&[2, 1, 3, 4]), p(&[2, 3, 4, 1])]).unwrap();
        assert_eq!(g.order(), 24);
        for q in all_perms(4) {
            assert!(g.contains(&q));
        }
    }

    #[test]
    fn closure_respects_cap() {
        let err = PermGroup::generate(5, &[p(&[2, 1, 3, 4, 5]), p(&[2, 3, 4, 5, 1])], 100).unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { cap: 100 }));
        assert!(err.to_string().contains("100"));
    }

    #[test]
    fn closure_rejects_mixed_degrees() {
        assert!(PermGroup::closure(3, &[p(&[2, 1])]).is_err());
    }

    #[test]
    fn elements_are_canonical_and_closed() {
        let g = PermGroup::closure(4, &[p(&[2, 3, 4, 1]), p(&[4, 3, 2, 1])]).unwrap();
        assert!(g.identity().is_identity());
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
        for a in g.elements() {
            assert!(g.contains(&a.inverse()));
            for b in g.elements() {
                assert!(g.contains(&a.compose(b)));
            }
        }
        assert_eq!(24 % g.order(), 0);
    }

    #[test]
    fn derangement_counts() {
        assert!(PermGroup::trivial(3).derangements().is_empty());
        let s3 = PermGroup::closure(3, &[p(&[2, 1, 3]), p(&[2, 3, 1])]).unwrap();
        let d = s3.derangements();
        assert_eq!(d, vec![p(&[2, 3, 1]), p(&[3, 1, 2])]);
        let s4 = PermGroup::closure(4, &[p(&[2, 1, 3, 4]), p(&[2, 3, 4, 1])]).unwrap();
        let brute = all_perms(4).iter().filter(|q| q.fixed_points() == 0).count();
        assert_eq!(brute, 9);
        assert_eq!(s4.derangements().len(), brute);
    }

    #[test]
    fn orbit_examples() {
        let t = PermGroup::trivial(3);
        assert_eq!(t.orbits(), vec![vec![0], vec![1], vec![2]]);
        assert!(!t.is_transitive());
        let z4 = PermGroup::closure(4, &[p(&[2, 3, 4, 1])]).unwrap();
        assert_eq!(z4.orbits(), vec![vec![0, 1, 2, 3]]);
        assert!(z4.is_transitive());
        let g = PermGroup::closure(4, &[p(&[2, 1, 3, 4])]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn regular_action_is_regular() {
        let s3 = PermGroup::closure(3, &[p(&[2, 1, 3]), p(&[2, 3, 1])]).unwrap();
        let r = s3.regular_action();
        assert_eq!(r.degree(), 6);
        assert_eq!(r.order(), 6);
        assert!(r.is_transitive());
        assert_eq!(r.derangements().len(), 5);
    }

    #[test]
    fn permutation_basics() {
        let a = p(&[2, 3, 1]);
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(3));
        assert_eq!(a.order(), 3);
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
        // (a * b)(x) = a(b(x))
        let b = p(&[2, 1, 3]);
        assert_eq!(a.compose(&b).to_one_line(), vec![3, 2, 1]);
    }

    #[test]
    fn group_spec_roundtrip() {
        let spec = GroupSpec {
            degree: 4,
            generators: vec![vec![2, 3, 4, 1]],
        };
        let g = spec.build(DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 4);
        let text = serde_json::to_string(&GroupSpec::from_group(&g)).unwrap();
        assert_eq!(text, r#"{"degree":4,"generators":[[2,3,4,1]]}"#);
    }
}
