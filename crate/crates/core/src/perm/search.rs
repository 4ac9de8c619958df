//! Exhaustive searches over a permutation group: graph covers, Latin tuples,
//! and subgroups.

use std::collections::{HashSet, VecDeque};

use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

/// Minimum number of `candidates` whose graphs `{(s(j), j)}` cover every
/// pair of points, or `None` when even all of them do not.
///
/// Exact branch and bound. The lower bound at a node is the largest number of
/// uncovered pairs in a single column `j`, since one permutation covers
/// exactly one pair per column. A greedy cover gives the initial upper bound.
pub fn min_graph_cover(degree: usize, candidates: &[Permutation]) -> Option<Vec<usize>> {
    let n = degree;
    if n == 0 {
        return Some(Vec::new());
    }
    // covers[i * n + j] = candidates with s(j) = i
    let mut covers = vec![Vec::new(); n * n];
    for (c, s) in candidates.iter().enumerate() {
        for j in 0..n {
            covers[s.apply(j) * n + j].push(c);
        }
    }
    if covers.iter().any(|v| v.is_empty()) {
        return None;
    }

    let greedy = greedy_cover(n, candidates);
    let mut state = CoverState {
        n,
        candidates,
        covers: &covers,
        count: vec![0u32; n * n],
        col_uncovered: vec![n; n],
        chosen: Vec::new(),
        best: greedy,
    };
    state.search();
    Some(state.best)
}

fn greedy_cover(n: usize, candidates: &[Permutation]) -> Vec<usize> {
    let mut covered = vec![false; n * n];
    let mut left = n * n;
    let mut chosen = Vec::new();
    while left > 0 {
        let (best, gain) = candidates
            .iter()
            .enumerate()
            .map(|(c, s)| (c, (0..n).filter(|&j| !covered[s.apply(j) * n + j]).count()))
            .max_by_key(|&(c, g)| (g, std::cmp::Reverse(c)))
            .expect("non-empty candidate list");
        debug_assert!(gain > 0);
        for j in 0..n {
            let k = candidates[best].apply(j) * n + j;
            if !covered[k] {
                covered[k] = true;
                left -= 1;
            }
        }
        chosen.push(best);
    }
    chosen
}

struct CoverState<'a> {
    n: usize,
    candidates: &'a [Permutation],
    covers: &'a [Vec<usize>],
    count: Vec<u32>,
    col_uncovered: Vec<usize>,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl CoverState<'_> {
    fn add(&mut self, c: usize) {
        let n = self.n;
        for j in 0..n {
            let k = self.candidates[c].apply(j) * n + j;
            if self.count[k] == 0 {
                self.col_uncovered[j] -= 1;
            }
            self.count[k] += 1;
        }
        self.chosen.push(c);
    }

    fn remove(&mut self, c: usize) {
        let n = self.n;
        for j in 0..n {
            let k = self.candidates[c].apply(j) * n + j;
            self.count[k] -= 1;
            if self.count[k] == 0 {
                self.col_uncovered[j] += 1;
            }
        }
        self.chosen.pop();
    }

    fn search(&mut self) {
        let lb = self.col_uncovered.iter().copied().max().unwrap_or(0);
        if lb == 0 {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.chosen.len() + lb >= self.best.len() {
            return;
        }
        // branch on the uncovered pair with the fewest covering candidates
        let pair = (0..self.n * self.n)
            .filter(|&k| self.count[k] == 0)
            .min_by_key(|&k| self.covers[k].len())
            .expect("an uncovered pair exists");
        let options = self.covers[pair].clone();
        for c in options {
            self.add(c);
            self.search();
            self.remove(c);
        }
    }
}

/// Transitivity level: the least number of group elements whose graphs cover
/// every pair `(i, j)`.
pub fn transitivity_level(g: &PermGroup) -> Result<usize> {
    if !g.is_transitive() {
        return Err(Error::NotTransitive {
            orbits: g.orbits().len(),
        });
    }
    if strongest_transitive_certificate(g).is_some() {
        return Ok(g.degree());
    }
    let cover = min_graph_cover(g.degree(), g.elements()).expect("transitive groups cover all pairs");
    Ok(cover.len())
}

/// `N` elements whose pairwise quotients `s_i^{-1} s_j` (`i != j`) are all
/// derangements, found by backtracking, or `None` if no such tuple exists.
///
/// The returned tuple is normalized so that the first element is the identity
/// and the `a`-th element sends point 0 to point `a`.
pub fn strongest_transitive_certificate(g: &PermGroup) -> Option<Vec<Permutation>> {
    let n = g.degree();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut by_image: Vec<Vec<&Permutation>> = vec![Vec::new(); n];
    for d in g.elements().iter().filter(|p| p.is_derangement()) {
        by_image[d.apply(0)].push(d);
    }
    let mut chosen: Vec<&Permutation> = vec![g.identity()];
    fn extend<'a>(
        pos: usize,
        n: usize,
        by_image: &[Vec<&'a Permutation>],
        chosen: &mut Vec<&'a Permutation>,
    ) -> bool {
        if pos == n {
            return true;
        }
        for &cand in &by_image[pos] {
            if chosen.iter().all(|c| c.differs_everywhere(cand)) {
                chosen.push(cand);
                if extend(pos + 1, n, by_image, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if extend(1, n, &by_image, &mut chosen) {
        Some(chosen.into_iter().cloned().collect())
    } else {
        None
    }
}

/// Up to `limit` tuples `(s_1, .., s_N)` of group elements such that
/// `s_1(i), .., s_N(i)` are distinct for every point `i`, in lexicographic
/// order of element indices.
pub fn enumerate_latin_tuples(g: &PermGroup, limit: usize) -> Vec<Vec<Permutation>> {
    let n = g.degree();
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        g: &PermGroup,
        n: usize,
        limit: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Permutation>>,
    ) {
        if chosen.len() == n {
            out.push(chosen.iter().map(|&k| g.elements()[k].clone()).collect());
            return;
        }
        for (k, cand) in g.elements().iter().enumerate() {
            if chosen.iter().all(|&c| g.elements()[c].differs_everywhere(cand)) {
                chosen.push(k);
                rec(g, n, limit, chosen, out);
                chosen.pop();
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
    rec(g, n, limit, &mut chosen, &mut out);
    out
}

type SubgroupKey = Vec<usize>;

fn key_of(g: &PermGroup, h: &PermGroup) -> SubgroupKey {
    let mut k: Vec<usize> = h
        .elements()
        .iter()
        .map(|p| g.index_of(p).expect("subgroup element"))
        .collect();
    k.sort_unstable();
    k
}

/// Cyclic-extension search over subgroups of `g`. `admit` decides whether a
/// subgroup is kept and extended further; it must be inherited by subgroups
/// for the search to be exhaustive over admitted subgroups.
fn subgroup_search(
    g: &PermGroup,
    seeds: &[Permutation],
    mut admit: impl FnMut(&PermGroup) -> bool,
) -> Vec<PermGroup> {
    let trivial = PermGroup::trivial(g.degree());
    let mut seen: HashSet<SubgroupKey> = HashSet::new();
    seen.insert(key_of(g, &trivial));
    let mut found = vec![trivial.clone()];
    let mut queue = VecDeque::from([trivial]);
    while let Some(h) = queue.pop_front() {
        for s in seeds {
            if h.contains(s) {
                continue;
            }
            let mut gens = h.generators().to_vec();
            gens.push(s.clone());
            let Ok(k) = PermGroup::generate(g.degree(), &gens, g.order()) else {
                continue;
            };
            let key = key_of(g, &k);
            if seen.contains(&key) {
                continue;
            }
            seen.insert(key);
            if admit(&k) {
                found.push(k.clone());
                queue.push_back(k);
            }
        }
    }
    found.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    found
}

/// Every subgroup of `g`, sorted by order and then by element list.
pub fn all_subgroups(g: &PermGroup) -> Vec<PermGroup> {
    let seeds: Vec<Permutation> = g.elements()[1..].to_vec();
    subgroup_search(g, &seeds, |_| true)
}

/// Subgroups of the given order in which every non-identity element is a
/// derangement. Exhaustive.
pub fn deranging_subgroups(g: &PermGroup, order: usize) -> Vec<PermGroup> {
    if order == 0 || g.order() % order != 0 {
        return Vec::new();
    }
    // only elements generating a deranging cyclic group of admissible order
    let seeds: Vec<Permutation> = g.elements()[1..]
        .iter()
        .filter(|s| {
            let k = s.order();
            if order % k != 0 {
                return false;
            }
            let mut q = (*s).clone();
            for _ in 1..k {
                if !q.is_derangement() {
                    return false;
                }
                q = q.compose(s);
            }
            true
        })
        .cloned()
        .collect();
    let deranging = |h: &PermGroup| {
        order % h.order() == 0 && h.elements()[1..].iter().all(|p| p.is_derangement())
    };
    subgroup_search(g, &seeds, deranging)
        .into_iter()
        .filter(|h| h.order() == order)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::families;
    use super::super::tests::{all_perms, p};
    use super::*;
    use proptest::prelude::*;

    fn s3() -> PermGroup {
        families::symmetric(3).unwrap()
    }

    /// Smallest covering subset by trying subsets in order of size.
    fn brute_force_cover(n: usize, elems: &[Permutation]) -> Option<usize> {
        let m = elems.len();
        assert!(m <= 20);
        (0..=m).find(|&size| {
            (0u32..(1 << m)).filter(|mask| mask.count_ones() as usize == size).any(|mask| {
                let mut covered = vec![false; n * n];
                for (c, s) in elems.iter().enumerate() {
                    if mask & (1 << c) != 0 {
                        for j in 0..n {
                            covered[s.apply(j) * n + j] = true;
                        }
                    }
                }
                covered.into_iter().all(|x| x)
            })
        })
    }

    #[test]
    fn level_of_cyclic_is_degree() {
        for n in 2..8 {
            assert_eq!(transitivity_level(&families::cyclic(n).unwrap()).unwrap(), n);
        }
    }

    #[test]
    fn level_of_s3_and_s4() {
        let g = s3();
        assert_eq!(brute_force_cover(3, g.elements()), Some(3));
        assert_eq!(transitivity_level(&g).unwrap(), 3);
        assert_eq!(transitivity_level(&families::symmetric(4).unwrap()).unwrap(), 4);
    }

    #[test]
    fn level_rejects_intransitive() {
        let g = PermGroup::closure(4, &[p(&[2, 1, 3, 4])]).unwrap();
        assert!(matches!(transitivity_level(&g), Err(Error::NotTransitive { orbits: 3 })));
    }

    #[test]
    fn cover_above_degree_when_no_latin_tuple() {
        // five elements covering all pairs of four points, but no four of them do
        let elems = vec![
            p(&[1, 2, 3, 4]),
            p(&[1, 3, 4, 2]),
            p(&[2, 1, 4, 3]),
            p(&[3, 4, 2, 1]),
            p(&[4, 2, 1, 3]),
        ];
        assert_eq!(brute_force_cover(4, &elems), Some(5));
        assert_eq!(min_graph_cover(4, &elems).unwrap().len(), 5);
        assert!(min_graph_cover(4, &elems[..4]).is_none());
    }

    proptest! {
        #[test]
        fn branch_and_bound_matches_brute_force(mask in 1u32..(1 << 24)) {
            let all = all_perms(4);
            let elems: Vec<Permutation> = all
                .into_iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, q)| q)
                .take(14)
                .collect();
            let bb = min_graph_cover(4, &elems).map(|c| c.len());
            prop_assert_eq!(bb, brute_force_cover(4, &elems));
        }
    }

    #[test]
    fn cyclic_certificate_is_powers() {
        let g = families::cyclic(5).unwrap();
        let cert = strongest_transitive_certificate(&g).unwrap();
        let c = p(&[2, 3, 4, 5, 1]);
        let mut pw = Permutation::identity(5);
        for s in &cert {
            assert_eq!(s, &pw);
            pw = c.compose(&pw);
        }
    }

    #[test]
    fn certificate_quotients_are_derangements() {
        for g in [families::symmetric(4).unwrap(), families::pgl2(5).unwrap()] {
            let cert = strongest_transitive_certificate(&g).unwrap();
            assert_eq!(cert.len(), g.degree());
            for (i, a) in cert.iter().enumerate() {
                assert!(g.contains(a));
                for (j, b) in cert.iter().enumerate() {
                    if i != j {
                        assert!(a.inverse().compose(b).is_derangement());
                    }
                }
            }
        }
    }

    #[test]
    fn no_certificate_for_intransitive_group() {
        let g = PermGroup::closure(4, &[p(&[2, 1, 3, 4]), p(&[1, 2, 4, 3])]).unwrap();
        assert!(strongest_transitive_certificate(&g).is_none());
        assert!(enumerate_latin_tuples(&g, 10).is_empty());
    }

    #[test]
    fn latin_tuples_of_z2() {
        let g = families::cyclic(2).unwrap();
        let t = enumerate_latin_tuples(&g, 10);
        assert_eq!(
            t,
            vec![vec![p(&[1, 2]), p(&[2, 1])], vec![p(&[2, 1]), p(&[1, 2])]]
        );
    }

    #[test]
    fn latin_tuples_of_s4() {
        let g = families::symmetric(4).unwrap();
        // 576 Latin squares of order 4
        assert_eq!(enumerate_latin_tuples(&g, usize::MAX).len(), 576);
        let first = enumerate_latin_tuples(&g, 4);
        assert_eq!(first.len(), 4);
        assert!(first.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn deranging_examples() {
        let z5 = families::cyclic(5).unwrap();
        let d = deranging_subgroups(&z5, 5);
        assert_eq!(d, vec![z5.clone()]);

        let h2 = families::hyperoctahedral_segments(2).unwrap();
        let d = deranging_subgroups(&h2, 4);
        assert!(!d.is_empty());

        let pgl5 = families::pgl2(5).unwrap();
        assert!(deranging_subgroups(&pgl5, 7).is_empty());
    }

    #[test]
    fn pgl2_5_has_regular_cyclic_subgroup() {
        // [[0, 3], [1, 1]] has characteristic polynomial t^2 + 4t + 2, which is
        // irreducible mod 5, so no power below the sixth fixes a point
        let pgl5 = families::pgl2(5).unwrap();
        let x = families::mobius(0, 3, 1, 1, 5);
        let mut powers = vec![Permutation::identity(6)];
        while powers.len() < 7 {
            let next = x.compose(powers.last().unwrap());
            if next.is_identity() {
                break;
            }
            powers.push(next);
        }
        assert_eq!(powers.len(), 6);
        assert!(powers[1..].iter().all(|q| q.is_derangement() && pgl5.contains(q)));

        let found = deranging_subgroups(&pgl5, 6);
        let cyclic = PermGroup::closure(6, &[x]).unwrap();
        assert!(found.contains(&cyclic));
        for h in &found {
            assert_eq!(h.order(), 6);
            for a in h.elements() {
                assert!(pgl5.contains(a));
                assert!(a.is_identity() || a.is_derangement());
                for b in h.elements() {
                    assert!(h.contains(&a.compose(b)));
                }
            }
        }
    }

    #[test]
    fn deranging_subgroups_of_s4_order_4() {
        // the normal Klein group and the three cyclic groups generated by 4-cycles
        let d = deranging_subgroups(&families::symmetric(4).unwrap(), 4);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(&s3()).len(), 6);
        assert_eq!(all_subgroups(&families::symmetric(4).unwrap()).len(), 30);
        assert_eq!(all_subgroups(&families::cyclic(12).unwrap()).len(), 6);
    }
}
