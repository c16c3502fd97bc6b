//! Exact W-length in finite groups by breadth-first search on the verbal
//! Cayley graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finite::{ElementId, FiniteGroup};
use crate::error::{Error, Result};
use crate::verbal::{enumerate_w_words, WordTemplate};
use crate::word::Word;

/// Distances from the identity in the Cayley graph of `G_w` whose
/// generators are all w-words and their inverses. `None` marks elements
/// outside the verbal subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    group: String,
    template: String,
    distance: Vec<Option<u32>>,
}

impl DistanceTable {
    pub fn new(group: impl Into<String>, template: impl Into<String>, distance: Vec<Option<u32>>) -> Self {
        DistanceTable {
            group: group.into(),
            template: template.into(),
            distance,
        }
    }

    pub fn group_spec(&self) -> &str {
        &self.group
    }

    pub fn template_name(&self) -> &str {
        &self.template
    }

    pub fn distance(&self, g: ElementId) -> Option<u32> {
        self.distance.get(g as usize).copied().flatten()
    }

    pub fn distances(&self) -> &[Option<u32>] {
        &self.distance
    }

    /// `d(a, b) = l(a^-1 b)`.
    pub fn metric(&self, group: &FiniteGroup, a: ElementId, b: ElementId) -> Option<u32> {
        self.distance(group.mul(group.inverse(a), b))
    }

    pub fn reachable(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.distance
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_some())
            .map(|(i, _)| i as ElementId)
    }

    /// Number of elements at each distance.
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for d in self.distance.iter().flatten() {
            *h.entry(*d).or_insert(0) += 1;
        }
        h
    }

    pub fn diameter(&self) -> u32 {
        self.distance.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// BFS from the identity over an inversion-closed generating set.
pub fn bfs_distances(g: &FiniteGroup, generators: &BTreeSet<ElementId>) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.order()];
    let gens: Vec<ElementId> = generators.iter().copied().collect();
    let mut queue = VecDeque::new();
    dist[g.identity() as usize] = Some(0);
    queue.push_back(g.identity());
    while let Some(a) = queue.pop_front() {
        let d = dist[a as usize].unwrap();
        for &s in &gens {
            let b = g.mul(a, s);
            if dist[b as usize].is_none() {
                dist[b as usize] = Some(d + 1);
                queue.push_back(b);
            }
        }
    }
    dist
}

pub fn wlength_table(g: &FiniteGroup, t: &WordTemplate, budget: u128) -> Result<DistanceTable> {
    let words = enumerate_w_words(g, t, budget)?;
    Ok(DistanceTable::new(g.spec(), t.name(), bfs_distances(g, &words)))
}

/// Elements of finite W-length, i.e. the verbal subgroup.
pub fn verbal_subgroup(g: &FiniteGroup, t: &WordTemplate, budget: u128) -> Result<BTreeSet<ElementId>> {
    Ok(wlength_table(g, t, budget)?.reachable().collect())
}

/// Check `d(fg, fh) = d(g, h) = d(gf, hf)` on random triples from the
/// verbal subgroup. Deterministic for a given seed.
pub fn bi_invariance_check(g: &FiniteGroup, table: &DistanceTable, trials: usize, seed: u64) -> bool {
    let members: Vec<ElementId> = table.reachable().collect();
    if members.is_empty() {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let pick = |rng: &mut ChaCha8Rng| members[rng.gen_range(0..members.len())];
        let (f, a, b) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let base = table.metric(g, a, b);
        table.metric(g, g.mul(f, a), g.mul(f, b)) == base
            && table.metric(g, g.mul(a, f), g.mul(b, f)) == base
    })
}

/// `l_G(phi(w) | t)` for the homomorphism `phi` given by `images`; a lower
/// bound for the free-group length `l_F(w | t)`.
pub fn quotient_lower_bound(
    word: &Word,
    table: &DistanceTable,
    g: &FiniteGroup,
    images: &BTreeMap<u32, ElementId>,
) -> Result<u32> {
    let e = g.eval(word, |gen| images.get(&gen).copied())?;
    table.distance(e).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "image {} lies outside the verbal subgroup of {} for {}",
            g.describe(e),
            g.spec(),
            table.template_name()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verbal::{gamma_word, WordTemplate, DEFAULT_ENUMERATION_BUDGET};

    fn squares() -> WordTemplate {
        WordTemplate::from_word("x^2", Word::generator(1).pow(2))
    }

    #[test]
    fn s3_squares_generate_a3() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let t = wlength_table(&g, &squares(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(t.histogram(), BTreeMap::from([(0, 1), (1, 2)]));
        let transposition = g.element_by_description("1 0 2").unwrap();
        assert_eq!(t.distance(transposition), None);
        assert!(bi_invariance_check(&g, &t, 200, 1));
    }

    #[test]
    fn a5_commutators() {
        let g = FiniteGroup::alternating(5).unwrap();
        let t = wlength_table(&g, &gamma_word(2).unwrap(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(t.histogram(), BTreeMap::from([(0, 1), (1, 59)]));
    }

    #[test]
    fn quotient_floor_examples() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let t = wlength_table(&g, &squares(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        let x2 = Word::generator(1).pow(2);
        let tr = g.element_by_description("1 0 2").unwrap();
        let three_cycle = g.element_by_description("1 2 0").unwrap();
        assert_eq!(quotient_lower_bound(&x2, &t, &g, &BTreeMap::from([(1, tr)])).unwrap(), 0);
        assert_eq!(
            quotient_lower_bound(&x2, &t, &g, &BTreeMap::from([(1, three_cycle)])).unwrap(),
            1
        );
        // x itself maps outside A3
        assert!(quotient_lower_bound(&Word::generator(1), &t, &g, &BTreeMap::from([(1, tr)])).is_err());
        assert!(quotient_lower_bound(&x2, &t, &g, &BTreeMap::new()).is_err());
    }

    #[test]
    fn trivial_group_is_vacuous() {
        let g = FiniteGroup::from_table("trivial", vec![vec![0]]).unwrap();
        let t = wlength_table(&g, &gamma_word(2).unwrap(), 10).unwrap();
        assert_eq!(t.histogram(), BTreeMap::from([(0, 1)]));
        assert!(bi_invariance_check(&g, &t, 10, 0));
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroup::symmetric(5).unwrap();
        let err = wlength_table(&g, &gamma_word(3).unwrap(), 1000).unwrap_err();
        assert!(matches!(err, Error::Resource { required: 1_728_000, .. }));
    }
}
