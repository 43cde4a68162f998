//! Seeded random corpora of small groupoids.

use num_traits::ToPrimitive;
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bisection::{full_group_order, DEFAULT_FULL_GROUP_CAP};
use crate::error::{Error, Result};
use crate::expr::GroupoidExpr;
use crate::groupoid::FiniteGroupoid;

/// Relative frequencies of the constructor families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixWeights {
    /// Cyclic groups of order at most 8 and symmetric groups of degree at most 3.
    pub group: u32,
    /// Pair groupoids on at most 4 points.
    pub pair: u32,
    /// Products of a pair groupoid with a group, in either order.
    pub product: u32,
    /// Disjoint unions of 2 or 3 pieces from the other families.
    pub union: u32,
}

impl Default for MixWeights {
    fn default() -> Self {
        MixWeights { group: 2, pair: 2, product: 2, union: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    /// Largest `|G|`.
    pub max_arrows: usize,
    /// Largest `|F(G)|`.
    pub max_full_group: usize,
    pub weights: MixWeights,
    /// Start the corpus with one instance of each witness case.
    pub include_case_instances: bool,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 1,
            count: 200,
            max_arrows: 24,
            max_full_group: DEFAULT_FULL_GROUP_CAP,
            weights: MixWeights::default(),
            include_case_instances: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub index: usize,
    pub expr: GroupoidExpr,
    pub groupoid: FiniteGroupoid,
}

const MAX_DRAWS: usize = 10_000;

/// One groupoid for each shape of kernel witness: two isotropy loops,
/// joined arrows, separate arrows, a loop beside an arrow, a loop with a
/// tail, and parallel arrows.
pub fn case_instances() -> Vec<GroupoidExpr> {
    use GroupoidExpr::{Cyclic, Pair};
    vec![
        GroupoidExpr::union(Cyclic(2), Cyclic(2)),
        Pair(3),
        GroupoidExpr::union(Pair(2), Pair(2)),
        GroupoidExpr::union(Cyclic(2), Pair(2)),
        GroupoidExpr::product(Pair(2), Cyclic(2)),
        GroupoidExpr::product(Cyclic(2), Pair(2)),
    ]
}

fn draw_group<R: Rng>(rng: &mut R) -> GroupoidExpr {
    let choice = rng.gen_range(0..11);
    if choice < 8 {
        GroupoidExpr::Cyclic(choice + 1)
    } else {
        GroupoidExpr::Symmetric(choice - 7)
    }
}

fn draw_pair<R: Rng>(rng: &mut R) -> GroupoidExpr {
    GroupoidExpr::Pair(rng.gen_range(1..=4))
}

fn draw_product<R: Rng>(rng: &mut R) -> GroupoidExpr {
    let pair = GroupoidExpr::Pair(rng.gen_range(2..=4));
    let group = draw_group(rng);
    if rng.gen_bool(0.5) {
        GroupoidExpr::product(pair, group)
    } else {
        GroupoidExpr::product(group, pair)
    }
}

fn draw<R: Rng>(rng: &mut R, weights: &MixWeights, index: &WeightedIndex<u32>) -> GroupoidExpr {
    match index.sample(rng) {
        0 => draw_group(rng),
        1 => draw_pair(rng),
        2 => draw_product(rng),
        _ => {
            let pieces = rng.gen_range(2..=3);
            let piece_weights = [weights.group, weights.pair, weights.product];
            let piece_index = WeightedIndex::new(piece_weights).unwrap_or_else(|_| WeightedIndex::new([1, 1, 1]).expect("valid"));
            let mut parts: Vec<GroupoidExpr> = (0..pieces).map(|_| draw(rng, weights, &piece_index)).collect();
            parts.shuffle(rng);
            let last = parts.pop().expect("nonempty");
            parts.into_iter().rev().fold(last, |acc, p| GroupoidExpr::union(p, acc))
        }
    }
}

fn fits(g: &FiniteGroupoid, spec: &CorpusSpec) -> bool {
    g.len() <= spec.max_arrows && full_group_order(g).to_usize().is_some_and(|n| n <= spec.max_full_group)
}

/// The corpus for `spec`; identical for identical specs.
pub fn generate(spec: &CorpusSpec) -> Result<Vec<CorpusEntry>> {
    let w = &spec.weights;
    let index = WeightedIndex::new([w.group, w.pair, w.product, w.union])
        .map_err(|_| Error::Precondition("corpus weights must not all be zero".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    if spec.include_case_instances {
        for expr in case_instances() {
            let groupoid = expr.build()?;
            if out.len() < spec.count && fits(&groupoid, spec) {
                out.push(CorpusEntry { index: out.len(), expr, groupoid });
            }
        }
    }
    while out.len() < spec.count {
        let mut draws = 0;
        let (expr, groupoid) = loop {
            draws += 1;
            if draws > MAX_DRAWS {
                return Err(Error::Precondition(format!(
                    "no groupoid within {} arrows and |F(G)| <= {} after {MAX_DRAWS} draws",
                    spec.max_arrows, spec.max_full_group
                )));
            }
            let expr = draw(&mut rng, w, &index);
            let g = expr.build()?;
            if fits(&g, spec) {
                break (expr, g);
            }
        };
        out.push(CorpusEntry { index: out.len(), expr, groupoid });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_corpus() {
        let spec = CorpusSpec { count: 40, ..CorpusSpec::default() };
        let a: Vec<String> = generate(&spec).unwrap().iter().map(|e| e.expr.to_string()).collect();
        let b: Vec<String> = generate(&spec).unwrap().iter().map(|e| e.expr.to_string()).collect();
        assert_eq!(a, b);
        let other: Vec<String> = generate(&CorpusSpec { seed: 2, ..spec }).unwrap().iter().map(|e| e.expr.to_string()).collect();
        assert_ne!(a, other);
    }

    #[test]
    fn caps_are_respected() {
        let spec = CorpusSpec { count: 100, max_arrows: 16, max_full_group: 500, ..CorpusSpec::default() };
        for e in generate(&spec).unwrap() {
            assert!(e.groupoid.len() <= 16);
            assert!(full_group_order(&e.groupoid).to_usize().unwrap() <= 500);
            assert_eq!(e.groupoid.validate(), crate::groupoid::Validation::Pass);
        }
    }

    #[test]
    fn case_instances_come_first() {
        let corpus = generate(&CorpusSpec { count: 10, ..CorpusSpec::default() }).unwrap();
        let first: Vec<GroupoidExpr> = corpus.iter().take(6).map(|e| e.expr.clone()).collect();
        assert_eq!(first, case_instances());
        assert!(corpus.iter().enumerate().all(|(i, e)| e.index == i));
    }

    #[test]
    fn single_family_corpora() {
        let groups = CorpusSpec {
            weights: MixWeights { group: 1, pair: 0, product: 0, union: 0 },
            include_case_instances: false,
            count: 30,
            ..CorpusSpec::default()
        };
        assert!(generate(&groups).unwrap().iter().all(|e| e.groupoid.is_group()));
        let zero = CorpusSpec { weights: MixWeights { group: 0, pair: 0, product: 0, union: 0 }, ..CorpusSpec::default() };
        assert!(generate(&zero).is_err());
    }
}
