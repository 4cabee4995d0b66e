mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reqlattice::hierarchy::select_level;
use reqlattice::model::{Level, RequirementKind, Role, SourceKind};
use reqlattice::optimizer::{minimal_baseline_with, remove_redundant_with};
use reqlattice::partition::PartitionSet;
use reqlattice::relations::{derive_contradictions, refinement_closure, RefinementIndex};
use reqlattice::testkit::{random_corpus, random_poset, random_relation_set, CorpusShape};

use common::oracles;

#[test]
fn closure_matches_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let (ids, rel) = random_relation_set(&mut rng, 12);
        // restrict to a random half so chains through outside ids matter
        let scope: BTreeSet<String> = ids.iter().filter(|_| rand::Rng::gen_bool(&mut rng, 0.6)).cloned().collect();
        assert_eq!(
            refinement_closure(&rel, &scope).unwrap(),
            oracles::closure_by_paths(&rel, &scope)
        );
    }
}

#[test]
fn derived_contradictions_match_fixpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let (_, rel) = random_relation_set(&mut rng, 15);
        assert_eq!(derive_contradictions(&rel).unwrap(), oracles::contradictions_fixpoint(&rel));
    }
}

#[test]
fn optimizer_matches_pairwise_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 0..60 {
        let (ids, rel) = random_poset(&mut rng, n % 15 + 1, 0.25);
        let index = RefinementIndex::build(&rel).unwrap();
        let star = remove_redundant_with(&ids, &index);
        assert_eq!(star.strongest, oracles::maximal_by_pairs(&rel, &ids));
        assert_eq!(minimal_baseline_with(&ids, &index), oracles::minimal_by_pairs(&rel, &ids));
        for (gone, witness) in &star.removed {
            assert!(oracles::reachable(&rel, witness).contains(gone));
            let smaller = ids
                .iter()
                .filter(|y| *y < witness && oracles::reachable(&rel, y).contains(gone))
                .count();
            assert_eq!(smaller, 0, "witness for {gone} is not the smallest");
        }
    }
}

fn check_partitions(shape: &CorpusShape, level: Level, runs: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..runs {
        let c = random_corpus(&mut rng, shape);
        let Ok(sel) = select_level(&c, level) else {
            continue;
        };
        let parts = PartitionSet::compute(&c, &sel).unwrap();
        for kind in SourceKind::ALL {
            let p = parts.sources(kind);
            let o = oracles::partition_oracle(&c, level, Role::Source, |id| c.sources[id].kind == kind);
            assert_eq!(p.general_ids(), o.general_ids);
            assert_eq!(p.general.keys().cloned().collect::<BTreeSet<_>>(), o.general_concepts);
            assert_eq!(p.specific, o.specific);
        }
        for kind in RequirementKind::ALL {
            let p = parts.requirements(kind);
            let o = oracles::partition_oracle(&c, level, Role::Requirement, |id| {
                c.requirements[id].kind == kind
            });
            assert_eq!(p.general_ids(), o.general_ids);
            assert_eq!(p.specific, o.specific);
        }
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn national_partitions_match_per_concept_oracle() {
    check_partitions(&CorpusShape::default(), Level::National, 40, 4);
}

#[test]
fn nested_partitions_match_per_concept_oracle() {
    let shape = CorpusShape {
        nested: true,
        max_concepts: 10,
        relation_density: 0.1,
        ..CorpusShape::default()
    };
    for level in [Level::National, Level::State, Level::Organisational] {
        check_partitions(&shape, level, 15, 5);
    }
}
