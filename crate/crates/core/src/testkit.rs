//! Random generators for corpora, relation sets and decision matrices.
//!
//! Used by property tests and the acceptance suite. Every generated corpus
//! passes [`validate_corpus`](crate::validate::validate_corpus).

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus_io::{content_hash, ChangeOp, Payload};
use crate::hierarchy::LevelSelection;
use crate::model::*;
use crate::partition::PartitionSet;
use crate::topsis::{DecisionMatrix, Direction};

#[derive(Debug, Clone)]
pub struct CorpusShape {
    pub max_jurisdictions: usize,
    pub max_concepts: usize,
    /// Distinct texts per concept; fewer variants means more general items.
    pub variants: usize,
    /// Probability that a jurisdiction holds an item for a given concept.
    pub presence: f64,
    /// Add states and organisations below the national nodes.
    pub nested: bool,
    pub relation_density: f64,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape {
            max_jurisdictions: 5,
            max_concepts: 30,
            variants: 2,
            presence: 0.8,
            nested: false,
            relation_density: 0.02,
        }
    }
}

fn jurisdiction(id: String, level: Level, parent: Option<String>) -> Jurisdiction {
    Jurisdiction {
        name: id.to_uppercase(),
        id,
        level,
        parent,
    }
}

pub fn variant_text(concept: &str, variant: usize) -> String {
    format!("{concept} rule variant {variant}")
}

fn random_jurisdictions<R: Rng>(rng: &mut R, shape: &CorpusShape) -> Vec<Jurisdiction> {
    let n = rng.gen_range(1..=shape.max_jurisdictions.max(1));
    let mut out: Vec<Jurisdiction> = (0..n)
        .map(|i| jurisdiction(format!("n{i}"), Level::National, None))
        .collect();
    if shape.nested {
        for i in 0..n {
            for k in 0..rng.gen_range(0..=2) {
                let state = format!("n{i}s{k}");
                out.push(jurisdiction(state.clone(), Level::State, Some(format!("n{i}"))));
                if rng.gen_bool(0.5) {
                    out.push(jurisdiction(format!("{state}o0"), Level::Organisational, Some(state)));
                }
            }
            if rng.gen_bool(0.3) {
                out.push(jurisdiction(format!("n{i}o9"), Level::Organisational, Some(format!("n{i}"))));
            }
        }
    }
    out
}

/// Random relation pairs among items of one class; refinement follows a
/// random total order so no cycle can arise.
fn random_relations_among<R: Rng>(rng: &mut R, ids: &[String], density: f64, rel: &mut RelationSet) {
    let mut order = ids.to_vec();
    order.shuffle(rng);
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.gen_bool(density) {
                rel.refines.insert((order[i].clone(), order[j].clone()));
            }
            if rng.gen_bool(density / 2.0) {
                rel.contradicts.insert(UnorderedPair::new(order[i].clone(), order[j].clone()));
            }
        }
    }
}

pub fn random_corpus<R: Rng>(rng: &mut R, shape: &CorpusShape) -> Corpus {
    let mut c = Corpus::default();
    for j in random_jurisdictions(rng, shape) {
        c.jurisdictions.insert(j.id.clone(), j);
    }
    let n_concepts = rng.gen_range(0..=shape.max_concepts);
    let concepts: Vec<String> = (0..n_concepts).map(|i| format!("k{i:02}")).collect();
    let jur_ids: Vec<String> = c.jurisdictions.keys().cloned().collect();
    let variants = shape.variants.max(1);

    for jur in &jur_ids {
        for kind in SourceKind::ALL {
            for concept in &concepts {
                if !rng.gen_bool(shape.presence) {
                    continue;
                }
                let text = variant_text(concept, rng.gen_range(0..variants));
                let id = format!("s-{jur}-{}-{concept}", kind.as_str());
                c.sources.insert(
                    id.clone(),
                    SourceItem {
                        id,
                        kind,
                        jurisdiction: jur.clone(),
                        concept_key: concept.clone(),
                        content_hash: content_hash(&text),
                        text,
                        is_static: kind == SourceKind::Cultural,
                    },
                );
            }
        }
    }

    for jur in &jur_ids {
        for kind in RequirementKind::ALL {
            for concept in &concepts {
                if !rng.gen_bool(shape.presence) {
                    continue;
                }
                let text = variant_text(concept, rng.gen_range(0..variants));
                let id = format!("r-{jur}-{}-{concept}", kind.as_str());
                let mut derived_from = BTreeSet::new();
                if let Some(sk) = kind.source_kind() {
                    let own = format!("s-{jur}-{}-{concept}", sk.as_str());
                    if c.sources.contains_key(&own) && rng.gen_bool(0.7) {
                        derived_from.insert(own);
                    }
                }
                c.requirements.insert(
                    id.clone(),
                    Requirement {
                        id,
                        kind,
                        jurisdiction: jur.clone(),
                        concept_key: concept.clone(),
                        content_hash: content_hash(&text),
                        derived_from,
                        text,
                    },
                );
            }
        }
    }

    let mut relations = RelationSet::default();
    for kind in SourceKind::ALL {
        let ids: Vec<String> = c.sources_of_kind(kind).map(|s| s.id.clone()).collect();
        random_relations_among(rng, &ids, shape.relation_density, &mut relations);
    }
    for kind in RequirementKind::ALL {
        let ids: Vec<String> = c.requirements_of_kind(kind).map(|r| r.id.clone()).collect();
        random_relations_among(rng, &ids, shape.relation_density, &mut relations);
    }
    c.relations = relations;

    let req_ids: Vec<String> = c.requirements.keys().cloned().collect();
    for i in 0..rng.gen_range(0..=3) {
        let k = rng.gen_range(0..=req_ids.len().min(3));
        let implements = req_ids
            .choose_multiple(rng, k)
            .cloned()
            .collect();
        let scope = if rng.gen_bool(0.5) {
            ComponentScope::General
        } else {
            ComponentScope::Specific(jur_ids.choose(rng).cloned().unwrap_or_default())
        };
        let id = format!("c{i}");
        c.components.insert(id.clone(), Component { id, implements, scope });
    }
    c
}

/// Ids `e00..` with a random acyclic refinement relation.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> (BTreeSet<String>, RelationSet) {
    let ids: Vec<String> = (0..n).map(|i| format!("e{i:02}")).collect();
    let mut order = ids.clone();
    order.shuffle(rng);
    let mut rel = RelationSet::default();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.refines.insert((order[i].clone(), order[j].clone()));
            }
        }
    }
    (ids.into_iter().collect(), rel)
}

/// Acyclic refinement plus random declared contradictions.
pub fn random_relation_set<R: Rng>(rng: &mut R, n: usize) -> (BTreeSet<String>, RelationSet) {
    let density = rng.gen_range(0.05..0.3);
    let (ids, mut rel) = random_poset(rng, n, density);
    let v: Vec<&String> = ids.iter().collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.05) {
                rel.contradicts.insert(UnorderedPair::new(v[i].clone(), v[j].clone()));
            }
        }
    }
    (ids, rel)
}

/// A single-jurisdiction corpus holding the given ids as functional
/// requirements under `rel`.
pub fn poset_corpus(ids: &BTreeSet<String>, rel: &RelationSet) -> Corpus {
    let mut c = Corpus::default();
    c.jurisdictions
        .insert("n0".into(), jurisdiction("n0".into(), Level::National, None));
    for id in ids {
        c.requirements.insert(
            id.clone(),
            Requirement {
                id: id.clone(),
                kind: RequirementKind::Functional,
                jurisdiction: "n0".into(),
                concept_key: id.clone(),
                content_hash: content_hash(id),
                derived_from: BTreeSet::new(),
                text: id.clone(),
            },
        );
    }
    c.relations = rel.clone();
    c
}

pub fn random_matrix<R: Rng>(rng: &mut R, alternatives: usize, criteria: usize) -> DecisionMatrix {
    let alts = (0..alternatives).map(|i| format!("a{i}")).collect();
    let crits = (0..criteria)
        .map(|j| {
            let dir = if rng.gen_bool(0.5) {
                Direction::Benefit
            } else {
                Direction::Cost
            };
            (format!("c{j}"), rng.gen_range(0.1..1.0), dir)
        })
        .collect();
    let values = (0..alternatives)
        .map(|_| (0..criteria).map(|_| rng.gen_range(0.5..100.0)).collect())
        .collect();
    DecisionMatrix::new(alts, crits, values).expect("generated matrix is valid")
}

/// A modify op on an analyzed requirement. New text is drawn from the
/// concept's variant pool so ops regularly converge or diverge. General
/// targets get a random non-empty adopter subset of the frontier.
pub fn random_modify_op<R: Rng>(
    rng: &mut R,
    corpus: &Corpus,
    selection: &LevelSelection,
    parts: &PartitionSet,
    variants: usize,
) -> Option<ChangeOp> {
    let mut analyzed: BTreeMap<String, bool> = BTreeMap::new();
    for p in parts.requirement_partitions() {
        for id in p.general_ids() {
            analyzed.insert(id, true);
        }
        for id in p.specific_ids() {
            analyzed.entry(id).or_insert(false);
        }
    }
    let ids: Vec<(&String, &bool)> = analyzed.iter().collect();
    let (target, general) = *ids.choose(rng)?;
    let concept = &corpus.requirements[target].concept_key;
    let text = variant_text(concept, rng.gen_range(0..variants.max(1) + 1));
    let op = ChangeOp::modify(target.clone(), Payload::text(text));
    if !general {
        return Some(op);
    }
    let frontier: Vec<&String> = selection.frontier.iter().collect();
    let k = rng.gen_range(1..=frontier.len());
    Some(op.adopted_by(frontier.choose_multiple(rng, k).map(|s| s.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate_corpus;
    use rand::SeedableRng;

    #[test]
    fn generated_corpora_are_valid() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for nested in [false, true] {
            let shape = CorpusShape {
                nested,
                ..CorpusShape::default()
            };
            for _ in 0..50 {
                let c = random_corpus(&mut rng, &shape);
                validate_corpus(&c).unwrap();
            }
        }
    }
}
