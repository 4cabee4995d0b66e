//! Redundancy removal under refinement.
//!
//! The strongest view keeps the maximal elements of the refinement order
//! (nothing in the set refines them); the baseline keeps the minimal ones
//! (the weakest versions, which every compliant system has to meet anyway).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hierarchy::{effective_items, LevelSelection};
use crate::model::{Corpus, Level, RequirementKind, Role};
use crate::partition::Aspect;
use crate::relations::{find_conflicts, Conflict, RefinementIndex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strongest {
    pub strongest: BTreeSet<String>,
    /// Removed id mapped to the smallest id in the input refining it.
    pub removed: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimizedView {
    pub scope: String,
    pub strongest: BTreeSet<String>,
    pub baseline: BTreeSet<String>,
    pub removed: BTreeMap<String, String>,
}

fn check_known(ids: &BTreeSet<String>, corpus: &Corpus) -> Result<()> {
    match ids.iter().find(|id| !corpus.requirements.contains_key(*id)) {
        Some(id) => Err(Error::UnknownId(id.clone())),
        None => Ok(()),
    }
}

pub fn remove_redundant_with(ids: &BTreeSet<String>, index: &RefinementIndex) -> Strongest {
    let mut strongest = BTreeSet::new();
    let mut removed = BTreeMap::new();
    for id in ids {
        // stronger_than iterates in id order, so the first hit is the smallest witness
        match index.stronger_than(id).find(|s| ids.contains(*s)) {
            Some(witness) => {
                removed.insert(id.clone(), witness.to_string());
            }
            None => {
                strongest.insert(id.clone());
            }
        }
    }
    Strongest { strongest, removed }
}

pub fn minimal_baseline_with(ids: &BTreeSet<String>, index: &RefinementIndex) -> BTreeSet<String> {
    ids.iter()
        .filter(|id| !index.weaker_than(id).any(|w| ids.contains(w)))
        .cloned()
        .collect()
}

pub fn remove_redundant(ids: &BTreeSet<String>, corpus: &Corpus) -> Result<Strongest> {
    check_known(ids, corpus)?;
    let index = RefinementIndex::build(&corpus.relations)?;
    Ok(remove_redundant_with(ids, &index))
}

pub fn minimal_baseline(ids: &BTreeSet<String>, corpus: &Corpus) -> Result<BTreeSet<String>> {
    check_known(ids, corpus)?;
    let index = RefinementIndex::build(&corpus.relations)?;
    Ok(minimal_baseline_with(ids, &index))
}

pub fn optimize(ids: &BTreeSet<String>, corpus: &Corpus, scope: impl Into<String>) -> Result<OptimizedView> {
    check_known(ids, corpus)?;
    let index = RefinementIndex::build(&corpus.relations)?;
    Ok(optimize_with(ids, &index, scope.into()))
}

fn optimize_with(ids: &BTreeSet<String>, index: &RefinementIndex, scope: String) -> OptimizedView {
    let Strongest { strongest, removed } = remove_redundant_with(ids, index);
    OptimizedView {
        scope,
        strongest,
        baseline: minimal_baseline_with(ids, index),
        removed,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GlobalView {
    pub level: Level,
    pub per_jurisdiction: BTreeMap<String, BTreeMap<Aspect, OptimizedView>>,
    pub global: BTreeMap<Aspect, OptimizedView>,
    /// Conflicts among all analyzed requirements; the input for ranking
    /// candidate resolutions.
    pub conflicts: Vec<Conflict>,
}

impl GlobalView {
    /// Requirements taking part in at least one conflict.
    pub fn conflicting_requirements(&self) -> BTreeSet<String> {
        self.conflicts
            .iter()
            .flat_map(|c| [c.pair.first().to_string(), c.pair.second().to_string()])
            .collect()
    }
}

pub fn global_view(corpus: &Corpus, selection: &LevelSelection) -> Result<GlobalView> {
    let index = RefinementIndex::build(&corpus.relations)?;
    let mut per_jurisdiction = BTreeMap::new();
    let mut union: BTreeMap<RequirementKind, BTreeSet<String>> = BTreeMap::new();
    for node in &selection.frontier {
        let held = effective_items(corpus, &index, node, Role::Requirement)?;
        let mut views = BTreeMap::new();
        for kind in RequirementKind::ALL {
            let ids: BTreeSet<String> = held
                .iter()
                .filter(|id| corpus.requirements[*id].kind == kind)
                .cloned()
                .collect();
            union.entry(kind).or_default().extend(ids.iter().cloned());
            views.insert(
                Aspect::from(kind),
                optimize_with(&ids, &index, format!("{}:{node}", kind.as_str())),
            );
        }
        per_jurisdiction.insert(node.clone(), views);
    }
    let mut global = BTreeMap::new();
    let mut all = BTreeSet::new();
    for kind in RequirementKind::ALL {
        let ids = union.remove(&kind).unwrap_or_default();
        all.extend(ids.iter().cloned());
        global.insert(
            Aspect::from(kind),
            optimize_with(&ids, &index, format!("{}:global", kind.as_str())),
        );
    }
    Ok(GlobalView {
        level: selection.level,
        per_jurisdiction,
        global,
        conflicts: find_conflicts(corpus, &all)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Jurisdiction, Requirement, UnorderedPair};

    fn corpus(reqs: &[&str], refines: &[(&str, &str)]) -> Corpus {
        let mut c = Corpus::default();
        c.jurisdictions.insert(
            "s".into(),
            Jurisdiction {
                id: "s".into(),
                name: "S".into(),
                level: Level::National,
                parent: None,
            },
        );
        for id in reqs {
            c.requirements.insert(
                id.to_string(),
                Requirement {
                    id: id.to_string(),
                    kind: RequirementKind::CulturalBased,
                    jurisdiction: "s".into(),
                    concept_key: id.to_string(),
                    content_hash: id.to_string(),
                    derived_from: BTreeSet::new(),
                    text: String::new(),
                },
            );
        }
        for (a, b) in refines {
            c.relations.refines.insert((a.to_string(), b.to_string()));
        }
        c
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn weaker_version_is_removed_as_redundant() {
        let c = corpus(&["r1", "r2"], &[("r1", "r2")]);
        let got = remove_redundant(&set(&["r1", "r2"]), &c).unwrap();
        assert_eq!(got.strongest, set(&["r1"]));
        assert_eq!(got.removed, BTreeMap::from([("r2".to_string(), "r1".to_string())]));
        assert_eq!(minimal_baseline(&set(&["r1", "r2"]), &c).unwrap(), set(&["r2"]));
    }

    #[test]
    fn antichain_is_kept_whole() {
        let c = corpus(&["a", "b", "c"], &[]);
        let ids = set(&["a", "b", "c"]);
        let got = remove_redundant(&ids, &c).unwrap();
        assert_eq!(got.strongest, ids);
        assert!(got.removed.is_empty());
        assert_eq!(minimal_baseline(&ids, &c).unwrap(), ids);
    }

    #[test]
    fn smallest_witness_is_recorded() {
        let c = corpus(&["a", "b", "z"], &[("z", "b"), ("a", "b")]);
        let got = remove_redundant(&set(&["a", "b", "z"]), &c).unwrap();
        assert_eq!(got.removed["b"], "a");
    }

    #[test]
    fn witness_through_outside_chain() {
        let c = corpus(&["a", "m", "b"], &[("a", "m"), ("m", "b")]);
        let got = remove_redundant(&set(&["a", "b"]), &c).unwrap();
        assert_eq!(got.strongest, set(&["a"]));
        assert_eq!(got.removed["b"], "a");
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let c = corpus(&["a"], &[]);
        assert!(matches!(
            remove_redundant(&set(&["zz"]), &c),
            Err(Error::UnknownId(_))
        ));
    }

    #[test]
    fn global_view_without_relations_keeps_everything() {
        let c = corpus(&["a", "b"], &[]);
        let sel = crate::hierarchy::select_level(&c, Level::National).unwrap();
        let v = global_view(&c, &sel).unwrap();
        let cult = &v.global[&Aspect::Cultural];
        assert_eq!(cult.strongest, set(&["a", "b"]));
        assert_eq!(cult.baseline, set(&["a", "b"]));
        assert!(v.conflicts.is_empty());
        // single jurisdiction: global equals the jurisdiction's view
        assert_eq!(v.per_jurisdiction["s"][&Aspect::Cultural].strongest, cult.strongest);
    }

    #[test]
    fn global_view_lists_conflicts() {
        let mut c = corpus(&["a", "b", "a2"], &[("a2", "a")]);
        c.relations.contradicts.insert(UnorderedPair::new("a", "b"));
        let sel = crate::hierarchy::select_level(&c, Level::National).unwrap();
        let v = global_view(&c, &sel).unwrap();
        assert_eq!(v.conflicts.len(), 2);
        assert_eq!(v.conflicting_requirements(), set(&["a", "a2", "b"]));
        assert_eq!(v.global[&Aspect::Cultural].strongest, set(&["a2", "b"]));
    }
}
