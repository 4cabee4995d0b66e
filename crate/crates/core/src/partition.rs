//! General/specific decomposition of sources and requirements.
//!
//! A concept key is *general* when every analyzed jurisdiction holds at least
//! one item of that kind and concept, and all of those items are semantically
//! identical. Everything else is *specific* to the jurisdiction holding it.
//! Membership is decided by generality alone; whether specific items
//! actually contradict another jurisdiction's items is reported separately
//! by [`check_specific_contradiction_condition`].

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::corpus_io::corpus_fingerprint;
use crate::error::{Error, Result};
use crate::finding::{Finding, FindingCode, Severity};
use crate::hierarchy::{effective_items, LevelSelection};
use crate::model::{ComponentScope, Corpus, ItemRef, Level, RequirementKind, Role, SourceKind};
use crate::relations::{derive_contradictions_with_origin, RefinementIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Aspect {
    Legal,
    Cultural,
    Functional,
}

impl Aspect {
    pub fn as_str(self) -> &'static str {
        match self {
            Aspect::Legal => "legal",
            Aspect::Cultural => "cultural",
            Aspect::Functional => "functional",
        }
    }
}

impl From<SourceKind> for Aspect {
    fn from(k: SourceKind) -> Self {
        match k {
            SourceKind::Legal => Aspect::Legal,
            SourceKind::Cultural => Aspect::Cultural,
        }
    }
}

impl From<RequirementKind> for Aspect {
    fn from(k: RequirementKind) -> Self {
        match k {
            RequirementKind::LegalBased => Aspect::Legal,
            RequirementKind::CulturalBased => Aspect::Cultural,
            RequirementKind::Functional => Aspect::Functional,
        }
    }
}

/// One general/specific split for a role and aspect at one level.
///
/// General items stay grouped by concept key, each jurisdiction keeping its
/// own ids. `specific` has an entry (possibly empty) for every analyzed
/// jurisdiction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Partition {
    pub role: Role,
    pub aspect: Aspect,
    pub level: Level,
    pub corpus_fingerprint: String,
    pub general: BTreeMap<String, BTreeMap<String, BTreeSet<String>>>,
    pub specific: BTreeMap<String, BTreeSet<String>>,
}

impl Partition {
    pub fn general_ids(&self) -> BTreeSet<String> {
        self.general
            .values()
            .flat_map(|by_jur| by_jur.values().flatten().cloned())
            .collect()
    }

    pub fn specific_ids(&self) -> BTreeSet<String> {
        self.specific.values().flatten().cloned().collect()
    }

    pub fn all_ids(&self) -> BTreeSet<String> {
        let mut all = self.general_ids();
        all.extend(self.specific_ids());
        all
    }

    pub fn is_general_concept(&self, concept: &str) -> bool {
        self.general.contains_key(concept)
    }

    pub fn is_general(&self, id: &str) -> bool {
        self.general
            .values()
            .any(|by_jur| by_jur.values().any(|ids| ids.contains(id)))
    }

    /// Analyzed jurisdictions whose specific set holds `id`.
    pub fn specific_holders(&self, id: &str) -> BTreeSet<String> {
        self.specific
            .iter()
            .filter(|(_, ids)| ids.contains(id))
            .map(|(j, _)| j.clone())
            .collect()
    }

    pub fn jurisdictions(&self) -> impl Iterator<Item = &str> {
        self.specific.keys().map(String::as_str)
    }

    /// Concept-level view of the general set, independent of ids and
    /// jurisdiction names: `(conceptKey, contentHash)` pairs.
    pub fn general_signature(&self, corpus: &Corpus) -> BTreeSet<(String, String)> {
        self.general_ids()
            .iter()
            .filter_map(|id| corpus.item(id))
            .map(|i| (i.concept_key().to_string(), i.content_hash().to_string()))
            .collect()
    }
}

/// Items of the given class held by each frontier jurisdiction.
fn members(
    corpus: &Corpus,
    index: &RefinementIndex,
    selection: &LevelSelection,
    role: Role,
    keep: impl Fn(ItemRef<'_>) -> bool,
) -> Result<BTreeMap<String, BTreeSet<String>>> {
    let mut out = BTreeMap::new();
    for node in &selection.frontier {
        let ids = effective_items(corpus, index, node, role)?
            .into_iter()
            .filter(|id| corpus.item(id).is_some_and(&keep))
            .collect();
        out.insert(node.clone(), ids);
    }
    Ok(out)
}

type IdsBy = BTreeMap<String, BTreeSet<String>>;

fn split(corpus: &Corpus, held: IdsBy) -> (BTreeMap<String, IdsBy>, IdsBy) {
    let n = held.len();
    // concept -> jurisdiction -> ids, and concept -> distinct hashes
    let mut by_concept: BTreeMap<&str, BTreeMap<&str, BTreeSet<String>>> = BTreeMap::new();
    let mut hashes: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (jur, ids) in &held {
        for id in ids {
            let item = corpus.item(id).expect("member ids come from the corpus");
            by_concept
                .entry(item.concept_key())
                .or_default()
                .entry(jur.as_str())
                .or_default()
                .insert(id.clone());
            hashes
                .entry(item.concept_key())
                .or_default()
                .insert(item.content_hash());
        }
    }
    let general_concepts: BTreeSet<&str> = by_concept
        .iter()
        .filter(|(concept, by_jur)| by_jur.len() == n && hashes[*concept].len() == 1)
        .map(|(concept, _)| *concept)
        .collect();

    let mut general = BTreeMap::new();
    for concept in &general_concepts {
        let groups = by_concept[concept]
            .iter()
            .map(|(j, ids)| (j.to_string(), ids.clone()))
            .collect();
        general.insert(concept.to_string(), groups);
    }
    let specific = held
        .into_iter()
        .map(|(jur, ids)| {
            let ids = ids
                .into_iter()
                .filter(|id| {
                    let concept = corpus.item(id).map(|i| i.concept_key()).unwrap_or_default();
                    !general_concepts.contains(concept)
                })
                .collect();
            (jur, ids)
        })
        .collect();
    (general, specific)
}

/// Shared inputs of every partition of one corpus.
struct Context<'a> {
    corpus: &'a Corpus,
    selection: &'a LevelSelection,
    index: RefinementIndex,
    fingerprint: String,
}

impl<'a> Context<'a> {
    fn new(corpus: &'a Corpus, selection: &'a LevelSelection) -> Result<Self> {
        Ok(Context {
            corpus,
            selection,
            index: RefinementIndex::build(&corpus.relations)?,
            fingerprint: corpus_fingerprint(corpus),
        })
    }

    fn build(&self, role: Role, aspect: Aspect, keep: impl Fn(ItemRef<'_>) -> bool) -> Result<Partition> {
        let held = members(self.corpus, &self.index, self.selection, role, keep)?;
        let (general, specific) = split(self.corpus, held);
        Ok(Partition {
            role,
            aspect,
            level: self.selection.level,
            corpus_fingerprint: self.fingerprint.clone(),
            general,
            specific,
        })
    }

    fn sources(&self, kind: SourceKind) -> Result<Partition> {
        self.build(Role::Source, kind.into(), |i| {
            matches!(i, ItemRef::Source(s) if s.kind == kind)
        })
    }

    fn requirements(&self, kind: RequirementKind) -> Result<Partition> {
        self.build(Role::Requirement, kind.into(), |i| {
            matches!(i, ItemRef::Requirement(r) if r.kind == kind)
        })
    }
}

pub fn partition_sources(
    corpus: &Corpus,
    selection: &LevelSelection,
    kind: SourceKind,
) -> Result<Partition> {
    Context::new(corpus, selection)?.sources(kind)
}

pub fn partition_requirements(
    corpus: &Corpus,
    selection: &LevelSelection,
    kind: RequirementKind,
) -> Result<Partition> {
    Context::new(corpus, selection)?.requirements(kind)
}

/// Every partition of a corpus at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionSet {
    pub legal_sources: Partition,
    pub cultural_sources: Partition,
    pub legal_requirements: Partition,
    pub cultural_requirements: Partition,
    pub functional_requirements: Partition,
}

impl PartitionSet {
    pub fn compute(corpus: &Corpus, selection: &LevelSelection) -> Result<Self> {
        let cx = Context::new(corpus, selection)?;
        Ok(PartitionSet {
            legal_sources: cx.sources(SourceKind::Legal)?,
            cultural_sources: cx.sources(SourceKind::Cultural)?,
            legal_requirements: cx.requirements(RequirementKind::LegalBased)?,
            cultural_requirements: cx.requirements(RequirementKind::CulturalBased)?,
            functional_requirements: cx.requirements(RequirementKind::Functional)?,
        })
    }

    pub fn sources(&self, kind: SourceKind) -> &Partition {
        match kind {
            SourceKind::Legal => &self.legal_sources,
            SourceKind::Cultural => &self.cultural_sources,
        }
    }

    pub fn requirements(&self, kind: RequirementKind) -> &Partition {
        match kind {
            RequirementKind::LegalBased => &self.legal_requirements,
            RequirementKind::CulturalBased => &self.cultural_requirements,
            RequirementKind::Functional => &self.functional_requirements,
        }
    }

    pub fn requirement_partitions(&self) -> [&Partition; 3] {
        [
            &self.legal_requirements,
            &self.cultural_requirements,
            &self.functional_requirements,
        ]
    }
}

fn ensure_same_corpus(corpus: &Corpus, parts: &[&Partition]) -> Result<()> {
    let expected = corpus_fingerprint(corpus);
    for p in parts {
        if p.corpus_fingerprint != expected {
            return Err(Error::PartitionMismatch {
                expected,
                found: p.corpus_fingerprint.clone(),
            });
        }
    }
    Ok(())
}

/// Checks the elaboration discipline:
/// a general requirement is derived only from general sources; a specific
/// requirement of jurisdiction *i* is derived from sources of *i* (general or
/// specific) and from at least one source specific to *i*.
pub fn check_elaboration(
    corpus: &Corpus,
    source_parts: (&Partition, &Partition),
    req_parts: &[&Partition],
) -> Result<Vec<Finding>> {
    let mut all: Vec<&Partition> = vec![source_parts.0, source_parts.1];
    all.extend(req_parts.iter().copied());
    ensure_same_corpus(corpus, &all)?;

    let mut out = Vec::new();
    for rp in req_parts {
        if rp.role != Role::Requirement || rp.aspect == Aspect::Functional {
            continue;
        }
        let Some(sp) = [source_parts.0, source_parts.1]
            .into_iter()
            .find(|p| p.role == Role::Source && p.aspect == rp.aspect)
        else {
            continue;
        };
        let general_sources = sp.general_ids();

        for id in rp.general_ids() {
            let req = &corpus.requirements[&id];
            for s in &req.derived_from {
                if !general_sources.contains(s) {
                    out.push(Finding::new(
                        FindingCode::GeneralReqSpecificSource,
                        Severity::Error,
                        &id,
                        None,
                        format!("general requirement `{id}` is derived from non-general source `{s}`"),
                    ));
                }
            }
        }

        for (jur, ids) in &rp.specific {
            let own_specific = sp.specific.get(jur).cloned().unwrap_or_default();
            for id in ids {
                let req = &corpus.requirements[id];
                for s in &req.derived_from {
                    if !general_sources.contains(s) && !own_specific.contains(s) {
                        out.push(Finding::new(
                            FindingCode::SpecificReqForeignSource,
                            Severity::Error,
                            id,
                            Some(jur),
                            format!("requirement `{id}` in `{jur}` is derived from `{s}`, which `{jur}` does not hold"),
                        ));
                    }
                }
                if !req.derived_from.iter().any(|s| own_specific.contains(s)) {
                    out.push(Finding::new(
                        FindingCode::SpecificReqNoSpecificSource,
                        Severity::Warning,
                        id,
                        Some(jur),
                        format!("specific requirement `{id}` in `{jur}` is not derived from any source specific to `{jur}`"),
                    ));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Warns for each specific item that contradicts no specific item of another
/// jurisdiction. Contradictions derived through refinement count.
pub fn check_specific_contradiction_condition(
    corpus: &Corpus,
    part: &Partition,
) -> Result<Vec<Finding>> {
    let index = RefinementIndex::build(&corpus.relations)?;
    let contr = derive_contradictions_with_origin(&corpus.relations, &index);
    let mut partners: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for pair in contr.keys() {
        partners.entry(pair.first()).or_default().insert(pair.second());
        partners.entry(pair.second()).or_default().insert(pair.first());
    }

    let mut out = Vec::new();
    for (jur, ids) in &part.specific {
        for x in ids {
            let satisfied = partners.get(x.as_str()).is_some_and(|ys| {
                part.specific
                    .iter()
                    .filter(|(other, _)| *other != jur)
                    .any(|(_, other_ids)| ys.iter().any(|y| other_ids.contains(*y)))
            });
            if !satisfied {
                out.push(Finding::new(
                    FindingCode::NoCrossContradiction,
                    Severity::Warning,
                    x,
                    Some(jur),
                    format!(
                        "specific {} item `{x}` of `{jur}` contradicts no specific item of another jurisdiction",
                        part.aspect.as_str()
                    ),
                ));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ScenarioOption {
    /// Nothing is shared by every jurisdiction.
    Disjoint,
    /// Every item is shared; no specific sets.
    IdenticalGeneral,
    /// Some items shared, some specific.
    PartialOverlap,
}

impl ScenarioOption {
    pub fn number(self) -> u8 {
        match self {
            ScenarioOption::Disjoint => 1,
            ScenarioOption::IdenticalGeneral => 2,
            ScenarioOption::PartialOverlap => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioOption::Disjoint => "Disjoint",
            ScenarioOption::IdenticalGeneral => "IdenticalGeneral",
            ScenarioOption::PartialOverlap => "PartialOverlap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioClass {
    pub aspect: Aspect,
    pub option: ScenarioOption,
    pub note: String,
}

pub fn classify_scenario(source_part: &Partition) -> Result<ScenarioClass> {
    let general_empty = source_part.general.is_empty();
    let specific_empty = source_part.specific.values().all(BTreeSet::is_empty);
    let aspect = source_part.aspect;
    let (option, note) = match (general_empty, specific_empty) {
        (true, true) => return Err(Error::EmptyAspect(aspect.as_str().to_string())),
        (true, false) => (
            ScenarioOption::Disjoint,
            "no item is common to all jurisdictions; every specific set must be analysed in depth, and a fully disjoint situation is rare in practice",
        ),
        (false, true) => (
            ScenarioOption::IdenticalGeneral,
            "all jurisdictions hold identical items; one general baseline serves every jurisdiction",
        ),
        (false, false) => (
            ScenarioOption::PartialOverlap,
            "some items are common and some differ (the usual situation); keep components for the general set separate from jurisdiction-specific ones",
        ),
    };
    Ok(ScenarioClass {
        aspect,
        option,
        note: note.to_string(),
    })
}

/// Components whose implemented requirements do not match their scope under
/// the given partitions. Components scoped to a jurisdiction outside the
/// analyzed level are not checked.
pub fn component_scope_findings(corpus: &Corpus, parts: &PartitionSet) -> Vec<Finding> {
    let general: BTreeSet<String> = parts
        .requirement_partitions()
        .iter()
        .flat_map(|p| p.general_ids())
        .collect();
    let mut out = Vec::new();
    for c in corpus.components.values() {
        for rid in &c.implements {
            let misplaced = match &c.scope {
                ComponentScope::General => (!general.contains(rid)).then(|| {
                    format!("general component `{}` implements non-general requirement `{rid}`", c.id)
                }),
                ComponentScope::Specific(j) => {
                    let analyzed = parts.legal_requirements.specific.contains_key(j);
                    let in_specific = parts
                        .requirement_partitions()
                        .iter()
                        .any(|p| p.specific.get(j).is_some_and(|ids| ids.contains(rid)));
                    (analyzed && !in_specific).then(|| {
                        format!(
                            "component `{}` scoped to `{j}` implements `{rid}`, which is not specific to `{j}`",
                            c.id
                        )
                    })
                }
            };
            if let Some(message) = misplaced {
                out.push(Finding::new(
                    FindingCode::ComponentScope,
                    Severity::Warning,
                    &c.id,
                    match &c.scope {
                        ComponentScope::Specific(j) => Some(j.as_str()),
                        ComponentScope::General => None,
                    },
                    message,
                ));
            }
        }
    }
    out.sort();
    out
}
