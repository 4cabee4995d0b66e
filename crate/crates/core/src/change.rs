//! Applying change sets and classifying their impact.
//!
//! A modified requirement is classified by where it sits before the change
//! and where it ends up afterwards:
//!
//! | before   | after / adoption                    | case |
//! |----------|-------------------------------------|------|
//! | specific | still specific                      | 1a   |
//! | specific | identical to every other version    | 1b   |
//! | general  | adopted by every jurisdiction       | 2a   |
//! | general  | adopted by a proper subset          | 2b   |
//!
//! Ops are applied one at a time and partitions are recomputed between ops.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::corpus_io::{content_hash, corpus_fingerprint, to_canonical_json, ChangeKind, ChangeOp, ChangeSet, Payload};
use crate::error::{Error, Result, ValidationCode, ValidationErrors, ValidationIssue};
use crate::finding::Finding;
use crate::hierarchy::{select_level, LevelSelection};
use crate::model::{Corpus, Level, Requirement, RequirementKind, Role, SourceItem, SourceKind};
use crate::partition::{check_elaboration, Aspect, Partition, PartitionSet};
use crate::validate::validate_corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseCode {
    SpecStaysSpec,
    SpecToGeneral,
    GenStaysGen,
    GenSplits,
    Add,
    Remove,
}

impl CaseCode {
    /// Short label: `1a`, `1b`, `2a`, `2b`, `add`, `remove`.
    pub fn short(self) -> &'static str {
        match self {
            CaseCode::SpecStaysSpec => "1a",
            CaseCode::SpecToGeneral => "1b",
            CaseCode::GenStaysGen => "2a",
            CaseCode::GenSplits => "2b",
            CaseCode::Add => "add",
            CaseCode::Remove => "remove",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseCode::SpecStaysSpec => "SPEC_STAYS_SPEC",
            CaseCode::SpecToGeneral => "SPEC_TO_GENERAL",
            CaseCode::GenStaysGen => "GEN_STAYS_GEN",
            CaseCode::GenSplits => "GEN_SPLITS",
            CaseCode::Add => "ADD",
            CaseCode::Remove => "REMOVE",
        }
    }

    pub fn is_modify_case(self) -> bool {
        matches!(
            self,
            CaseCode::SpecStaysSpec | CaseCode::SpecToGeneral | CaseCode::GenStaysGen | CaseCode::GenSplits
        )
    }
}

impl fmt::Display for CaseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.as_str(), self.short())
    }
}

/// Movement of one id between partition sets. Set labels are `RLG`, `RCG`,
/// `RFG`, `LG`, `CG` for general sets and e.g. `RLS:de` for specific ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Migration {
    pub id: String,
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ComponentStatus {
    MustChange,
    Unchanged,
    Reusable,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ComponentImpact {
    pub component: String,
    pub status: ComponentStatus,
}

/// Adopting and keeping jurisdictions of a partially adopted general change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdoptionSplit {
    pub adopt: BTreeSet<String>,
    pub keep: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OpRecord {
    pub index: usize,
    pub op: ChangeKind,
    pub target: String,
    pub role: Role,
    /// `None` for modifications of source items.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_code: Option<CaseCode>,
    pub migrations: Vec<Migration>,
    pub affected: BTreeSet<String>,
    pub component_impact: Vec<ComponentImpact>,
    /// Ids whose content was rewritten by this op.
    pub updated: BTreeSet<String>,
    /// For 1b: jurisdictions that held the promoted requirement.
    #[serde(skip_serializing_if = "BTreeSet::is_empty")]
    pub promoting: BTreeSet<String>,
    /// For 1b: the other jurisdictions' identical versions.
    #[serde(skip_serializing_if = "BTreeSet::is_empty")]
    pub counterparts: BTreeSet<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adoption: Option<AdoptionSplit>,
    /// For source ops: elaboration findings on requirements derived from it.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<Finding>,
}

impl OpRecord {
    fn new(index: usize, op: &ChangeOp, role: Role) -> Self {
        OpRecord {
            index,
            op: op.op,
            target: op.target.clone(),
            role,
            case_code: None,
            migrations: Vec::new(),
            affected: BTreeSet::new(),
            component_impact: Vec::new(),
            updated: BTreeSet::new(),
            promoting: BTreeSet::new(),
            counterparts: BTreeSet::new(),
            adoption: None,
            findings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ImpactReport {
    pub label: String,
    pub level: Level,
    pub before: String,
    pub after: String,
    pub per_op: Vec<OpRecord>,
}

/// Result of one op: the new corpus and its record.
#[derive(Debug, Clone)]
pub struct ChangeOutcome {
    pub corpus: Corpus,
    pub record: OpRecord,
}

/// Digest of the general/specific sets of every partition, independent of
/// item content.
pub fn partition_fingerprint(parts: &PartitionSet) -> String {
    let sets: Vec<_> = [
        &parts.legal_sources,
        &parts.cultural_sources,
        &parts.legal_requirements,
        &parts.cultural_requirements,
        &parts.functional_requirements,
    ]
    .iter()
    .map(|p| (p.role, p.aspect, &p.general, &p.specific))
    .collect();
    hex::encode(Sha256::digest(to_canonical_json(&sets).as_bytes()))
}

fn set_prefix(p: &Partition) -> &'static str {
    match (p.role, p.aspect) {
        (Role::Requirement, Aspect::Legal) => "RL",
        (Role::Requirement, Aspect::Cultural) => "RC",
        (Role::Requirement, Aspect::Functional) => "RF",
        (Role::Source, Aspect::Legal) => "L",
        (Role::Source, Aspect::Cultural) => "C",
        (Role::Source, Aspect::Functional) => "F",
    }
}

fn membership(parts: &PartitionSet) -> BTreeMap<String, BTreeSet<String>> {
    let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for p in [
        &parts.legal_sources,
        &parts.cultural_sources,
        &parts.legal_requirements,
        &parts.cultural_requirements,
        &parts.functional_requirements,
    ] {
        let prefix = set_prefix(p);
        for id in p.general_ids() {
            out.entry(id).or_default().insert(format!("{prefix}G"));
        }
        for (jur, ids) in &p.specific {
            for id in ids {
                out.entry(id.clone()).or_default().insert(format!("{prefix}S:{jur}"));
            }
        }
    }
    out
}

fn migrations(before: &PartitionSet, after: &PartitionSet) -> Vec<Migration> {
    let (b, a) = (membership(before), membership(after));
    let ids: BTreeSet<&String> = b.keys().chain(a.keys()).collect();
    let empty = BTreeSet::new();
    ids.into_iter()
        .filter_map(|id| {
            let from = b.get(id).unwrap_or(&empty);
            let to = a.get(id).unwrap_or(&empty);
            (from != to).then(|| Migration {
                id: id.clone(),
                from: from.iter().cloned().collect(),
                to: to.iter().cloned().collect(),
            })
        })
        .collect()
}

fn jurisdictions_in(migs: &[Migration]) -> BTreeSet<String> {
    migs.iter()
        .flat_map(|m| m.from.iter().chain(m.to.iter()))
        .filter_map(|label| label.split_once(':').map(|(_, j)| j.to_string()))
        .collect()
}

fn invalid_payload(target: &str, msg: String) -> Error {
    ValidationErrors::single(ValidationIssue::new(ValidationCode::InvalidPayload, target, msg)).into()
}

/// Applies content fields of a payload. `derived_from` is only applied when
/// `full` is set (the op's own target); counterparts keep their own sources.
fn apply_to_requirement(req: &mut Requirement, p: &Payload, full: bool) -> Result<()> {
    if p.is_static.is_some() {
        return Err(invalid_payload(&req.id, "isStatic applies to sources only".into()));
    }
    if let Some(k) = &p.concept_key {
        req.concept_key = k.clone();
    }
    if let Some(t) = &p.text {
        req.text = t.clone();
        req.content_hash = content_hash(t);
    }
    if let Some(h) = &p.content_hash {
        req.content_hash = h.clone();
    }
    if full {
        if let Some(d) = &p.derived_from {
            req.derived_from = d.clone();
        }
    }
    Ok(())
}

fn apply_to_source(src: &mut SourceItem, p: &Payload) -> Result<()> {
    if p.derived_from.is_some() {
        return Err(invalid_payload(&src.id, "derivedFrom applies to requirements only".into()));
    }
    if let Some(k) = &p.concept_key {
        src.concept_key = k.clone();
    }
    if let Some(t) = &p.text {
        src.text = t.clone();
        src.content_hash = content_hash(t);
    }
    if let Some(h) = &p.content_hash {
        src.content_hash = h.clone();
    }
    if let Some(s) = p.is_static {
        src.is_static = s;
    }
    Ok(())
}

fn components_implementing<'a>(
    corpus: &'a Corpus,
    ids: &'a BTreeSet<String>,
) -> impl Iterator<Item = &'a str> + 'a {
    corpus
        .components
        .values()
        .filter(move |c| c.implements.iter().any(|r| ids.contains(r)))
        .map(|c| c.id.as_str())
}

fn finish(corpus: Corpus, selection: &LevelSelection, before: &PartitionSet, mut record: OpRecord) -> Result<(ChangeOutcome, PartitionSet)> {
    validate_corpus(&corpus)?;
    let after = PartitionSet::compute(&corpus, selection)?;
    record.migrations = migrations(before, &after);
    record.component_impact.sort();
    record.component_impact.dedup();
    Ok((ChangeOutcome { corpus, record }, after))
}

fn ensure_current(corpus: &Corpus, parts: &PartitionSet) -> Result<()> {
    let fp = corpus_fingerprint(corpus);
    if parts.legal_requirements.corpus_fingerprint != fp {
        return Err(Error::PartitionMismatch {
            expected: fp,
            found: parts.legal_requirements.corpus_fingerprint.clone(),
        });
    }
    Ok(())
}

/// Applies a modify op targeting a requirement and assigns exactly one of
/// the cases 1a, 1b, 2a, 2b.
pub fn classify_change(
    corpus: &Corpus,
    selection: &LevelSelection,
    parts: &PartitionSet,
    op: &ChangeOp,
) -> Result<ChangeOutcome> {
    classify_indexed(corpus, selection, parts, op, 0).map(|(o, _)| o)
}

fn classify_indexed(
    corpus: &Corpus,
    selection: &LevelSelection,
    parts: &PartitionSet,
    op: &ChangeOp,
    index: usize,
) -> Result<(ChangeOutcome, PartitionSet)> {
    ensure_current(corpus, parts)?;
    let target = op.target.as_str();
    let Some(req) = corpus.requirements.get(target) else {
        return Err(Error::UnknownTarget(target.to_string()));
    };
    if op.op != ChangeKind::Modify {
        return Err(invalid_payload(target, format!("`{target}` is not a modify op")));
    }
    let payload = op
        .payload
        .as_ref()
        .ok_or_else(|| invalid_payload(target, format!("modify of `{target}` needs a payload")))?;
    let part = parts.requirements(req.kind);
    let mut record = OpRecord::new(index, op, Role::Requirement);
    let mut next = corpus.clone();

    if part.is_general(target) {
        let adopters = op
            .adopted_by
            .as_ref()
            .ok_or_else(|| Error::MissingAdoptedBy(target.to_string()))?;
        if let Some(j) = adopters.iter().find(|j| !selection.frontier.contains(*j)) {
            return Err(Error::AdopterOutsideFrontier {
                target: target.to_string(),
                jurisdiction: j.clone(),
                level: selection.level,
            });
        }
        let group = &part.general[&req.concept_key];
        let keep: BTreeSet<String> = selection.frontier.difference(adopters).cloned().collect();
        let adopt_ids: BTreeSet<String> = adopters
            .iter()
            .filter_map(|j| group.get(j))
            .flatten()
            .cloned()
            .collect();
        let keep_ids: BTreeSet<String> = keep
            .iter()
            .filter_map(|j| group.get(j))
            .flatten()
            .cloned()
            .collect();
        if let Some(shared) = adopt_ids.intersection(&keep_ids).next() {
            return Err(Error::AmbiguousAdoption { id: shared.clone() });
        }
        for id in &adopt_ids {
            let r = next.requirements.get_mut(id).expect("group ids exist");
            apply_to_requirement(r, payload, id == target)?;
        }
        record.updated = adopt_ids.clone();
        record.affected = selection.frontier.clone();
        for c in components_implementing(corpus, &adopt_ids) {
            record.component_impact.push(ComponentImpact {
                component: c.to_string(),
                status: ComponentStatus::MustChange,
            });
        }
        if keep.is_empty() {
            record.case_code = Some(CaseCode::GenStaysGen);
        } else {
            record.case_code = Some(CaseCode::GenSplits);
            let changed: BTreeSet<&str> = components_implementing(corpus, &adopt_ids).collect();
            for c in components_implementing(corpus, &keep_ids) {
                if !changed.contains(c) {
                    record.component_impact.push(ComponentImpact {
                        component: c.to_string(),
                        status: ComponentStatus::Unchanged,
                    });
                }
            }
            record.adoption = Some(AdoptionSplit {
                adopt: adopters.clone(),
                keep,
            });
        }
        return finish(next, selection, parts, record);
    }

    let holders = part.specific_holders(target);
    if holders.is_empty() {
        return Err(invalid_payload(
            target,
            format!("`{target}` is not analyzed at level {}", selection.level),
        ));
    }
    if op.adopted_by.is_some() {
        return Err(invalid_payload(
            target,
            format!("adoptedBy is only allowed for general requirements, `{target}` is specific"),
        ));
    }
    apply_to_requirement(next.requirements.get_mut(target).expect("target exists"), payload, true)?;
    let target_set: BTreeSet<String> = [target.to_string()].into();
    for c in components_implementing(corpus, &target_set) {
        record.component_impact.push(ComponentImpact {
            component: c.to_string(),
            status: ComponentStatus::MustChange,
        });
    }
    record.updated = target_set;

    let (mut outcome, after) = finish(next, selection, parts, record)?;
    let new_kind = outcome.corpus.requirements[target].kind;
    let after_part = after.requirements(new_kind);
    let rec = &mut outcome.record;
    if after_part.is_general(target) {
        rec.case_code = Some(CaseCode::SpecToGeneral);
        let concept = &outcome.corpus.requirements[target].concept_key;
        rec.counterparts = after_part.general[concept]
            .iter()
            .filter(|(j, _)| !holders.contains(*j))
            .flat_map(|(_, ids)| ids.iter().cloned())
            .filter(|id| id != target)
            .collect();
        rec.promoting = holders.clone();
        rec.affected = holders;
        rec.affected.extend(jurisdictions_in(&rec.migrations));
        let already: BTreeSet<&str> = rec.component_impact.iter().map(|c| c.component.as_str()).collect::<BTreeSet<_>>();
        let reusable: Vec<ComponentImpact> = components_implementing(&outcome.corpus, &rec.counterparts)
            .filter(|c| !already.contains(c))
            .map(|c| ComponentImpact {
                component: c.to_string(),
                status: ComponentStatus::Reusable,
            })
            .collect();
        rec.component_impact.extend(reusable);
        rec.component_impact.sort();
    } else {
        rec.case_code = Some(CaseCode::SpecStaysSpec);
        rec.affected = holders;
    }
    Ok((outcome, after))
}

fn parse_kind<T: serde::de::DeserializeOwned>(target: &str, kind: &str) -> Result<T> {
    serde_json::from_value(serde_json::Value::String(kind.to_string()))
        .map_err(|_| invalid_payload(target, format!("unknown kind `{kind}`")))
}

fn jurisdictions_of_dependents(corpus: &Corpus, source: &str) -> BTreeSet<String> {
    corpus
        .requirements
        .values()
        .filter(|r| r.derived_from.contains(source))
        .map(|r| r.jurisdiction.clone())
        .collect()
}

fn source_findings(corpus: &Corpus, parts: &PartitionSet, source: &str) -> Result<Vec<Finding>> {
    let dependents: BTreeSet<&str> = corpus
        .requirements
        .values()
        .filter(|r| r.derived_from.contains(source))
        .map(|r| r.id.as_str())
        .collect();
    Ok(check_elaboration(
        corpus,
        (&parts.legal_sources, &parts.cultural_sources),
        &parts.requirement_partitions(),
    )?
    .into_iter()
    .filter(|f| dependents.contains(f.id.as_str()))
    .collect())
}

fn apply_other(
    corpus: &Corpus,
    selection: &LevelSelection,
    parts: &PartitionSet,
    op: &ChangeOp,
    index: usize,
) -> Result<(ChangeOutcome, PartitionSet)> {
    let target = op.target.as_str();
    let mut next = corpus.clone();
    match op.op {
        ChangeKind::Add => {
            let p = op
                .payload
                .as_ref()
                .ok_or_else(|| invalid_payload(target, "add needs a payload".into()))?;
            let missing = || invalid_payload(target, format!("add of `{target}` is incomplete"));
            let role = p.role.ok_or_else(missing)?;
            let kind = p.kind.as_deref().ok_or_else(missing)?;
            let jurisdiction = p.jurisdiction.clone().ok_or_else(missing)?;
            let concept_key = p.concept_key.clone().ok_or_else(missing)?;
            let text = p.text.clone().ok_or_else(missing)?;
            let hash = p.content_hash.clone().unwrap_or_else(|| content_hash(&text));
            let mut record = OpRecord::new(index, op, role);
            record.case_code = Some(CaseCode::Add);
            record.updated.insert(target.to_string());
            match role {
                Role::Requirement => {
                    if p.is_static.is_some() {
                        return Err(invalid_payload(target, "isStatic applies to sources only".into()));
                    }
                    let kind: RequirementKind = parse_kind(target, kind)?;
                    next.requirements.insert(
                        target.to_string(),
                        Requirement {
                            id: target.to_string(),
                            kind,
                            jurisdiction,
                            concept_key,
                            content_hash: hash,
                            derived_from: p.derived_from.clone().unwrap_or_default(),
                            text,
                        },
                    );
                }
                Role::Source => {
                    if p.derived_from.is_some() {
                        return Err(invalid_payload(target, "derivedFrom applies to requirements only".into()));
                    }
                    let kind: SourceKind = parse_kind(target, kind)?;
                    next.sources.insert(
                        target.to_string(),
                        SourceItem {
                            id: target.to_string(),
                            kind,
                            jurisdiction,
                            concept_key,
                            content_hash: hash,
                            text,
                            is_static: p.is_static.unwrap_or(false),
                        },
                    );
                }
            }
            let (mut outcome, after) = finish(next, selection, parts, record)?;
            let rec = &mut outcome.record;
            rec.affected = jurisdictions_in(&rec.migrations);
            Ok((outcome, after))
        }
        ChangeKind::Remove => {
            let role = match corpus.item(target) {
                Some(i) => i.class().role(),
                None => return Err(Error::UnknownTarget(target.to_string())),
            };
            let mut record = OpRecord::new(index, op, role);
            record.case_code = Some(CaseCode::Remove);
            next.sources.remove(target);
            next.requirements.remove(target);
            next.relations.refines.retain(|(a, b)| a != target && b != target);
            next.relations.contradicts.retain(|p| !p.contains(target));
            let target_set: BTreeSet<String> = [target.to_string()].into();
            for c in components_implementing(corpus, &target_set) {
                record.component_impact.push(ComponentImpact {
                    component: c.to_string(),
                    status: ComponentStatus::MustChange,
                });
            }
            for c in next.components.values_mut() {
                c.implements.remove(target);
            }
            let (mut outcome, after) = finish(next, selection, parts, record)?;
            let rec = &mut outcome.record;
            rec.affected = jurisdictions_in(&rec.migrations);
            Ok((outcome, after))
        }
        ChangeKind::Modify => {
            let payload = op
                .payload
                .as_ref()
                .ok_or_else(|| invalid_payload(target, "modify needs a payload".into()))?;
            let Some(src) = next.sources.get_mut(target) else {
                return Err(Error::UnknownTarget(target.to_string()));
            };
            apply_to_source(src, payload)?;
            let mut record = OpRecord::new(index, op, Role::Source);
            record.updated.insert(target.to_string());
            let (mut outcome, after) = finish(next, selection, parts, record)?;
            outcome.record.findings = source_findings(&outcome.corpus, &after, target)?;
            let mut affected = jurisdictions_in(&outcome.record.migrations);
            affected.extend(jurisdictions_of_dependents(&outcome.corpus, target));
            outcome.record.affected = affected;
            Ok((outcome, after))
        }
    }
}

/// Applies one op of any kind.
pub fn apply_op(
    corpus: &Corpus,
    selection: &LevelSelection,
    parts: &PartitionSet,
    op: &ChangeOp,
) -> Result<ChangeOutcome> {
    apply_op_indexed(corpus, selection, parts, op, 0).map(|(o, _)| o)
}

fn apply_op_indexed(
    corpus: &Corpus,
    selection: &LevelSelection,
    parts: &PartitionSet,
    op: &ChangeOp,
    index: usize,
) -> Result<(ChangeOutcome, PartitionSet)> {
    if op.op == ChangeKind::Modify && corpus.requirements.contains_key(&op.target) {
        classify_indexed(corpus, selection, parts, op, index)
    } else {
        ensure_current(corpus, parts)?;
        apply_other(corpus, selection, parts, op, index)
    }
}

/// Applies every op in order, recomputing partitions after each. On any
/// error nothing is returned but the error; the input corpus is untouched.
pub fn apply_change_set(corpus: &Corpus, level: Level, cs: &ChangeSet) -> Result<(Corpus, ImpactReport)> {
    cs.validate()?;
    cs.validate_against(corpus)?;
    let selection = select_level(corpus, level)?;
    let mut parts = PartitionSet::compute(corpus, &selection)?;
    let before = partition_fingerprint(&parts);
    let mut current = corpus.clone();
    let mut per_op = Vec::with_capacity(cs.ops.len());
    for (i, op) in cs.ops.iter().enumerate() {
        let (outcome, after) = apply_op_indexed(&current, &selection, &parts, op, i)?;
        current = outcome.corpus;
        parts = after;
        per_op.push(outcome.record);
    }
    Ok((
        current,
        ImpactReport {
            label: cs.label.clone(),
            level,
            before,
            after: partition_fingerprint(&parts),
            per_op,
        },
    ))
}

/// A component of another jurisdiction that already implements the
/// requirement a jurisdiction just converged on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReuseHint {
    pub component: String,
    pub for_jurisdiction: String,
    pub requirement: String,
    pub op_index: usize,
}

pub fn reuse_hints(report: &ImpactReport, corpus: &Corpus) -> Vec<ReuseHint> {
    let mut out = Vec::new();
    for rec in &report.per_op {
        if rec.case_code != Some(CaseCode::SpecToGeneral) {
            continue;
        }
        for cp in &rec.counterparts {
            for c in corpus.components.values() {
                if !c.implements.contains(cp) || c.implements.contains(&rec.target) {
                    continue;
                }
                for j in &rec.promoting {
                    if c.scope == crate::model::ComponentScope::Specific(j.clone()) {
                        continue;
                    }
                    out.push(ReuseHint {
                        component: c.id.clone(),
                        for_jurisdiction: j.clone(),
                        requirement: cp.clone(),
                        op_index: rec.index,
                    });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
