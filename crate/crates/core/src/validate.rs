//! Structural validation of a corpus value.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, ValidationCode, ValidationErrors, ValidationIssue};
use crate::hierarchy::{validate_hierarchy, HierarchyCode};
use crate::model::Corpus;
use crate::relations::RefinementIndex;

/// Checks every invariant of a corpus. On failure all issues are returned,
/// sorted by code then id.
pub fn validate_corpus(corpus: &Corpus) -> Result<(), ValidationErrors> {
    let issues = collect_issues(corpus);
    if issues.is_empty() {
        Ok(())
    } else {
        Err(ValidationErrors(issues))
    }
}

fn collect_issues(corpus: &Corpus) -> Vec<ValidationIssue> {
    use ValidationCode as C;
    let mut out = Vec::new();
    let mut issue = |code, id: &str, msg: String| out.push(ValidationIssue::new(code, id, msg));

    let mut owners: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let all_ids = corpus
        .jurisdictions
        .keys()
        .map(|k| (k, "jurisdiction"))
        .chain(corpus.sources.keys().map(|k| (k, "source")))
        .chain(corpus.requirements.keys().map(|k| (k, "requirement")))
        .chain(corpus.components.keys().map(|k| (k, "component")));
    for (id, what) in all_ids {
        if id.trim().is_empty() {
            issue(C::EmptyId, id, format!("{what} has an empty id"));
        }
        owners.entry(id.as_str()).or_default().push(what);
    }
    for (id, what) in &owners {
        if what.len() > 1 {
            issue(
                C::DuplicateId,
                id,
                format!("id `{id}` is used by more than one item ({})", what.join(", ")),
            );
        }
    }
    let key_mismatch = corpus
        .jurisdictions
        .iter()
        .map(|(k, v)| (k, &v.id))
        .chain(corpus.sources.iter().map(|(k, v)| (k, &v.id)))
        .chain(corpus.requirements.iter().map(|(k, v)| (k, &v.id)))
        .chain(corpus.components.iter().map(|(k, v)| (k, &v.id)));
    for (k, id) in key_mismatch {
        if k != id {
            issue(C::DuplicateId, id, format!("item `{id}` is stored under key `{k}`"));
        }
    }

    for f in validate_hierarchy(corpus) {
        let code = match f.code {
            HierarchyCode::UnknownParent => C::DanglingRef,
            HierarchyCode::ParentCycle => C::ParentCycle,
            _ => C::LevelViolation,
        };
        issue(code, &f.jurisdiction, f.message);
    }

    let mut concept_slots: BTreeMap<(&str, &str, &str), &str> = BTreeMap::new();
    for s in corpus.sources.values() {
        if !corpus.jurisdictions.contains_key(&s.jurisdiction) {
            issue(
                C::DanglingRef,
                &s.id,
                format!("source `{}` names unknown jurisdiction `{}`", s.id, s.jurisdiction),
            );
        }
        let slot = (s.jurisdiction.as_str(), s.concept_key.as_str(), s.kind.as_str());
        if let Some(prev) = concept_slots.insert(slot, &s.id) {
            issue(
                C::DuplicateConcept,
                &s.id,
                format!(
                    "sources `{prev}` and `{}` both cover {} concept `{}` in `{}`",
                    s.id,
                    s.kind.as_str(),
                    s.concept_key,
                    s.jurisdiction
                ),
            );
        }
    }

    for r in corpus.requirements.values() {
        if !corpus.jurisdictions.contains_key(&r.jurisdiction) {
            issue(
                C::DanglingRef,
                &r.id,
                format!("requirement `{}` names unknown jurisdiction `{}`", r.id, r.jurisdiction),
            );
        }
        match r.kind.source_kind() {
            None if !r.derived_from.is_empty() => issue(
                C::KindMismatch,
                &r.id,
                format!("functional requirement `{}` cannot be derived from sources", r.id),
            ),
            _ => {}
        }
        for sid in &r.derived_from {
            let Some(src) = corpus.sources.get(sid) else {
                issue(
                    C::DanglingRef,
                    &r.id,
                    format!("requirement `{}` is derived from unknown source `{sid}`", r.id),
                );
                continue;
            };
            if let Some(expected) = r.kind.source_kind() {
                if src.kind != expected {
                    issue(
                        C::KindMismatch,
                        &r.id,
                        format!(
                            "{} requirement `{}` is derived from {} source `{sid}`",
                            r.kind.as_str(),
                            r.id,
                            src.kind.as_str()
                        ),
                    );
                }
            }
            if !corpus.is_self_or_ancestor(&src.jurisdiction, &r.jurisdiction) {
                issue(
                    C::DerivationScope,
                    &r.id,
                    format!(
                        "source `{sid}` of `{}` belongs to `{}`, which is neither `{}` nor an ancestor",
                        r.id, src.jurisdiction, r.jurisdiction
                    ),
                );
            }
        }
    }

    let relation_pairs = corpus
        .relations
        .refines
        .iter()
        .map(|(a, b)| ("refines", a.as_str(), b.as_str()))
        .chain(
            corpus
                .relations
                .contradicts
                .iter()
                .map(|p| ("contradicts", p.first(), p.second())),
        );
    for (rel, a, b) in relation_pairs {
        let (ia, ib) = (corpus.item(a), corpus.item(b));
        for (id, item) in [(a, ia), (b, ib)] {
            if item.is_none() {
                issue(C::DanglingRef, id, format!("`{rel}` pair ({a}, {b}) names unknown item `{id}`"));
            }
        }
        if a == b {
            issue(C::SelfRelation, a, format!("`{a}` cannot be in `{rel}` with itself"));
        }
        if let (Some(ia), Some(ib)) = (ia, ib) {
            if ia.class() != ib.class() {
                issue(
                    C::RelationClassMismatch,
                    a,
                    format!(
                        "`{rel}` pair ({a}, {b}) relates a {} to a {}",
                        ia.class(),
                        ib.class()
                    ),
                );
            }
        }
    }
    if let Err(Error::Cycle { witness }) = RefinementIndex::build(&corpus.relations) {
        issue(
            C::RefinementCycle,
            witness.first().map(String::as_str).unwrap_or(""),
            format!("refinement cycle {}", witness.join(" -> ")),
        );
    }

    let known: BTreeSet<&str> = corpus.jurisdictions.keys().map(String::as_str).collect();
    for c in corpus.components.values() {
        for rid in &c.implements {
            if !corpus.requirements.contains_key(rid) {
                issue(
                    C::DanglingRef,
                    &c.id,
                    format!("component `{}` implements unknown requirement `{rid}`", c.id),
                );
            }
        }
        if let crate::model::ComponentScope::Specific(j) = &c.scope {
            if !known.contains(j.as_str()) {
                issue(
                    C::DanglingRef,
                    &c.id,
                    format!("component `{}` is scoped to unknown jurisdiction `{j}`", c.id),
                );
            }
        }
    }

    out.sort();
    out.dedup();
    out
}
