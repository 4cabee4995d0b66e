//! Relation algebra over requirement and source ids: refinement closure,
//! contradiction propagation, semantic identity and conflict finding.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Corpus, ItemRef, RelationSet, UnorderedPair};

/// Transitive closure of the declared `refines` relation.
///
/// `weaker[a]` holds every id that `a` refines (directly or transitively),
/// `stronger[b]` every id refining `b`.
#[derive(Debug, Clone, Default)]
pub struct RefinementIndex {
    weaker: BTreeMap<String, BTreeSet<String>>,
    stronger: BTreeMap<String, BTreeSet<String>>,
}

impl RefinementIndex {
    /// Builds the closure, failing with one witness cycle if `refines` is cyclic.
    pub fn build(relations: &RelationSet) -> Result<Self> {
        let mut edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (a, b) in &relations.refines {
            edges.entry(a.as_str()).or_default().push(b.as_str());
            edges.entry(b.as_str()).or_default();
        }
        if let Some(witness) = find_cycle(&edges) {
            return Err(Error::Cycle { witness });
        }

        let mut weaker: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for node in edges.keys() {
            collect_weaker(node, &edges, &mut weaker);
        }
        let mut stronger: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (a, bs) in &weaker {
            for b in bs {
                stronger.entry(b.clone()).or_default().insert(a.clone());
            }
        }
        weaker.retain(|_, v| !v.is_empty());
        Ok(RefinementIndex { weaker, stronger })
    }

    /// True iff `a` refines `b` in the closure (strict).
    pub fn refines(&self, a: &str, b: &str) -> bool {
        self.weaker.get(a).is_some_and(|s| s.contains(b))
    }

    /// Everything `id` refines.
    pub fn weaker_than(&self, id: &str) -> impl Iterator<Item = &str> {
        self.weaker.get(id).into_iter().flatten().map(String::as_str)
    }

    /// Everything refining `id`.
    pub fn stronger_than(&self, id: &str) -> impl Iterator<Item = &str> {
        self.stronger.get(id).into_iter().flatten().map(String::as_str)
    }

    /// All closure pairs `(a, b)` with `a` refining `b`.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.weaker
            .iter()
            .flat_map(|(a, bs)| bs.iter().map(move |b| (a.as_str(), b.as_str())))
    }
}

fn collect_weaker<'a>(
    node: &'a str,
    edges: &BTreeMap<&'a str, Vec<&'a str>>,
    memo: &mut BTreeMap<String, BTreeSet<String>>,
) {
    if memo.contains_key(node) {
        return;
    }
    let mut acc = BTreeSet::new();
    for &next in edges.get(node).map(Vec::as_slice).unwrap_or(&[]) {
        collect_weaker(next, edges, memo);
        acc.insert(next.to_string());
        acc.extend(memo[next].iter().cloned());
    }
    memo.insert(node.to_string(), acc);
}

/// Returns one cycle `[a, b, ..., a]` if the graph has any.
fn find_cycle(edges: &BTreeMap<&str, Vec<&str>>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(
        node: &'a str,
        edges: &BTreeMap<&'a str, Vec<&'a str>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        path: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        marks.insert(node, Mark::Open);
        path.push(node);
        for &next in edges.get(node).map(Vec::as_slice).unwrap_or(&[]) {
            match marks.get(next) {
                Some(Mark::Open) => {
                    let start = path.iter().position(|&p| p == next).unwrap_or(0);
                    let mut cycle: Vec<String> = path[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(next.to_string());
                    return Some(cycle);
                }
                Some(Mark::Done) => {}
                None => {
                    if let Some(c) = visit(next, edges, marks, path) {
                        return Some(c);
                    }
                }
            }
        }
        path.pop();
        marks.insert(node, Mark::Done);
        None
    }

    let mut marks = BTreeMap::new();
    for node in edges.keys() {
        if !marks.contains_key(node) {
            let mut path = Vec::new();
            if let Some(c) = visit(node, edges, &mut marks, &mut path) {
                return Some(c);
            }
        }
    }
    None
}

/// Transitive closure of `refines`, restricted to pairs with both ends in `ids`.
///
/// The closure is taken over the whole relation before restricting, so a
/// chain through an id outside `ids` still relates its endpoints.
pub fn refinement_closure(
    relations: &RelationSet,
    ids: &BTreeSet<String>,
) -> Result<BTreeSet<(String, String)>> {
    let index = RefinementIndex::build(relations)?;
    Ok(index
        .pairs()
        .filter(|(a, b)| ids.contains(*a) && ids.contains(*b))
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConflictOrigin {
    Explicit,
    Derived,
}

/// Declared contradictions closed under refinement: anything refining one side
/// of a contradiction contradicts the other side too. Pairs that would relate
/// an item to itself are dropped.
pub fn derive_contradictions_with_origin(
    relations: &RelationSet,
    index: &RefinementIndex,
) -> BTreeMap<UnorderedPair, ConflictOrigin> {
    let mut out = BTreeMap::new();
    for pair in &relations.contradicts {
        let left: Vec<&str> = std::iter::once(pair.first())
            .chain(index.stronger_than(pair.first()))
            .collect();
        let right: Vec<&str> = std::iter::once(pair.second())
            .chain(index.stronger_than(pair.second()))
            .collect();
        for x in &left {
            for y in &right {
                if x == y {
                    continue;
                }
                out.entry(UnorderedPair::new(*x, *y))
                    .or_insert(ConflictOrigin::Derived);
            }
        }
    }
    for pair in &relations.contradicts {
        if !pair.is_reflexive() {
            out.insert(pair.clone(), ConflictOrigin::Explicit);
        }
    }
    out
}

pub fn derive_contradictions(relations: &RelationSet) -> Result<BTreeSet<UnorderedPair>> {
    let index = RefinementIndex::build(relations)?;
    Ok(derive_contradictions_with_origin(relations, &index)
        .into_keys()
        .collect())
}

/// Same concept key and same content hash; jurisdiction is ignored.
pub fn semantically_identical(a: ItemRef<'_>, b: ItemRef<'_>) -> Result<bool> {
    if a.class() != b.class() {
        return Err(Error::RoleMismatch {
            a: a.id().to_string(),
            a_class: a.class(),
            b: b.id().to_string(),
            b_class: b.class(),
        });
    }
    Ok(a.concept_key() == b.concept_key() && a.content_hash() == b.content_hash())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Conflict {
    pub pair: UnorderedPair,
    pub origin: ConflictOrigin,
}

/// Every derived contradiction with both endpoints among the requirement ids
/// in `scope`, in pair order.
pub fn find_conflicts(corpus: &Corpus, scope: &BTreeSet<String>) -> Result<Vec<Conflict>> {
    if let Some(bad) = scope.iter().find(|id| !corpus.requirements.contains_key(*id)) {
        return Err(Error::UnknownId(bad.clone()));
    }
    let index = RefinementIndex::build(&corpus.relations)?;
    Ok(derive_contradictions_with_origin(&corpus.relations, &index)
        .into_iter()
        .filter(|(p, _)| scope.contains(p.first()) && scope.contains(p.second()))
        .map(|(pair, origin)| Conflict { pair, origin })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Requirement, RequirementKind, SourceItem, SourceKind};

    fn rel(refines: &[(&str, &str)], contradicts: &[(&str, &str)]) -> RelationSet {
        RelationSet {
            refines: refines
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            contradicts: contradicts
                .iter()
                .map(|(a, b)| UnorderedPair::new(*a, *b))
                .collect(),
        }
    }

    fn ids(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn pairs(xs: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn upairs(xs: &[(&str, &str)]) -> BTreeSet<UnorderedPair> {
        xs.iter().map(|(a, b)| UnorderedPair::new(*a, *b)).collect()
    }

    fn req(id: &str, jur: &str, concept: &str, hash: &str) -> Requirement {
        Requirement {
            id: id.into(),
            kind: RequirementKind::LegalBased,
            jurisdiction: jur.into(),
            concept_key: concept.into(),
            content_hash: hash.into(),
            derived_from: BTreeSet::new(),
            text: String::new(),
        }
    }

    #[test]
    fn closure_adds_transitive_pair() {
        let r = rel(&[("a", "b"), ("b", "c")], &[]);
        let got = refinement_closure(&r, &ids(&["a", "b", "c"])).unwrap();
        assert_eq!(got, pairs(&[("a", "b"), ("b", "c"), ("a", "c")]));
    }

    #[test]
    fn closure_of_empty_relation_is_empty() {
        let got = refinement_closure(&RelationSet::default(), &ids(&[])).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn closure_restriction_keeps_chains_through_outside_ids() {
        let r = rel(&[("a", "b"), ("b", "c")], &[]);
        let got = refinement_closure(&r, &ids(&["a", "c"])).unwrap();
        assert_eq!(got, pairs(&[("a", "c")]));
    }

    #[test]
    fn cycle_reports_witness() {
        let r = rel(&[("a", "b"), ("b", "c"), ("c", "a")], &[]);
        match refinement_closure(&r, &ids(&["a", "b", "c"])) {
            Err(Error::Cycle { witness }) => {
                assert_eq!(witness.first(), witness.last());
                assert_eq!(witness.len(), 4);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let r = rel(&[("a", "a")], &[]);
        assert!(matches!(RefinementIndex::build(&r), Err(Error::Cycle { .. })));
    }

    #[test]
    fn contradiction_propagates_one_step() {
        let r = rel(&[("x2", "x")], &[("x", "y")]);
        assert_eq!(
            derive_contradictions(&r).unwrap(),
            upairs(&[("x", "y"), ("x2", "y")])
        );
    }

    #[test]
    fn no_contradictions_derive_nothing() {
        let r = rel(&[("a", "b")], &[]);
        assert!(derive_contradictions(&r).unwrap().is_empty());
    }

    #[test]
    fn contradiction_propagates_along_chain() {
        // x3 refines x2 refines x; contr(x, y)
        let r = rel(&[("x3", "x2"), ("x2", "x")], &[("x", "y")]);
        assert_eq!(
            derive_contradictions(&r).unwrap(),
            upairs(&[("x", "y"), ("x2", "y"), ("x3", "y")])
        );
    }

    #[test]
    fn item_refining_both_sides_does_not_contradict_itself() {
        let r = rel(&[("z", "x"), ("z", "y")], &[("x", "y")]);
        assert_eq!(
            derive_contradictions(&r).unwrap(),
            upairs(&[("x", "y"), ("x", "z"), ("y", "z")])
        );
    }

    #[test]
    fn identity_uses_concept_and_hash() {
        let a = req("a", "de", "data-retention", "h1");
        let b = req("b", "au", "data-retention", "h1");
        let c = req("c", "au", "data-retention", "h2");
        assert!(semantically_identical((&a).into(), (&b).into()).unwrap());
        assert!(!semantically_identical((&a).into(), (&c).into()).unwrap());
        assert!(semantically_identical((&a).into(), (&a).into()).unwrap());
    }

    #[test]
    fn identity_rejects_mixed_classes() {
        let a = req("a", "de", "k", "h");
        let mut b = req("b", "de", "k", "h");
        b.kind = RequirementKind::Functional;
        assert!(matches!(
            semantically_identical((&a).into(), (&b).into()),
            Err(Error::RoleMismatch { .. })
        ));
        let s = SourceItem {
            id: "s".into(),
            kind: SourceKind::Legal,
            jurisdiction: "de".into(),
            concept_key: "k".into(),
            content_hash: "h".into(),
            text: String::new(),
            is_static: false,
        };
        assert!(semantically_identical((&a).into(), (&s).into()).is_err());
    }

    fn chain_corpus() -> Corpus {
        let mut c = Corpus::default();
        for id in ["x", "x2", "x3", "y"] {
            c.requirements.insert(id.into(), req(id, "de", id, id));
        }
        c.relations = rel(&[("x3", "x2"), ("x2", "x")], &[("x", "y")]);
        c
    }

    #[test]
    fn conflicts_over_chain_mark_origin() {
        let c = chain_corpus();
        let got = find_conflicts(&c, &ids(&["x", "x2", "x3", "y"])).unwrap();
        assert_eq!(got.len(), 3);
        let explicit: Vec<_> = got
            .iter()
            .filter(|c| c.origin == ConflictOrigin::Explicit)
            .collect();
        assert_eq!(explicit.len(), 1);
        assert_eq!(explicit[0].pair, UnorderedPair::new("x", "y"));
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(sorted, got);
    }

    #[test]
    fn conflicts_for_single_id_are_empty() {
        let c = chain_corpus();
        assert!(find_conflicts(&c, &ids(&["x"])).unwrap().is_empty());
    }

    #[test]
    fn conflicts_reject_unknown_scope_id() {
        let c = chain_corpus();
        assert!(matches!(
            find_conflicts(&c, &ids(&["nope"])),
            Err(Error::UnknownId(id)) if id == "nope"
        ));
    }
}
