//! Brute-force reference implementations, written without the library's
//! indexes, used to cross-check the real algorithms.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use reqlattice::model::{Corpus, Level, RelationSet, Role, UnorderedPair};

/// Everything reachable from `from` along direct refinement edges.
pub fn reachable(rel: &RelationSet, from: &str) -> BTreeSet<String> {
    let mut next: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in &rel.refines {
        next.entry(a).or_default().push(b);
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([from]);
    while let Some(cur) = queue.pop_front() {
        for b in next.get(cur).into_iter().flatten() {
            if seen.insert(b.to_string()) {
                queue.push_back(b);
            }
        }
    }
    seen
}

pub fn closure_by_paths(rel: &RelationSet, ids: &BTreeSet<String>) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for a in ids {
        for b in reachable(rel, a) {
            if ids.contains(&b) && *a != b {
                out.insert((a.clone(), b));
            }
        }
    }
    out
}

/// Repeatedly applies "if z refines x and x contradicts y then z contradicts
/// y" one edge at a time until nothing changes.
pub fn contradictions_fixpoint(rel: &RelationSet) -> BTreeSet<UnorderedPair> {
    let mut cur: BTreeSet<(String, String)> = BTreeSet::new();
    for p in &rel.contradicts {
        cur.insert((p.first().to_string(), p.second().to_string()));
        cur.insert((p.second().to_string(), p.first().to_string()));
    }
    loop {
        let mut next = cur.clone();
        for (x, y) in &cur {
            for (z, w) in &rel.refines {
                if w == x {
                    next.insert((z.clone(), y.clone()));
                    next.insert((y.clone(), z.clone()));
                }
            }
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    cur.into_iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| UnorderedPair::new(a, b))
        .collect()
}

pub fn maximal_by_pairs(rel: &RelationSet, ids: &BTreeSet<String>) -> BTreeSet<String> {
    ids.iter()
        .filter(|x| !ids.iter().any(|y| reachable(rel, y).contains(*x)))
        .cloned()
        .collect()
}

pub fn minimal_by_pairs(rel: &RelationSet, ids: &BTreeSet<String>) -> BTreeSet<String> {
    ids.iter()
        .filter(|x| !reachable(rel, x).iter().any(|y| ids.contains(y)))
        .cloned()
        .collect()
}

pub fn frontier(corpus: &Corpus, level: Level) -> BTreeSet<String> {
    corpus
        .jurisdictions
        .values()
        .filter(|j| j.level == level)
        .map(|j| j.id.clone())
        .collect()
}

/// Chain from `node` upwards with depths, following parents by hand.
fn chain(corpus: &Corpus, node: &str) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    let mut cur = Some(node.to_string());
    let mut d = 0;
    while let Some(id) = cur {
        if out.contains_key(&id) {
            break;
        }
        out.insert(id.clone(), d);
        d += 1;
        cur = corpus.jurisdictions.get(&id).and_then(|j| j.parent.clone());
    }
    out
}

/// Items of the given role held by `node`: its own and its ancestors', minus
/// ancestor items refined by something held nearer to the node.
pub fn held(corpus: &Corpus, node: &str, role: Role) -> BTreeSet<String> {
    let depth = chain(corpus, node);
    let items: Vec<(String, String)> = match role {
        Role::Source => corpus
            .sources
            .values()
            .map(|s| (s.id.clone(), s.jurisdiction.clone()))
            .collect(),
        Role::Requirement => corpus
            .requirements
            .values()
            .map(|r| (r.id.clone(), r.jurisdiction.clone()))
            .collect(),
    };
    let attached: Vec<(String, usize)> = items
        .into_iter()
        .filter_map(|(id, j)| depth.get(&j).map(|d| (id, *d)))
        .collect();
    let below: BTreeMap<&String, BTreeSet<String>> = attached
        .iter()
        .map(|(y, _)| (y, reachable(&corpus.relations, y)))
        .collect();
    attached
        .iter()
        .filter(|(x, dx)| !attached.iter().any(|(y, dy)| dy < dx && below[y].contains(x)))
        .map(|(x, _)| x.clone())
        .collect()
}

pub struct OraclePartition {
    pub general_concepts: BTreeSet<String>,
    pub general_ids: BTreeSet<String>,
    pub specific: BTreeMap<String, BTreeSet<String>>,
}

/// Per-concept check: a concept is general iff every frontier node holds an
/// item of it and all those items share one content hash.
pub fn partition_oracle(
    corpus: &Corpus,
    level: Level,
    role: Role,
    keep: impl Fn(&str) -> bool,
) -> OraclePartition {
    let nodes = frontier(corpus, level);
    let held: BTreeMap<String, BTreeSet<String>> = nodes
        .iter()
        .map(|n| {
            let ids = held(corpus, n, role).into_iter().filter(|id| keep(id)).collect();
            (n.clone(), ids)
        })
        .collect();
    let concept_of = |id: &str| corpus.item(id).unwrap().concept_key().to_string();
    let hash_of = |id: &str| corpus.item(id).unwrap().content_hash().to_string();
    let concepts: BTreeSet<String> = held.values().flatten().map(|id| concept_of(id)).collect();
    let mut general_concepts = BTreeSet::new();
    for c in &concepts {
        let everywhere = held.values().all(|ids| ids.iter().any(|id| concept_of(id) == *c));
        let hashes: BTreeSet<String> = held
            .values()
            .flatten()
            .filter(|id| concept_of(id) == *c)
            .map(|id| hash_of(id))
            .collect();
        if everywhere && hashes.len() == 1 {
            general_concepts.insert(c.clone());
        }
    }
    let general_ids = held
        .values()
        .flatten()
        .filter(|id| general_concepts.contains(&concept_of(id)))
        .cloned()
        .collect();
    let specific = held
        .into_iter()
        .map(|(n, ids)| {
            let ids = ids
                .into_iter()
                .filter(|id| !general_concepts.contains(&concept_of(id)))
                .collect();
            (n, ids)
        })
        .collect();
    OraclePartition {
        general_concepts,
        general_ids,
        specific,
    }
}
