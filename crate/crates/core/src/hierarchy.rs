//! Organisational / state / national levels.
//!
//! Organisations refine states (or nations directly) and states refine
//! nations, so jurisdictions form a forest rooted at national nodes. Analysis
//! at a level treats each node of that level (the frontier) as one
//! jurisdiction whose items are its own plus those inherited from ancestors.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Corpus, Level, Role};
use crate::relations::RefinementIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HierarchyCode {
    LevelOrder,
    OrgWithoutAncestor,
    OrphanState,
    UnknownParent,
    ParentCycle,
}

impl HierarchyCode {
    pub fn as_str(self) -> &'static str {
        match self {
            HierarchyCode::LevelOrder => "LEVEL_ORDER",
            HierarchyCode::OrgWithoutAncestor => "ORG_WITHOUT_ANCESTOR",
            HierarchyCode::OrphanState => "ORPHAN_STATE",
            HierarchyCode::UnknownParent => "UNKNOWN_PARENT",
            HierarchyCode::ParentCycle => "PARENT_CYCLE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HierarchyFinding {
    pub code: HierarchyCode,
    pub jurisdiction: String,
    pub message: String,
}

/// Checks the level order of the jurisdiction forest. Findings are sorted.
pub fn validate_hierarchy(corpus: &Corpus) -> Vec<HierarchyFinding> {
    let mut out = Vec::new();
    let mut push = |code, id: &str, message: String| {
        out.push(HierarchyFinding {
            code,
            jurisdiction: id.to_string(),
            message,
        })
    };

    for j in corpus.jurisdictions.values() {
        let parent = match &j.parent {
            None => {
                match j.level {
                    Level::National => {}
                    Level::State => push(
                        HierarchyCode::OrphanState,
                        &j.id,
                        format!("state `{}` has no national parent", j.id),
                    ),
                    Level::Organisational => push(
                        HierarchyCode::OrgWithoutAncestor,
                        &j.id,
                        format!("organisation `{}` is not under a state or national node", j.id),
                    ),
                }
                continue;
            }
            Some(pid) => match corpus.jurisdictions.get(pid) {
                Some(p) => p,
                None => {
                    push(
                        HierarchyCode::UnknownParent,
                        &j.id,
                        format!("parent `{pid}` of `{}` does not exist", j.id),
                    );
                    continue;
                }
            },
        };
        let allowed = match j.level {
            Level::National => false,
            Level::State => parent.level == Level::National,
            Level::Organisational => matches!(parent.level, Level::State | Level::National),
        };
        if !allowed {
            push(
                HierarchyCode::LevelOrder,
                &j.id,
                format!(
                    "{} `{}` cannot have {} parent `{}`",
                    j.level, j.id, parent.level, parent.id
                ),
            );
        }
    }

    for j in corpus.jurisdictions.values() {
        let mut seen = BTreeSet::new();
        let mut cur = Some(j.id.as_str());
        while let Some(id) = cur {
            if !seen.insert(id) {
                if id == j.id {
                    push(
                        HierarchyCode::ParentCycle,
                        &j.id,
                        format!("`{}` is its own ancestor", j.id),
                    );
                }
                break;
            }
            cur = corpus.jurisdictions.get(id).and_then(|x| x.parent.as_deref());
        }
    }

    out.sort();
    out
}

/// The jurisdictions analyzed at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSelection {
    pub level: Level,
    pub frontier: BTreeSet<String>,
}

impl LevelSelection {
    pub fn len(&self) -> usize {
        self.frontier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frontier.is_empty()
    }
}

pub fn select_level(corpus: &Corpus, level: Level) -> Result<LevelSelection> {
    let frontier: BTreeSet<String> = corpus
        .jurisdictions
        .values()
        .filter(|j| j.level == level)
        .map(|j| j.id.clone())
        .collect();
    if frontier.is_empty() {
        return Err(Error::EmptyFrontier(level));
    }
    Ok(LevelSelection { level, frontier })
}

/// Items attached to `node` or its ancestors, minus ancestor items that a
/// nearer item refines.
pub fn effective_items(
    corpus: &Corpus,
    index: &RefinementIndex,
    node: &str,
    role: Role,
) -> Result<BTreeSet<String>> {
    if !corpus.jurisdictions.contains_key(node) {
        return Err(Error::UnknownId(node.to_string()));
    }
    let mut depth: BTreeMap<&str, usize> = BTreeMap::new();
    depth.insert(node, 0);
    for (i, a) in corpus.ancestors(node).into_iter().enumerate() {
        depth.insert(a.id.as_str(), i + 1);
    }

    let attached: Vec<(&str, usize)> = match role {
        Role::Requirement => corpus
            .requirements
            .values()
            .filter_map(|r| depth.get(r.jurisdiction.as_str()).map(|&d| (r.id.as_str(), d)))
            .collect(),
        Role::Source => corpus
            .sources
            .values()
            .filter_map(|s| depth.get(s.jurisdiction.as_str()).map(|&d| (s.id.as_str(), d)))
            .collect(),
    };
    let item_depth: BTreeMap<&str, usize> = attached.iter().copied().collect();

    Ok(attached
        .iter()
        .filter(|(id, d)| {
            !index
                .stronger_than(id)
                .any(|s| item_depth.get(s).is_some_and(|sd| sd < d))
        })
        .map(|(id, _)| id.to_string())
        .collect())
}

pub fn effective_requirements(corpus: &Corpus, node: &str) -> Result<BTreeSet<String>> {
    let index = RefinementIndex::build(&corpus.relations)?;
    effective_items(corpus, &index, node, Role::Requirement)
}

pub fn effective_sources(corpus: &Corpus, node: &str) -> Result<BTreeSet<String>> {
    let index = RefinementIndex::build(&corpus.relations)?;
    effective_items(corpus, &index, node, Role::Source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Jurisdiction, Requirement, RequirementKind};

    fn jur(id: &str, level: Level, parent: Option<&str>) -> Jurisdiction {
        Jurisdiction {
            id: id.into(),
            name: id.to_uppercase(),
            level,
            parent: parent.map(str::to_string),
        }
    }

    fn req(id: &str, jur: &str) -> Requirement {
        Requirement {
            id: id.into(),
            kind: RequirementKind::Functional,
            jurisdiction: jur.into(),
            concept_key: id.into(),
            content_hash: id.into(),
            derived_from: BTreeSet::new(),
            text: String::new(),
        }
    }

    fn three_level() -> Corpus {
        let mut c = Corpus::default();
        for j in [
            jur("nat", Level::National, None),
            jur("st", Level::State, Some("nat")),
            jur("org", Level::Organisational, Some("st")),
        ] {
            c.jurisdictions.insert(j.id.clone(), j);
        }
        for r in [req("r-nat", "nat"), req("r-st", "st"), req("r-org", "org")] {
            c.requirements.insert(r.id.clone(), r);
        }
        c
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn plain_union_without_refinement() {
        let c = three_level();
        assert_eq!(
            effective_requirements(&c, "org").unwrap(),
            set(&["r-nat", "r-org", "r-st"])
        );
    }

    #[test]
    fn org_refinement_shadows_national_requirement() {
        let mut c = three_level();
        c.relations.refines.insert(("r-org".into(), "r-nat".into()));
        assert_eq!(
            effective_requirements(&c, "org").unwrap(),
            set(&["r-org", "r-st"])
        );
        // the state does not see r-org, so nothing is shadowed there
        assert_eq!(
            effective_requirements(&c, "st").unwrap(),
            set(&["r-nat", "r-st"])
        );
    }

    #[test]
    fn shadowing_never_removes_own_items() {
        let mut c = three_level();
        c.relations.refines.insert(("r-nat".into(), "r-org".into()));
        assert!(effective_requirements(&c, "org").unwrap().contains("r-org"));
    }

    #[test]
    fn root_sees_only_its_own() {
        let c = three_level();
        assert_eq!(effective_requirements(&c, "nat").unwrap(), set(&["r-nat"]));
    }

    #[test]
    fn unknown_node_is_an_error() {
        let c = three_level();
        assert!(matches!(
            effective_requirements(&c, "zz"),
            Err(Error::UnknownId(_))
        ));
    }

    #[test]
    fn well_formed_two_country_tree_has_no_findings() {
        let mut c = Corpus::default();
        for j in [
            jur("de", Level::National, None),
            jur("de-by", Level::State, Some("de")),
            jur("au", Level::National, None),
            jur("au-nsw", Level::State, Some("au")),
            jur("acme-syd", Level::Organisational, Some("au-nsw")),
            jur("acme-de", Level::Organisational, Some("de")),
        ] {
            c.jurisdictions.insert(j.id.clone(), j);
        }
        assert!(validate_hierarchy(&c).is_empty());
    }

    #[test]
    fn parentless_org_is_reported() {
        let mut c = Corpus::default();
        c.jurisdictions
            .insert("o".into(), jur("o", Level::Organisational, None));
        let f = validate_hierarchy(&c);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].code, HierarchyCode::OrgWithoutAncestor);
        assert_eq!(f[0].jurisdiction, "o");
    }

    #[test]
    fn state_under_state_violates_level_order() {
        let mut c = Corpus::default();
        for j in [
            jur("n", Level::National, None),
            jur("s1", Level::State, Some("n")),
            jur("s2", Level::State, Some("s1")),
        ] {
            c.jurisdictions.insert(j.id.clone(), j);
        }
        let f = validate_hierarchy(&c);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].code, HierarchyCode::LevelOrder);
        assert_eq!(f[0].jurisdiction, "s2");
    }

    #[test]
    fn orphans_unknown_parents_and_cycles() {
        let mut c = Corpus::default();
        for j in [
            jur("s", Level::State, None),
            jur("o", Level::Organisational, Some("ghost")),
            jur("a", Level::National, Some("b")),
            jur("b", Level::National, Some("a")),
        ] {
            c.jurisdictions.insert(j.id.clone(), j);
        }
        let codes: Vec<_> = validate_hierarchy(&c).into_iter().map(|f| f.code).collect();
        assert!(codes.contains(&HierarchyCode::OrphanState));
        assert!(codes.contains(&HierarchyCode::UnknownParent));
        assert!(codes.contains(&HierarchyCode::ParentCycle));
        assert!(codes.contains(&HierarchyCode::LevelOrder));
    }

    #[test]
    fn select_level_picks_frontier() {
        let c = three_level();
        assert_eq!(
            select_level(&c, Level::State).unwrap().frontier,
            set(&["st"])
        );
        let mut flat = Corpus::default();
        flat.jurisdictions
            .insert("n".into(), jur("n", Level::National, None));
        assert!(matches!(
            select_level(&flat, Level::Organisational),
            Err(Error::EmptyFrontier(Level::Organisational))
        ));
    }
}
