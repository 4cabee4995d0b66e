//! Domain types for a multi-jurisdiction requirements corpus.
//!
//! A [`Corpus`] holds jurisdictions (countries, states, organisations), the
//! regulations and cultural influences attached to them, the requirements
//! elaborated from those sources, declared relations between items and the
//! components implementing requirements. Collections are keyed by id so that
//! every traversal is in lexicographic id order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Hierarchy level of a jurisdiction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    National,
    State,
    Organisational,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::National => "national",
            Level::State => "state",
            Level::Organisational => "organisational",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Jurisdiction {
    pub id: String,
    pub name: String,
    pub level: Level,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Legal,
    Cultural,
}

impl SourceKind {
    pub const ALL: [SourceKind; 2] = [SourceKind::Legal, SourceKind::Cultural];

    pub fn as_str(self) -> &'static str {
        match self {
            SourceKind::Legal => "legal",
            SourceKind::Cultural => "cultural",
        }
    }

    /// The requirement kind elaborated from sources of this kind.
    pub fn requirement_kind(self) -> RequirementKind {
        match self {
            SourceKind::Legal => RequirementKind::LegalBased,
            SourceKind::Cultural => RequirementKind::CulturalBased,
        }
    }
}

/// One regulation/law or one cultural influence of a jurisdiction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SourceItem {
    pub id: String,
    pub kind: SourceKind,
    pub jurisdiction: String,
    pub concept_key: String,
    pub content_hash: String,
    pub text: String,
    /// Expected not to change over time (typical for cultural influences).
    pub is_static: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RequirementKind {
    LegalBased,
    CulturalBased,
    Functional,
}

impl RequirementKind {
    pub const ALL: [RequirementKind; 3] = [
        RequirementKind::LegalBased,
        RequirementKind::CulturalBased,
        RequirementKind::Functional,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RequirementKind::LegalBased => "legalBased",
            RequirementKind::CulturalBased => "culturalBased",
            RequirementKind::Functional => "functional",
        }
    }

    /// Kind of source this requirement may be derived from; `None` for functional.
    pub fn source_kind(self) -> Option<SourceKind> {
        match self {
            RequirementKind::LegalBased => Some(SourceKind::Legal),
            RequirementKind::CulturalBased => Some(SourceKind::Cultural),
            RequirementKind::Functional => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Requirement {
    pub id: String,
    pub kind: RequirementKind,
    pub jurisdiction: String,
    pub concept_key: String,
    pub content_hash: String,
    /// Source items this requirement was elaborated from.
    pub derived_from: BTreeSet<String>,
    pub text: String,
}

/// An unordered pair of distinct ids, stored with the smaller id first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(String, String)", into = "(String, String)")]
pub struct UnorderedPair(String, String);

impl UnorderedPair {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            UnorderedPair(a, b)
        } else {
            UnorderedPair(b, a)
        }
    }

    pub fn first(&self) -> &str {
        &self.0
    }

    pub fn second(&self) -> &str {
        &self.1
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0 == id || self.1 == id
    }

    pub fn is_reflexive(&self) -> bool {
        self.0 == self.1
    }
}

impl From<(String, String)> for UnorderedPair {
    fn from((a, b): (String, String)) -> Self {
        UnorderedPair::new(a, b)
    }
}

impl From<UnorderedPair> for (String, String) {
    fn from(p: UnorderedPair) -> Self {
        (p.0, p.1)
    }
}

impl fmt::Display for UnorderedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// Declared relations. `refines` holds `(a, b)` meaning `a` refines (is
/// stronger than) `b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RelationSet {
    #[serde(default)]
    pub refines: BTreeSet<(String, String)>,
    #[serde(default)]
    pub contradicts: BTreeSet<UnorderedPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentScope {
    General,
    Specific(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Component {
    pub id: String,
    pub implements: BTreeSet<String>,
    pub scope: ComponentScope,
}

/// Role of an item taking part in relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Role {
    Source,
    Requirement,
}

/// Role together with kind; relations may only connect items of the same class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ItemClass {
    Source(SourceKind),
    Requirement(RequirementKind),
}

impl ItemClass {
    pub fn role(self) -> Role {
        match self {
            ItemClass::Source(_) => Role::Source,
            ItemClass::Requirement(_) => Role::Requirement,
        }
    }
}

impl fmt::Display for ItemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemClass::Source(k) => write!(f, "{} source", k.as_str()),
            ItemClass::Requirement(k) => write!(f, "{} requirement", k.as_str()),
        }
    }
}

/// Borrowed view of either a source item or a requirement.
#[derive(Debug, Clone, Copy)]
pub enum ItemRef<'a> {
    Source(&'a SourceItem),
    Requirement(&'a Requirement),
}

impl<'a> ItemRef<'a> {
    pub fn id(&self) -> &'a str {
        match self {
            ItemRef::Source(s) => &s.id,
            ItemRef::Requirement(r) => &r.id,
        }
    }

    pub fn class(&self) -> ItemClass {
        match self {
            ItemRef::Source(s) => ItemClass::Source(s.kind),
            ItemRef::Requirement(r) => ItemClass::Requirement(r.kind),
        }
    }

    pub fn jurisdiction(&self) -> &'a str {
        match self {
            ItemRef::Source(s) => &s.jurisdiction,
            ItemRef::Requirement(r) => &r.jurisdiction,
        }
    }

    pub fn concept_key(&self) -> &'a str {
        match self {
            ItemRef::Source(s) => &s.concept_key,
            ItemRef::Requirement(r) => &r.concept_key,
        }
    }

    pub fn content_hash(&self) -> &'a str {
        match self {
            ItemRef::Source(s) => &s.content_hash,
            ItemRef::Requirement(r) => &r.content_hash,
        }
    }
}

impl<'a> From<&'a SourceItem> for ItemRef<'a> {
    fn from(s: &'a SourceItem) -> Self {
        ItemRef::Source(s)
    }
}

impl<'a> From<&'a Requirement> for ItemRef<'a> {
    fn from(r: &'a Requirement) -> Self {
        ItemRef::Requirement(r)
    }
}

/// The complete modeled universe. Immutable once validated; the change
/// engine produces new values instead of editing in place.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub jurisdictions: BTreeMap<String, Jurisdiction>,
    pub sources: BTreeMap<String, SourceItem>,
    pub requirements: BTreeMap<String, Requirement>,
    pub relations: RelationSet,
    pub components: BTreeMap<String, Component>,
}

impl Corpus {
    pub fn item(&self, id: &str) -> Option<ItemRef<'_>> {
        if let Some(s) = self.sources.get(id) {
            return Some(ItemRef::Source(s));
        }
        self.requirements.get(id).map(ItemRef::Requirement)
    }

    /// Ids of every source item and requirement.
    pub fn item_ids(&self) -> BTreeSet<String> {
        self.sources
            .keys()
            .chain(self.requirements.keys())
            .cloned()
            .collect()
    }

    /// Ancestors of `id`, nearest first. Stops at unknown parents and cycles.
    pub fn ancestors(&self, id: &str) -> Vec<&Jurisdiction> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        seen.insert(id.to_string());
        let mut cur = self.jurisdictions.get(id).and_then(|j| j.parent.as_deref());
        while let Some(pid) = cur {
            if !seen.insert(pid.to_string()) {
                break;
            }
            match self.jurisdictions.get(pid) {
                Some(p) => {
                    out.push(p);
                    cur = p.parent.as_deref();
                }
                None => break,
            }
        }
        out
    }

    /// True if `ancestor` equals `node` or lies on its parent chain.
    pub fn is_self_or_ancestor(&self, ancestor: &str, node: &str) -> bool {
        ancestor == node || self.ancestors(node).iter().any(|a| a.id == ancestor)
    }

    pub fn requirements_of_kind(&self, kind: RequirementKind) -> impl Iterator<Item = &Requirement> {
        self.requirements.values().filter(move |r| r.kind == kind)
    }

    pub fn sources_of_kind(&self, kind: SourceKind) -> impl Iterator<Item = &SourceItem> {
        self.sources.values().filter(move |s| s.kind == kind)
    }
}
