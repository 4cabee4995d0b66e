//! Corpus (`.reqcorpus.json`) and change-set (`.reqchange.json`) files.
//!
//! Both formats are JSON with a strict schema: unknown fields are rejected.
//! Saving writes a canonical form (object keys sorted, collections sorted by
//! id, two-space indentation, trailing newline), so the bytes are a function
//! of the corpus value alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, ParseError, Result, ValidationCode, ValidationErrors, ValidationIssue};
use crate::model::{
    Component, Corpus, Jurisdiction, RelationSet, Requirement, RequirementKind, Role, SourceItem,
    SourceKind, UnorderedPair,
};
use crate::validate::validate_corpus;

pub const FORMAT_VERSION: u32 = 1;

/// Lowercases, collapses whitespace runs to one space and trims.
pub fn normalize_text(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// SHA-256 of the normalized text, lowercase hex.
pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(normalize_text(text).as_bytes()))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawCorpus {
    format_version: u32,
    #[serde(default)]
    jurisdictions: Vec<Jurisdiction>,
    #[serde(default)]
    sources: Vec<RawSource>,
    #[serde(default)]
    requirements: Vec<RawRequirement>,
    #[serde(default)]
    relations: RawRelations,
    #[serde(default)]
    components: Vec<Component>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawSource {
    id: String,
    kind: SourceKind,
    jurisdiction: String,
    concept_key: String,
    #[serde(default)]
    content_hash: Option<String>,
    text: String,
    #[serde(default)]
    is_static: bool,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawRequirement {
    id: String,
    kind: RequirementKind,
    jurisdiction: String,
    concept_key: String,
    #[serde(default)]
    content_hash: Option<String>,
    #[serde(default)]
    derived_from: BTreeSet<String>,
    text: String,
}

#[derive(Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawRelations {
    #[serde(default)]
    refines: Vec<(String, String)>,
    #[serde(default)]
    contradicts: Vec<(String, String)>,
}

pub(crate) fn parse_json<T: DeserializeOwned>(text: &str, path: Option<&Path>) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(ParseError {
            path: path.map(Path::to_path_buf),
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn insert_unique<T>(
    map: &mut BTreeMap<String, T>,
    id: String,
    value: T,
    what: &str,
    dups: &mut Vec<ValidationIssue>,
) {
    match map.entry(id) {
        std::collections::btree_map::Entry::Occupied(e) => dups.push(ValidationIssue::new(
            ValidationCode::DuplicateId,
            e.key().clone(),
            format!("{what} id `{}` is declared twice", e.key()),
        )),
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
    }
}

/// Parses and validates corpus text. Missing content hashes are computed from
/// the item text.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    parse_corpus_at(text, None)
}

fn parse_corpus_at(text: &str, path: Option<&Path>) -> Result<Corpus> {
    let raw: RawCorpus = parse_json(text, path)?;
    if raw.format_version != FORMAT_VERSION {
        return Err(ValidationErrors::single(ValidationIssue::new(
            ValidationCode::UnsupportedVersion,
            "formatVersion",
            format!(
                "formatVersion {} is not supported (expected {FORMAT_VERSION})",
                raw.format_version
            ),
        ))
        .into());
    }

    let mut dups = Vec::new();
    let mut corpus = Corpus::default();
    for j in raw.jurisdictions {
        insert_unique(&mut corpus.jurisdictions, j.id.clone(), j, "jurisdiction", &mut dups);
    }
    for s in raw.sources {
        let item = SourceItem {
            content_hash: s.content_hash.unwrap_or_else(|| content_hash(&s.text)),
            id: s.id,
            kind: s.kind,
            jurisdiction: s.jurisdiction,
            concept_key: s.concept_key,
            text: s.text,
            is_static: s.is_static,
        };
        insert_unique(&mut corpus.sources, item.id.clone(), item, "source", &mut dups);
    }
    for r in raw.requirements {
        let item = Requirement {
            content_hash: r.content_hash.unwrap_or_else(|| content_hash(&r.text)),
            id: r.id,
            kind: r.kind,
            jurisdiction: r.jurisdiction,
            concept_key: r.concept_key,
            derived_from: r.derived_from,
            text: r.text,
        };
        insert_unique(&mut corpus.requirements, item.id.clone(), item, "requirement", &mut dups);
    }
    for c in raw.components {
        insert_unique(&mut corpus.components, c.id.clone(), c, "component", &mut dups);
    }
    corpus.relations = RelationSet {
        refines: raw.relations.refines.into_iter().collect(),
        contradicts: raw
            .relations
            .contradicts
            .into_iter()
            .map(UnorderedPair::from)
            .collect(),
    };

    let mut issues = dups;
    if let Err(ValidationErrors(more)) = validate_corpus(&corpus) {
        issues.extend(more);
    }
    if issues.is_empty() {
        Ok(corpus)
    } else {
        issues.sort();
        Err(ValidationErrors(issues).into())
    }
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    parse_corpus_at(&read_file(path)?, Some(path))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CanonicalCorpus<'a> {
    format_version: u32,
    jurisdictions: Vec<&'a Jurisdiction>,
    sources: Vec<&'a SourceItem>,
    requirements: Vec<&'a Requirement>,
    relations: &'a RelationSet,
    components: Vec<&'a Component>,
}

/// Serializes any value as canonical JSON: keys sorted, two-space indent,
/// trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // Round-tripping through `Value` sorts every object's keys.
    let v = serde_json::to_value(value).expect("domain values serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn canonical(corpus: &Corpus) -> CanonicalCorpus<'_> {
    CanonicalCorpus {
        format_version: FORMAT_VERSION,
        jurisdictions: corpus.jurisdictions.values().collect(),
        sources: corpus.sources.values().collect(),
        requirements: corpus.requirements.values().collect(),
        relations: &corpus.relations,
        components: corpus.components.values().collect(),
    }
}

pub fn corpus_to_string(corpus: &Corpus) -> String {
    to_canonical_json(&canonical(corpus))
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, corpus_to_string(corpus)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Identifies a corpus value: SHA-256 of its compact serialization. Every
/// collection is an ordered map and struct fields have a fixed order, so the
/// byte stream depends only on the value.
pub fn corpus_fingerprint(corpus: &Corpus) -> String {
    let mut hasher = Sha256::new();
    serde_json::to_writer(&mut hasher, &canonical(corpus)).expect("domain values serialize");
    hex::encode(hasher.finalize())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeKind {
    Add,
    Remove,
    Modify,
}

/// New content for an added or modified item. `role`, `kind` and
/// `jurisdiction` are only accepted on `add`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Payload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jurisdiction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept_key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_static: Option<bool>,
}

impl Payload {
    pub fn text(text: impl Into<String>) -> Self {
        Payload {
            text: Some(text.into()),
            ..Payload::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ChangeOp {
    pub op: ChangeKind,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Payload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adopted_by: Option<BTreeSet<String>>,
}

impl ChangeOp {
    pub fn modify(target: impl Into<String>, payload: Payload) -> Self {
        ChangeOp {
            op: ChangeKind::Modify,
            target: target.into(),
            payload: Some(payload),
            adopted_by: None,
        }
    }

    pub fn adopted_by<I, S>(mut self, jurisdictions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.adopted_by = Some(jurisdictions.into_iter().map(Into::into).collect());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ChangeSet {
    pub label: String,
    #[serde(default)]
    pub ops: Vec<ChangeOp>,
}

impl ChangeSet {
    /// Internal consistency: distinct targets, well-formed payloads.
    pub fn validate(&self) -> Result<(), ValidationErrors> {
        use ValidationCode as C;
        let mut issues = Vec::new();
        let mut seen = BTreeSet::new();
        for op in &self.ops {
            let t = op.target.as_str();
            if t.trim().is_empty() {
                issues.push(ValidationIssue::new(C::EmptyId, t, "change target is empty"));
            }
            if !seen.insert(t) {
                issues.push(ValidationIssue::new(
                    C::DuplicateTarget,
                    t,
                    format!("more than one op targets `{t}`"),
                ));
            }
            if let Some(adopters) = &op.adopted_by {
                if adopters.is_empty() {
                    issues.push(ValidationIssue::new(
                        C::EmptyAdoptedBy,
                        t,
                        format!("adoptedBy for `{t}` is empty"),
                    ));
                }
                if op.op != ChangeKind::Modify {
                    issues.push(ValidationIssue::new(
                        C::InvalidPayload,
                        t,
                        format!("adoptedBy is only meaningful on modify (`{t}`)"),
                    ));
                }
            }
            match (op.op, &op.payload) {
                (ChangeKind::Add, None) | (ChangeKind::Modify, None) => {
                    issues.push(ValidationIssue::new(
                        C::InvalidPayload,
                        t,
                        format!("op on `{t}` needs a payload"),
                    ));
                }
                (ChangeKind::Remove, Some(_)) => issues.push(ValidationIssue::new(
                    C::InvalidPayload,
                    t,
                    format!("remove of `{t}` takes no payload"),
                )),
                (ChangeKind::Add, Some(p)) => {
                    let missing: Vec<&str> = [
                        ("role", p.role.is_none()),
                        ("kind", p.kind.is_none()),
                        ("jurisdiction", p.jurisdiction.is_none()),
                        ("conceptKey", p.concept_key.is_none()),
                        ("text", p.text.is_none()),
                    ]
                    .into_iter()
                    .filter(|(_, m)| *m)
                    .map(|(f, _)| f)
                    .collect();
                    if !missing.is_empty() {
                        issues.push(ValidationIssue::new(
                            C::InvalidPayload,
                            t,
                            format!("add of `{t}` is missing {}", missing.join(", ")),
                        ));
                    }
                }
                (ChangeKind::Modify, Some(p)) => {
                    if p.role.is_some() || p.kind.is_some() || p.jurisdiction.is_some() {
                        issues.push(ValidationIssue::new(
                            C::InvalidPayload,
                            t,
                            format!("modify of `{t}` cannot change role, kind or jurisdiction"),
                        ));
                    }
                }
                (ChangeKind::Remove, None) => {}
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            issues.sort();
            Err(ValidationErrors(issues))
        }
    }

    /// Checks targets and adopters against the corpus the set will be applied to.
    pub fn validate_against(&self, corpus: &Corpus) -> Result<(), ValidationErrors> {
        use ValidationCode as C;
        let mut issues = Vec::new();
        for op in &self.ops {
            let t = op.target.as_str();
            let exists = corpus.item(t).is_some();
            match op.op {
                ChangeKind::Add if exists || corpus.jurisdictions.contains_key(t) || corpus.components.contains_key(t) => {
                    issues.push(ValidationIssue::new(
                        C::TargetExists,
                        t,
                        format!("cannot add `{t}`: id already exists"),
                    ))
                }
                ChangeKind::Modify | ChangeKind::Remove if !exists => issues.push(
                    ValidationIssue::new(C::UnknownTarget, t, format!("no item `{t}` to change")),
                ),
                _ => {}
            }
            for j in op.adopted_by.iter().flatten() {
                if !corpus.jurisdictions.contains_key(j) {
                    issues.push(ValidationIssue::new(
                        C::UnknownJurisdiction,
                        t,
                        format!("adoptedBy of `{t}` names unknown jurisdiction `{j}`"),
                    ));
                }
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            issues.sort();
            Err(ValidationErrors(issues))
        }
    }
}

pub fn parse_change_set(text: &str) -> Result<ChangeSet> {
    parse_change_set_at(text, None)
}

fn parse_change_set_at(text: &str, path: Option<&Path>) -> Result<ChangeSet> {
    let cs: ChangeSet = parse_json(text, path)?;
    cs.validate()?;
    Ok(cs)
}

pub fn load_change_set(path: impl AsRef<Path>) -> Result<ChangeSet> {
    let path = path.as_ref();
    parse_change_set_at(&read_file(path)?, Some(path))
}

pub fn change_set_to_string(cs: &ChangeSet) -> String {
    to_canonical_json(cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Level;

    const MINIMAL: &str = r#"{
        "formatVersion": 1,
        "jurisdictions": [{"id": "de", "name": "Germany", "level": "national"}]
    }"#;

    #[test]
    fn normalization_and_hash() {
        assert_eq!(normalize_text("  Hello \n\t  World  "), "hello world");
        assert_eq!(content_hash("Hello   world"), content_hash("hello world\n"));
        assert_ne!(content_hash("hello world"), content_hash("hello worlds"));
        // sha256("") for the empty normalized text
        assert_eq!(
            content_hash("   "),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn minimal_corpus_loads() {
        let c = parse_corpus(MINIMAL).unwrap();
        assert_eq!(
            (c.jurisdictions.len(), c.sources.len(), c.requirements.len()),
            (1, 0, 0)
        );
        assert_eq!(c.jurisdictions["de"].level, Level::National);
    }

    #[test]
    fn empty_collections_serialize_as_empty_arrays() {
        let c = parse_corpus(MINIMAL).unwrap();
        let text = corpus_to_string(&c);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["sources"], serde_json::json!([]));
        assert_eq!(v["components"], serde_json::json!([]));
        assert_eq!(v["relations"]["refines"], serde_json::json!([]));
        assert_eq!(parse_corpus(&text).unwrap(), c);
    }

    #[test]
    fn dangling_source_reference() {
        let text = r#"{
            "formatVersion": 1,
            "jurisdictions": [{"id": "de", "name": "Germany", "level": "national"}],
            "requirements": [{"id": "r1", "kind": "legalBased", "jurisdiction": "de",
                              "conceptKey": "k", "text": "x", "derivedFrom": ["nope"]}]
        }"#;
        match parse_corpus(text) {
            Err(Error::Validation(e)) => {
                assert_eq!(e.first().code, ValidationCode::DanglingRef);
                assert_eq!(e.first().id, "r1");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_field_is_a_parse_error_with_line() {
        let text = "{\n  \"formatVersion\": 1,\n  \"jurisdictionz\": []\n}";
        match parse_corpus(text) {
            Err(Error::Parse(p)) => {
                assert_eq!(p.line, 3);
                assert!(p.message.contains("jurisdictionz"), "{}", p.message);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_syntax_reports_position() {
        let text = "{\n  \"formatVersion\": 1,\n  \"jurisdictions\": [,]\n}";
        match parse_corpus(text) {
            Err(Error::Parse(p)) => assert_eq!(p.line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn version_is_required_and_checked() {
        assert!(matches!(parse_corpus("{}"), Err(Error::Parse(_))));
        match parse_corpus(r#"{"formatVersion": 2}"#) {
            Err(Error::Validation(e)) => {
                assert_eq!(e.first().code, ValidationCode::UnsupportedVersion)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_are_reported() {
        let text = r#"{
            "formatVersion": 1,
            "jurisdictions": [{"id": "de", "name": "A", "level": "national"},
                              {"id": "de", "name": "B", "level": "national"}]
        }"#;
        match parse_corpus(text) {
            Err(Error::Validation(e)) => {
                assert_eq!(e.first().code, ValidationCode::DuplicateId);
                assert_eq!(e.first().id, "de");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_hash_overrides_computed_one() {
        let text = r#"{
            "formatVersion": 1,
            "jurisdictions": [{"id": "de", "name": "Germany", "level": "national"}],
            "sources": [{"id": "s1", "kind": "legal", "jurisdiction": "de",
                         "conceptKey": "k", "text": "Some Text", "contentHash": "custom"},
                        {"id": "s2", "kind": "cultural", "jurisdiction": "de",
                         "conceptKey": "k", "text": "Some   text"}]
        }"#;
        let c = parse_corpus(text).unwrap();
        assert_eq!(c.sources["s1"].content_hash, "custom");
        assert_eq!(c.sources["s2"].content_hash, content_hash("some text"));
        assert!(!c.sources["s2"].is_static);
    }

    #[test]
    fn canonical_output_sorts_keys() {
        let c = parse_corpus(MINIMAL).unwrap();
        let text = corpus_to_string(&c);
        let keys: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn change_set_single_modify() {
        let cs = parse_change_set(
            r#"{"label": "l", "ops": [{"op": "modify", "target": "r1", "payload": {"text": "new"}}]}"#,
        )
        .unwrap();
        assert_eq!(cs.ops.len(), 1);
        assert_eq!(cs.ops[0].payload.as_ref().unwrap().text.as_deref(), Some("new"));
    }

    #[test]
    fn change_set_duplicate_target() {
        let text = r#"{"label": "l", "ops": [
            {"op": "add", "target": "r9", "payload": {"role": "requirement", "kind": "functional",
              "jurisdiction": "de", "conceptKey": "k", "text": "t"}},
            {"op": "modify", "target": "r9", "payload": {"text": "u"}}]}"#;
        match parse_change_set(text) {
            Err(Error::Validation(e)) => {
                assert_eq!(e.first().code, ValidationCode::DuplicateTarget);
                assert_eq!(e.first().id, "r9");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn change_set_unknown_adopter() {
        let corpus = parse_corpus(
            r#"{
            "formatVersion": 1,
            "jurisdictions": [{"id": "de", "name": "Germany", "level": "national"}],
            "requirements": [{"id": "r1", "kind": "functional", "jurisdiction": "de",
                              "conceptKey": "k", "text": "x"}]
        }"#,
        )
        .unwrap();
        let cs = parse_change_set(
            r#"{"label": "l", "ops": [{"op": "modify", "target": "r1",
                "payload": {"text": "y"}, "adoptedBy": ["fr"]}]}"#,
        )
        .unwrap();
        let e = cs.validate_against(&corpus).unwrap_err();
        assert_eq!(e.first().code, ValidationCode::UnknownJurisdiction);
    }

    #[test]
    fn change_set_payload_rules() {
        let bad = [
            r#"{"label": "l", "ops": [{"op": "modify", "target": "r1"}]}"#,
            r#"{"label": "l", "ops": [{"op": "remove", "target": "r1", "payload": {"text": "x"}}]}"#,
            r#"{"label": "l", "ops": [{"op": "add", "target": "r1", "payload": {"text": "x"}}]}"#,
            r#"{"label": "l", "ops": [{"op": "modify", "target": "r1", "payload": {"kind": "functional"}}]}"#,
            r#"{"label": "l", "ops": [{"op": "modify", "target": "r1", "payload": {"text": "x"}, "adoptedBy": []}]}"#,
        ];
        for text in bad {
            assert!(matches!(parse_change_set(text), Err(Error::Validation(_))), "{text}");
        }
    }
}
