use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use reqlattice::change::{apply_change_set, reuse_hints, ImpactReport, ReuseHint};
use reqlattice::corpus_io::{load_change_set, load_corpus, save_corpus};
use reqlattice::finding::{Finding, FindingCode, Severity};
use reqlattice::hierarchy::{effective_items, select_level, validate_hierarchy, HierarchyFinding, LevelSelection};
use reqlattice::optimizer::global_view;
use reqlattice::partition::{
    check_elaboration, check_specific_contradiction_condition, classify_scenario,
    component_scope_findings, Aspect, PartitionSet,
};
use reqlattice::relations::{Conflict, RefinementIndex};
use reqlattice::topsis::{
    build_conflict_matrix, load_alternatives, load_matrix, rank_alternatives, DecisionMatrix, Direction,
    Ranking,
};
use reqlattice::{Corpus, Error, Level, Role};
use serde::Serialize;

use crate::render;
use crate::{Context, ExitStatus, Failure, Report};

fn load(cx: &Context) -> Result<(Corpus, LevelSelection), Failure> {
    let corpus = load_corpus(cx.corpus_path()?)?;
    let selection = select_level(&corpus, cx.level)?;
    Ok((corpus, selection))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct Counts {
    pub jurisdictions: usize,
    pub sources: usize,
    pub requirements: usize,
    pub components: usize,
    pub refines: usize,
    pub contradicts: usize,
}

impl Counts {
    fn of(c: &Corpus) -> Self {
        Counts {
            jurisdictions: c.jurisdictions.len(),
            sources: c.sources.len(),
            requirements: c.requirements.len(),
            components: c.components.len(),
            refines: c.relations.refines.len(),
            contradicts: c.relations.contradicts.len(),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct ValidateBody {
    pub level: Level,
    pub counts: Counts,
    pub errors: usize,
    pub warnings: usize,
    pub findings: Vec<Finding>,
}

pub(crate) fn validate(cx: &Context) -> Result<Report, Failure> {
    let (corpus, selection) = load(cx)?;
    let parts = PartitionSet::compute(&corpus, &selection)?;
    let mut findings = check_elaboration(
        &corpus,
        (&parts.legal_sources, &parts.cultural_sources),
        &parts.requirement_partitions(),
    )?;
    findings.extend(check_specific_contradiction_condition(&corpus, &parts.legal_sources)?);
    findings.extend(check_specific_contradiction_condition(&corpus, &parts.cultural_sources)?);
    findings.extend(component_scope_findings(&corpus, &parts));
    findings.sort();
    let errors = findings.iter().filter(|f| f.severity == Severity::Error).count();
    let body = ValidateBody {
        level: selection.level,
        counts: Counts::of(&corpus),
        errors,
        warnings: findings.len() - errors,
        findings,
    };
    let status = if body.errors > 0 {
        ExitStatus::INVALID
    } else if cx.strict && body.findings.iter().any(|f| f.code == FindingCode::NoCrossContradiction) {
        ExitStatus::STRICT_FINDINGS
    } else {
        ExitStatus::SUCCESS
    };
    let text = render::validate(&body, &cx.style);
    Ok(Report::new("validation", &body, text).with_status(status))
}

pub(crate) fn partition(cx: &Context) -> Result<Report, Failure> {
    let (corpus, selection) = load(cx)?;
    let parts = PartitionSet::compute(&corpus, &selection)?;
    let text = render::partitions(&parts, &cx.style);
    Ok(Report::new("partition", &parts, text))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct ScenarioEntry {
    pub aspect: Aspect,
    pub option: Option<String>,
    pub option_number: Option<u8>,
    pub note: String,
}

#[derive(Serialize)]
pub(crate) struct ScenarioBody {
    pub level: Level,
    pub scenarios: Vec<ScenarioEntry>,
}

pub(crate) fn scenario(cx: &Context) -> Result<Report, Failure> {
    let (corpus, selection) = load(cx)?;
    let parts = PartitionSet::compute(&corpus, &selection)?;
    let mut scenarios = Vec::new();
    for part in [&parts.legal_sources, &parts.cultural_sources] {
        scenarios.push(match classify_scenario(part) {
            Ok(s) => ScenarioEntry {
                aspect: s.aspect,
                option: Some(s.option.as_str().to_string()),
                option_number: Some(s.option.number()),
                note: s.note,
            },
            Err(Error::EmptyAspect(_)) => ScenarioEntry {
                aspect: part.aspect,
                option: None,
                option_number: None,
                note: "no items of this aspect".into(),
            },
            Err(e) => return Err(e.into()),
        });
    }
    let body = ScenarioBody {
        level: selection.level,
        scenarios,
    };
    let text = render::scenarios(&body, &cx.style);
    Ok(Report::new("scenario", &body, text))
}

/// Keeps only the requested halves of every optimized view.
fn filter_views(value: &mut serde_json::Value, star: bool, min: bool) {
    match value {
        serde_json::Value::Object(map) => {
            if map.contains_key("strongest") && map.contains_key("baseline") {
                if !star {
                    map.remove("strongest");
                    map.remove("removed");
                }
                if !min {
                    map.remove("baseline");
                }
                return;
            }
            for v in map.values_mut() {
                filter_views(v, star, min);
            }
        }
        serde_json::Value::Array(items) => {
            for v in items {
                filter_views(v, star, min);
            }
        }
        _ => {}
    }
}

pub(crate) fn optimize(cx: &Context, star: bool, min: bool) -> Result<Report, Failure> {
    let (corpus, selection) = load(cx)?;
    let view = global_view(&corpus, &selection)?;
    let text = render::optimized(&view, star, min, &cx.style);
    let mut report = Report::new("optimization", &view, text);
    filter_views(&mut report.body, star, min);
    Ok(report)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct ConflictBody {
    pub level: Level,
    pub conflicts: Vec<Conflict>,
    pub conflicting_requirements: BTreeSet<String>,
}

pub(crate) fn conflicts(cx: &Context) -> Result<Report, Failure> {
    let (corpus, selection) = load(cx)?;
    let view = global_view(&corpus, &selection)?;
    let body = ConflictBody {
        level: selection.level,
        conflicting_requirements: view.conflicting_requirements(),
        conflicts: view.conflicts,
    };
    let status = if cx.strict && !body.conflicts.is_empty() {
        ExitStatus::STRICT_FINDINGS
    } else {
        ExitStatus::SUCCESS
    };
    let text = render::conflicts(&body, &cx.style);
    Ok(Report::new("conflicts", &body, text).with_status(status))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct ChangeBody {
    pub impact: ImpactReport,
    pub reuse_hints: Vec<ReuseHint>,
}

pub(crate) fn change(cx: &Context, changes: &Path) -> Result<Report, Failure> {
    let corpus = load_corpus(cx.corpus_path()?)?;
    let cs = load_change_set(changes)?;
    cs.validate_against(&corpus).map_err(Error::from)?;
    let (next, impact) = apply_change_set(&corpus, cx.level, &cs)?;
    if let Some(out) = &cx.out {
        save_corpus(&next, out)?;
    }
    let body = ChangeBody {
        reuse_hints: reuse_hints(&impact, &next),
        impact,
    };
    let text = render::change(&body, &cx.style);
    Ok(Report::new("impact", &body, text))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct NodeView {
    pub level: Level,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    pub children: BTreeSet<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct FrontierView {
    /// Nearest first.
    pub ancestors: Vec<String>,
    pub sources: BTreeSet<String>,
    pub requirements: BTreeSet<String>,
}

#[derive(Serialize)]
pub(crate) struct HierarchyBody {
    pub level: Level,
    pub jurisdictions: BTreeMap<String, NodeView>,
    pub frontier: BTreeMap<String, FrontierView>,
    pub findings: Vec<HierarchyFinding>,
}

pub(crate) fn hierarchy(cx: &Context) -> Result<Report, Failure> {
    let (corpus, selection) = load(cx)?;
    let index = RefinementIndex::build(&corpus.relations)?;
    let mut jurisdictions: BTreeMap<String, NodeView> = corpus
        .jurisdictions
        .values()
        .map(|j| {
            let node = NodeView {
                level: j.level,
                parent: j.parent.clone(),
                children: BTreeSet::new(),
            };
            (j.id.clone(), node)
        })
        .collect();
    for j in corpus.jurisdictions.values() {
        if let Some(p) = j.parent.as_ref().and_then(|p| jurisdictions.get_mut(p)) {
            p.children.insert(j.id.clone());
        }
    }
    let mut frontier = BTreeMap::new();
    for node in &selection.frontier {
        frontier.insert(
            node.clone(),
            FrontierView {
                ancestors: corpus.ancestors(node).iter().map(|a| a.id.clone()).collect(),
                sources: effective_items(&corpus, &index, node, Role::Source)?,
                requirements: effective_items(&corpus, &index, node, Role::Requirement)?,
            },
        );
    }
    let body = HierarchyBody {
        level: selection.level,
        jurisdictions,
        frontier,
        findings: validate_hierarchy(&corpus),
    };
    let text = render::hierarchy(&body, &cx.style);
    Ok(Report::new("hierarchy", &body, text))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct CriterionView {
    pub id: String,
    pub weight: f64,
    pub original_weight: f64,
    pub direction: Direction,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct RankBody {
    pub criteria: Vec<CriterionView>,
    pub ranking: Ranking,
}

pub(crate) fn rank(cx: &Context, alternatives: Option<&Path>, matrix: Option<&Path>) -> Result<Report, Failure> {
    let m: DecisionMatrix = match (alternatives, matrix) {
        (_, Some(path)) => load_matrix(path)?,
        (Some(path), None) => {
            let (corpus, selection) = load(cx)?;
            let view = global_view(&corpus, &selection)?;
            let alts = load_alternatives(path)?;
            build_conflict_matrix(&view.conflicting_requirements(), &alts)?
        }
        (None, None) => return Err(Failure::Usage("rank needs --alternatives or --matrix".into())),
    };
    let ranking = rank_alternatives(&m)?;
    let body = RankBody {
        criteria: m
            .criteria
            .iter()
            .zip(&m.original_weights)
            .map(|(c, w)| CriterionView {
                id: c.id.clone(),
                weight: c.weight,
                original_weight: *w,
                direction: c.direction,
            })
            .collect(),
        ranking,
    };
    let text = render::ranking(&body, &cx.style);
    Ok(Report::new("ranking", &body, text))
}
