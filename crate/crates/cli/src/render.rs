//! Plain-text rendering of reports.

use std::collections::BTreeSet;
use std::fmt::Write;

use reqlattice::finding::Severity;
use reqlattice::optimizer::{GlobalView, OptimizedView};
use reqlattice::partition::{Partition, PartitionSet};
use reqlattice::Role;

use crate::commands::{ChangeBody, ConflictBody, HierarchyBody, RankBody, ScenarioBody, ValidateBody};

/// ANSI styling, off unless `REQLATTICE_COLOR=1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Style {
    pub color: bool,
}

impl Style {
    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn heading(&self, s: &str) -> String {
        self.paint("1", s)
    }

    fn severity(&self, sev: Severity) -> String {
        match sev {
            Severity::Error => self.paint("31", "error"),
            Severity::Warning => self.paint("33", "warning"),
        }
    }
}

fn list(ids: &BTreeSet<String>) -> String {
    if ids.is_empty() {
        "-".to_string()
    } else {
        ids.iter().cloned().collect::<Vec<_>>().join(", ")
    }
}

pub(crate) fn validate(body: &ValidateBody, style: &Style) -> String {
    let c = &body.counts;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} jurisdictions, {} sources, {} requirements, {} components",
        style.heading("corpus:"),
        c.jurisdictions,
        c.sources,
        c.requirements,
        c.components
    );
    let _ = writeln!(s, "level: {}", body.level);
    for f in &body.findings {
        let _ = writeln!(s, "{} {} [{}]: {}", style.severity(f.severity), f.code, f.id, f.message);
    }
    let _ = writeln!(s, "{} error(s), {} warning(s)", body.errors, body.warnings);
    s
}

fn partition_label(p: &Partition) -> String {
    let role = match p.role {
        Role::Source => "sources",
        Role::Requirement => "requirements",
    };
    format!("{} {role}", p.aspect.as_str())
}

pub(crate) fn partitions(parts: &PartitionSet, style: &Style) -> String {
    let mut s = String::new();
    let all = [
        &parts.legal_sources,
        &parts.cultural_sources,
        &parts.legal_requirements,
        &parts.cultural_requirements,
        &parts.functional_requirements,
    ];
    for (i, p) in all.into_iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "{}", style.heading(&format!("{} at {} level", partition_label(p), p.level)));
        let _ = writeln!(s, "  general:");
        if p.general.is_empty() {
            let _ = writeln!(s, "    -");
        }
        for (concept, by_jur) in &p.general {
            let ids: BTreeSet<String> = by_jur.values().flatten().cloned().collect();
            let _ = writeln!(s, "    {concept}: {}", list(&ids));
        }
        let _ = writeln!(s, "  specific:");
        for (jur, ids) in &p.specific {
            let _ = writeln!(s, "    {jur}: {}", list(ids));
        }
    }
    s
}

pub(crate) fn scenarios(body: &ScenarioBody, style: &Style) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", style.heading(&format!("scenarios at {} level", body.level)));
    for e in &body.scenarios {
        match (&e.option, e.option_number) {
            (Some(opt), Some(n)) => {
                let _ = writeln!(s, "  {}: option {n} ({opt}): {}", e.aspect.as_str(), e.note);
            }
            _ => {
                let _ = writeln!(s, "  {}: {}", e.aspect.as_str(), e.note);
            }
        }
    }
    s
}

fn view_lines(s: &mut String, v: &OptimizedView, star: bool, min: bool) {
    if star {
        let _ = writeln!(s, "    strongest: {}", list(&v.strongest));
        for (gone, by) in &v.removed {
            let _ = writeln!(s, "      {gone} is refined by {by}");
        }
    }
    if min {
        let _ = writeln!(s, "    baseline: {}", list(&v.baseline));
    }
}

pub(crate) fn optimized(view: &GlobalView, star: bool, min: bool, style: &Style) -> String {
    let mut s = String::new();
    for (jur, views) in &view.per_jurisdiction {
        let _ = writeln!(s, "{}", style.heading(jur));
        for (aspect, v) in views {
            let _ = writeln!(s, "  {}", aspect.as_str());
            view_lines(&mut s, v, star, min);
        }
    }
    let _ = writeln!(s, "{}", style.heading(&format!("global ({} level)", view.level)));
    for (aspect, v) in &view.global {
        let _ = writeln!(s, "  {}", aspect.as_str());
        view_lines(&mut s, v, star, min);
    }
    let _ = writeln!(s, "conflicts: {}", view.conflicts.len());
    s
}

pub(crate) fn conflicts(body: &ConflictBody, style: &Style) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}",
        style.heading(&format!("{} conflict(s) at {} level", body.conflicts.len(), body.level))
    );
    for c in &body.conflicts {
        let origin = match c.origin {
            reqlattice::relations::ConflictOrigin::Explicit => "declared",
            reqlattice::relations::ConflictOrigin::Derived => "derived",
        };
        let _ = writeln!(s, "  {} x {} ({origin})", c.pair.first(), c.pair.second());
    }
    s
}

pub(crate) fn change(body: &ChangeBody, style: &Style) -> String {
    let r = &body.impact;
    let mut s = String::new();
    let _ = writeln!(s, "{}", style.heading(&format!("change set \"{}\" at {} level", r.label, r.level)));
    for rec in &r.per_op {
        let case = rec
            .case_code
            .map(|c| c.to_string())
            .unwrap_or_else(|| "source change".to_string());
        let op = serde_json::to_value(rec.op)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let _ = writeln!(s, "#{} {op} {}: {case}", rec.index + 1, rec.target);
        let _ = writeln!(s, "  affected: {}", list(&rec.affected));
        if !rec.updated.is_empty() {
            let _ = writeln!(s, "  updated: {}", list(&rec.updated));
        }
        if let Some(split) = &rec.adoption {
            let _ = writeln!(s, "  adopt: {}; keep: {}", list(&split.adopt), list(&split.keep));
        }
        if !rec.counterparts.is_empty() {
            let _ = writeln!(s, "  counterparts: {}", list(&rec.counterparts));
        }
        for m in &rec.migrations {
            let from = if m.from.is_empty() { "-".to_string() } else { m.from.join(", ") };
            let to = if m.to.is_empty() { "-".to_string() } else { m.to.join(", ") };
            let _ = writeln!(s, "  {}: {from} -> {to}", m.id);
        }
        for c in &rec.component_impact {
            let status = serde_json::to_value(c.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            let _ = writeln!(s, "  component {}: {status}", c.component);
        }
        for f in &rec.findings {
            let _ = writeln!(s, "  {} {} [{}]: {}", style.severity(f.severity), f.code, f.id, f.message);
        }
    }
    for h in &body.reuse_hints {
        let _ = writeln!(
            s,
            "reuse: {} can serve {} for {} (op #{})",
            h.component,
            h.for_jurisdiction,
            h.requirement,
            h.op_index + 1
        );
    }
    s
}

pub(crate) fn hierarchy(body: &HierarchyBody, style: &Style) -> String {
    fn walk(body: &HierarchyBody, id: &str, depth: usize, s: &mut String) {
        let node = &body.jurisdictions[id];
        let _ = writeln!(s, "{}{id} ({})", "  ".repeat(depth + 1), node.level);
        for child in &node.children {
            walk(body, child, depth + 1, s);
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, "{}", style.heading("jurisdictions"));
    for (id, node) in &body.jurisdictions {
        if node.parent.is_none() {
            walk(body, id, 0, &mut s);
        }
    }
    let _ = writeln!(s, "{}", style.heading(&format!("frontier at {} level", body.level)));
    for (id, f) in &body.frontier {
        let chain = if f.ancestors.is_empty() {
            String::new()
        } else {
            format!(" (under {})", f.ancestors.join(" < "))
        };
        let _ = writeln!(s, "  {id}{chain}");
        let _ = writeln!(s, "    sources: {}", list(&f.sources));
        let _ = writeln!(s, "    requirements: {}", list(&f.requirements));
    }
    for f in &body.findings {
        let _ = writeln!(s, "{} {} [{}]: {}", style.severity(Severity::Error), f.code.as_str(), f.jurisdiction, f.message);
    }
    s
}

pub(crate) fn ranking(body: &RankBody, style: &Style) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", style.heading("criteria"));
    for c in &body.criteria {
        let dir = match c.direction {
            reqlattice::topsis::Direction::Benefit => "benefit",
            reqlattice::topsis::Direction::Cost => "cost",
        };
        let _ = writeln!(s, "  {} weight {:.4} ({dir})", c.id, c.weight);
    }
    if !body.ranking.dropped_criteria.is_empty() {
        let _ = writeln!(
            s,
            "{}: dropped zero-variance criteria {}",
            style.severity(Severity::Warning),
            body.ranking.dropped_criteria.join(", ")
        );
    }
    let _ = writeln!(s, "{}", style.heading("ranking"));
    for (i, r) in body.ranking.ranked.iter().enumerate() {
        let _ = writeln!(s, "  {}. {} {:.6}", i + 1, r.id, r.closeness);
    }
    s
}
