//! TOPSIS ranking of candidate conflict resolutions.
//!
//! Classical variant: vector normalization per column, weighted, Euclidean
//! distances to the ideal and anti-ideal points, closeness
//! `d- / (d+ + d-)`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus_io::{parse_json, read_file};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Benefit,
    Cost,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub id: String,
    /// Normalized weight; all weights of a matrix sum to 1.
    pub weight: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecisionMatrix {
    pub alternatives: Vec<String>,
    pub criteria: Vec<Criterion>,
    /// Weights as supplied, before normalization.
    pub original_weights: Vec<f64>,
    /// Rows are alternatives, columns criteria.
    pub values: Vec<Vec<f64>>,
}

impl DecisionMatrix {
    /// Builds a matrix from raw (unnormalized) weights.
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<(String, f64, Direction)>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let unique: BTreeSet<&String> = alternatives.iter().collect();
        if unique.len() != alternatives.len() {
            return Err(Error::InvalidMatrix("duplicate alternative id".into()));
        }
        let crit_ids: BTreeSet<&String> = criteria.iter().map(|c| &c.0).collect();
        if crit_ids.len() != criteria.len() {
            return Err(Error::InvalidMatrix("duplicate criterion id".into()));
        }
        if values.len() != alternatives.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} rows for {} alternatives",
                values.len(),
                alternatives.len()
            )));
        }
        for (alt, row) in alternatives.iter().zip(&values) {
            if row.len() != criteria.len() {
                return Err(Error::InvalidMatrix(format!(
                    "row `{alt}` has {} values for {} criteria",
                    row.len(),
                    criteria.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidMatrix(format!("row `{alt}` holds non-finite value {v}")));
            }
        }
        if let Some((id, w, _)) = criteria.iter().find(|(_, w, _)| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMatrix(format!("criterion `{id}` has invalid weight {w}")));
        }
        let original_weights: Vec<f64> = criteria.iter().map(|c| c.1).collect();
        let total: f64 = original_weights.iter().sum();
        if !criteria.is_empty() && total <= 0.0 {
            return Err(Error::InvalidMatrix("weights sum to zero".into()));
        }
        let criteria = criteria
            .into_iter()
            .map(|(id, w, direction)| Criterion {
                id,
                weight: w / total,
                direction,
            })
            .collect();
        Ok(DecisionMatrix {
            alternatives,
            criteria,
            original_weights,
            values,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranked {
    pub id: String,
    pub closeness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Ranking {
    pub ranked: Vec<Ranked>,
    /// Zero-variance criteria left out of the computation.
    pub dropped_criteria: Vec<String>,
}

impl Ranking {
    pub fn closeness_of(&self, id: &str) -> Option<f64> {
        self.ranked.iter().find(|r| r.id == id).map(|r| r.closeness)
    }
}

pub fn rank_alternatives(m: &DecisionMatrix) -> Result<Ranking> {
    let n_alt = m.alternatives.len();
    if n_alt == 0 {
        return Err(Error::InvalidMatrix("no alternatives".into()));
    }
    if n_alt == 1 {
        return Ok(Ranking {
            ranked: vec![Ranked {
                id: m.alternatives[0].clone(),
                closeness: 1.0,
            }],
            dropped_criteria: Vec::new(),
        });
    }

    let mut kept = Vec::new();
    let mut dropped_criteria = Vec::new();
    for (j, c) in m.criteria.iter().enumerate() {
        let first = m.values[0][j];
        if m.values.iter().all(|row| row[j] == first) {
            dropped_criteria.push(c.id.clone());
        } else {
            kept.push(j);
        }
    }
    if kept.is_empty() {
        return Err(Error::DegenerateMatrix(
            "every criterion has zero variance".into(),
        ));
    }
    let weight_sum: f64 = kept.iter().map(|&j| m.criteria[j].weight).sum();
    if weight_sum <= 0.0 {
        return Err(Error::DegenerateMatrix(
            "all discriminating criteria have zero weight".into(),
        ));
    }

    // weighted normalized matrix, kept columns only
    let weighted: Vec<Vec<f64>> = {
        let norms: Vec<f64> = kept
            .iter()
            .map(|&j| m.values.iter().map(|row| row[j] * row[j]).sum::<f64>().sqrt())
            .collect();
        m.values
            .iter()
            .map(|row| {
                kept.iter()
                    .zip(&norms)
                    .map(|(&j, norm)| m.criteria[j].weight / weight_sum * row[j] / norm)
                    .collect()
            })
            .collect()
    };

    let column = |k: usize| weighted.iter().map(move |row| row[k]);
    let (ideal, anti): (Vec<f64>, Vec<f64>) = kept
        .iter()
        .enumerate()
        .map(|(k, &j)| {
            let max = column(k).fold(f64::NEG_INFINITY, f64::max);
            let min = column(k).fold(f64::INFINITY, f64::min);
            match m.criteria[j].direction {
                Direction::Benefit => (max, min),
                Direction::Cost => (min, max),
            }
        })
        .unzip();

    let distance = |row: &[f64], point: &[f64]| {
        row.iter()
            .zip(point)
            .map(|(v, p)| (v - p) * (v - p))
            .sum::<f64>()
            .sqrt()
    };
    let mut ranked: Vec<Ranked> = m
        .alternatives
        .iter()
        .zip(&weighted)
        .map(|(id, row)| {
            let d_plus = distance(row, &ideal);
            let d_minus = distance(row, &anti);
            Ranked {
                id: id.clone(),
                closeness: d_minus / (d_plus + d_minus),
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.closeness
            .total_cmp(&a.closeness)
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(Ranking {
        ranked,
        dropped_criteria,
    })
}

/// A candidate resolution and how well it satisfies each conflicting requirement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Alternative {
    pub id: String,
    #[serde(default)]
    pub satisfies: BTreeMap<String, f64>,
}

/// Contents of a `.reqalts.json` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AlternativesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u32>,
    pub alternatives: Vec<Alternative>,
    /// Raw weights per requirement; unnamed criteria weigh 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, f64>>,
    /// Defaults to benefit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<BTreeMap<String, Direction>>,
}

pub fn parse_alternatives(text: &str) -> Result<AlternativesFile> {
    parse_json(text, None)
}

pub fn load_alternatives(path: impl AsRef<Path>) -> Result<AlternativesFile> {
    let path = path.as_ref();
    parse_json(&read_file(path)?, Some(path))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCriterion {
    id: String,
    #[serde(default = "unit_weight")]
    weight: f64,
    #[serde(default = "benefit")]
    direction: Direction,
}

fn unit_weight() -> f64 {
    1.0
}

fn benefit() -> Direction {
    Direction::Benefit
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawMatrix {
    #[serde(default)]
    #[allow(dead_code)]
    format_version: Option<u32>,
    alternatives: Vec<String>,
    criteria: Vec<RawCriterion>,
    values: Vec<Vec<f64>>,
}

/// Parses a `.reqmatrix.json` file: an explicit decision matrix, independent
/// of any corpus.
pub fn parse_matrix(text: &str) -> Result<DecisionMatrix> {
    matrix_from_raw(parse_json(text, None)?)
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DecisionMatrix> {
    let path = path.as_ref();
    matrix_from_raw(parse_json(&read_file(path)?, Some(path))?)
}

fn matrix_from_raw(raw: RawMatrix) -> Result<DecisionMatrix> {
    DecisionMatrix::new(
        raw.alternatives,
        raw.criteria
            .into_iter()
            .map(|c| (c.id, c.weight, c.direction))
            .collect(),
        raw.values,
    )
}

/// Criteria are the conflicting requirements in id order, all benefit with
/// equal weights unless overridden. Missing scores count as 0.
pub fn build_conflict_matrix(
    conflict_set: &BTreeSet<String>,
    alternatives: &AlternativesFile,
) -> Result<DecisionMatrix> {
    let named = alternatives
        .alternatives
        .iter()
        .flat_map(|a| a.satisfies.keys())
        .chain(alternatives.weights.iter().flat_map(|w| w.keys()))
        .chain(alternatives.directions.iter().flat_map(|d| d.keys()));
    for id in named {
        if !conflict_set.contains(id) {
            return Err(Error::UnknownRequirement(id.clone()));
        }
    }
    let criteria = conflict_set
        .iter()
        .map(|id| {
            let w = alternatives
                .weights
                .as_ref()
                .and_then(|w| w.get(id).copied())
                .unwrap_or(1.0);
            let d = alternatives
                .directions
                .as_ref()
                .and_then(|d| d.get(id).copied())
                .unwrap_or(Direction::Benefit);
            (id.clone(), w, d)
        })
        .collect();
    let values = alternatives
        .alternatives
        .iter()
        .map(|a| {
            conflict_set
                .iter()
                .map(|id| a.satisfies.get(id).copied().unwrap_or(0.0))
                .collect()
        })
        .collect();
    DecisionMatrix::new(
        alternatives.alternatives.iter().map(|a| a.id.clone()).collect(),
        criteria,
        values,
    )
}
