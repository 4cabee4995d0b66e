use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ItemClass, Level};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Machine-readable validation codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidationCode {
    UnsupportedVersion,
    EmptyId,
    DuplicateId,
    DanglingRef,
    LevelViolation,
    ParentCycle,
    DuplicateConcept,
    KindMismatch,
    DerivationScope,
    SelfRelation,
    RelationClassMismatch,
    RefinementCycle,
    DuplicateTarget,
    UnknownJurisdiction,
    EmptyAdoptedBy,
    TargetExists,
    UnknownTarget,
    InvalidPayload,
}

impl ValidationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ValidationCode::UnsupportedVersion => "UNSUPPORTED_VERSION",
            ValidationCode::EmptyId => "EMPTY_ID",
            ValidationCode::DuplicateId => "DUPLICATE_ID",
            ValidationCode::DanglingRef => "DANGLING_REF",
            ValidationCode::LevelViolation => "LEVEL_VIOLATION",
            ValidationCode::ParentCycle => "PARENT_CYCLE",
            ValidationCode::DuplicateConcept => "DUPLICATE_CONCEPT",
            ValidationCode::KindMismatch => "KIND_MISMATCH",
            ValidationCode::DerivationScope => "DERIVATION_SCOPE",
            ValidationCode::SelfRelation => "SELF_RELATION",
            ValidationCode::RelationClassMismatch => "RELATION_CLASS_MISMATCH",
            ValidationCode::RefinementCycle => "REFINEMENT_CYCLE",
            ValidationCode::DuplicateTarget => "DUPLICATE_TARGET",
            ValidationCode::UnknownJurisdiction => "UNKNOWN_JURISDICTION",
            ValidationCode::EmptyAdoptedBy => "EMPTY_ADOPTED_BY",
            ValidationCode::TargetExists => "TARGET_EXISTS",
            ValidationCode::UnknownTarget => "UNKNOWN_TARGET",
            ValidationCode::InvalidPayload => "INVALID_PAYLOAD",
        }
    }
}

impl fmt::Display for ValidationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One validation failure, always naming the offending id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ValidationIssue {
    pub code: ValidationCode,
    pub id: String,
    pub message: String,
}

impl ValidationIssue {
    pub fn new(code: ValidationCode, id: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationIssue {
            code,
            id: id.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.code, self.id, self.message)
    }
}

/// Non-empty list of validation issues, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationErrors(pub Vec<ValidationIssue>);

impl ValidationErrors {
    pub fn single(issue: ValidationIssue) -> Self {
        ValidationErrors(vec![issue])
    }

    pub fn first(&self) -> &ValidationIssue {
        &self.0[0]
    }

    pub fn has_code(&self, code: ValidationCode) -> bool {
        self.0.iter().any(|i| i.code == code)
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.len() {
            0 => f.write_str("no validation issues"),
            1 => write!(f, "{}", self.0[0]),
            n => write!(f, "{} (and {} more)", self.0[0], n - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub path: Option<PathBuf>,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{}:", p.display())?;
        }
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(ParseError),

    #[error("validation error: {0}")]
    Validation(ValidationErrors),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("refinement cycle: {}", witness.join(" -> "))]
    Cycle { witness: Vec<String> },

    #[error("cannot compare {a} ({a_class}) with {b} ({b_class})")]
    RoleMismatch {
        a: String,
        a_class: ItemClass,
        b: String,
        b_class: ItemClass,
    },

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("partition was computed from corpus {found}, not {expected}")]
    PartitionMismatch { expected: String, found: String },

    #[error("no {0} items exist in the corpus")]
    EmptyAspect(String),

    #[error("no jurisdictions at level {0}")]
    EmptyFrontier(Level),

    #[error("modify of general requirement `{0}` needs adoptedBy")]
    MissingAdoptedBy(String),

    #[error("unknown change target `{0}`")]
    UnknownTarget(String),

    #[error("adoptedBy for `{target}` names `{jurisdiction}`, which is not analyzed at level {level}")]
    AdopterOutsideFrontier {
        target: String,
        jurisdiction: String,
        level: Level,
    },

    #[error("requirement `{id}` is inherited by adopting and non-adopting jurisdictions; split it before a partial adoption")]
    AmbiguousAdoption { id: String },

    #[error("decision matrix is degenerate: {0}")]
    DegenerateMatrix(String),

    #[error("invalid decision matrix: {0}")]
    InvalidMatrix(String),

    #[error("requirement `{0}` is not part of the conflict set")]
    UnknownRequirement(String),
}

impl From<ValidationErrors> for Error {
    fn from(e: ValidationErrors) -> Self {
        Error::Validation(e)
    }
}
