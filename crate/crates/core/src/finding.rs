//! Findings: non-fatal analysis results with a severity.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingCode {
    GeneralReqSpecificSource,
    SpecificReqForeignSource,
    SpecificReqNoSpecificSource,
    NoCrossContradiction,
    ComponentScope,
}

impl FindingCode {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::GeneralReqSpecificSource => "GENERAL_REQ_SPECIFIC_SOURCE",
            FindingCode::SpecificReqForeignSource => "SPECIFIC_REQ_FOREIGN_SOURCE",
            FindingCode::SpecificReqNoSpecificSource => "SPECIFIC_REQ_NO_SPECIFIC_SOURCE",
            FindingCode::NoCrossContradiction => "NO_CROSS_CONTRADICTION",
            FindingCode::ComponentScope => "COMPONENT_SCOPE",
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    pub severity: Severity,
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jurisdiction: Option<String>,
    pub message: String,
}

impl Finding {
    pub fn new(
        code: FindingCode,
        severity: Severity,
        id: impl Into<String>,
        jurisdiction: Option<&str>,
        message: impl Into<String>,
    ) -> Self {
        Finding {
            code,
            severity,
            id: id.into(),
            jurisdiction: jurisdiction.map(str::to_string),
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} {} [{}]: {}", self.code, self.id, self.message)
    }
}
