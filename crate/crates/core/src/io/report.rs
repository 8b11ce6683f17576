//! Run reports: a header, the echoed input, validation and the command's
//! result, rendered as deterministic JSON.

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::problem_file::{ModeName, ProblemFile};
use crate::ce::ModuleKind;
use crate::levi::{ComponentWitness, LeviError};
use crate::lie::ValidationReport;
use crate::rational::RationalString;
use crate::schedule::Variant;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

pub const TOOL: ToolInfo = ToolInfo {
    name: "levi",
    version: env!("CARGO_PKG_VERSION"),
};

/// Options a command ran with, after defaults and file values were merged.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CommandOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<RationalString>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<RationalString>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<ModuleKind>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub timing: bool,
}

/// Machine-readable reason a problem was rejected, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Jacobi {
        triple: [usize; 3],
        exponents: Vec<u32>,
        value: RationalString,
    },
    LinearPart(ComponentWitness),
    NotVanishing {
        pair: [usize; 2],
        value: RationalString,
    },
    NotFiberwiseLinear {
        pair: [usize; 2],
    },
    AnchorAtOrigin {
        section: usize,
        coordinate: usize,
        value: RationalString,
    },
}

impl Witness {
    pub fn from_error(e: &LeviError) -> Option<Self> {
        Some(match e {
            LeviError::Jacobi { triple, exponents, value } => Witness::Jacobi {
                triple: [triple.0, triple.1, triple.2],
                exponents: exponents.clone(),
                value: value.clone(),
            },
            LeviError::LinearPart(w) => Witness::LinearPart(w.clone()),
            LeviError::NotVanishing { pair, value } => Witness::NotVanishing {
                pair: [pair.0, pair.1],
                value: value.clone(),
            },
            LeviError::NotFiberwiseLinear { pair } => Witness::NotFiberwiseLinear { pair: [pair.0, pair.1] },
            LeviError::AnchorAtOrigin {
                section,
                coordinate,
                value,
            } => Witness::AnchorAtOrigin {
                section: *section,
                coordinate: *coordinate,
                value: value.clone(),
            },
            _ => return None,
        })
    }
}

/// Whether the input is a well-posed normalization problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProblemCheck {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl ProblemCheck {
    pub fn ok() -> Self {
        ProblemCheck {
            passed: true,
            error: None,
            witness: None,
        }
    }

    pub fn failed(e: &LeviError) -> Self {
        ProblemCheck {
            passed: false,
            error: Some(e.to_string()),
            witness: Witness::from_error(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    /// Checks on the structure constants; absent when the structure could
    /// not be formed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<ValidationReport>,
    pub problem: ProblemCheck,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.structure.as_ref().map_or(true, ValidationReport::passed) && self.problem.passed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    /// Wall-clock milliseconds, approximate.
    pub total_ms_approx: f64,
}

/// The report every command produces. Without `--timing` it is a pure
/// function of the input and options.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub format_version: u32,
    pub tool: ToolInfo,
    pub command: &'static str,
    pub passed: bool,
    /// SHA-256 of the echoed input as rendered in this report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<ProblemFile>,
    pub options: CommandOptions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<Validation>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunReport {
    pub fn new(command: &'static str, input: Option<&ProblemFile>, options: CommandOptions) -> Self {
        RunReport {
            format_version: REPORT_VERSION,
            tool: TOOL,
            command,
            passed: false,
            input_sha256: input.map(|f| sha256_hex(f.to_json().as_bytes())),
            input: input.cloned(),
            options,
            validation: None,
            result: serde_json::Value::Null,
            notes: Vec::new(),
            timing: None,
        }
    }

    pub fn with_result<T: Serialize>(mut self, result: &T) -> Self {
        self.result = serde_json::to_value(result).expect("results serialize");
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Process exit code: 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}
