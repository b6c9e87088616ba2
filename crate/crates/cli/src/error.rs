use serde::{Deserialize, Serialize};
use thiserror::Error;

use toricdegen::{DegenerationError, LiftingError, PartitionError};

use crate::report::WitnessReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{stage}: {message}")]
    Rejected { stage: &'static str, message: String, witness: Option<WitnessReport> },
}

/// The machine-readable form printed on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorObject {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub exit_code: u8,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Rejected { .. } => 1,
            _ => 2,
        }
    }

    pub fn object(&self) -> ErrorObject {
        let (kind, stage, line, column, witness) = match self {
            CliError::Io { .. } => ("io", None, None, None, None),
            CliError::Parse { line, column, .. } => ("parse", None, Some(*line), Some(*column), None),
            CliError::Input(_) => ("input", None, None, None, None),
            CliError::Rejected { stage, witness, .. } => {
                ("rejected", Some(stage.to_string()), None, None, witness.clone())
            }
        };
        ErrorObject {
            kind: kind.into(),
            input: None,
            exit_code: self.exit_code(),
            message: self.to_string(),
            stage,
            line,
            column,
            witness,
        }
    }

    pub fn from_partition(e: PartitionError) -> Self {
        match e {
            PartitionError::NoPieces
            | PartitionError::RankMismatch { .. }
            | PartitionError::OffsetsNotIncreasing
            | PartitionError::NotAProperFace(_)
            | PartitionError::NotAVertex(_)
            | PartitionError::Polytope(_) => CliError::Input(e.to_string()),
            PartitionError::NotSemistable(w) => CliError::Rejected {
                stage: "partition",
                message: format!("not semi-stable: {w}"),
                witness: Some((&w).into()),
            },
            e => CliError::Rejected { stage: "partition", message: e.to_string(), witness: None },
        }
    }

    pub fn from_lifting(e: LiftingError) -> Self {
        match e {
            LiftingError::NoSuchPiece(_) => CliError::Input(e.to_string()),
            LiftingError::Partition(p) => Self::from_partition(p),
            e => CliError::Rejected { stage: "lifting", message: e.to_string(), witness: None },
        }
    }

    pub fn from_degeneration(e: DegenerationError) -> Self {
        match e {
            DegenerationError::NoSuchPiece(_) => CliError::Input(e.to_string()),
            DegenerationError::Lifting(l) => Self::from_lifting(l),
            DegenerationError::Partition(p) => Self::from_partition(p),
            e => CliError::Rejected { stage: "degeneration", message: e.to_string(), witness: None },
        }
    }
}
