//! Instance files, generators, DOT export and structured reports.

pub mod dot;
pub mod format;
pub mod generate;
pub mod instances;
pub mod report;

use crate::complex::ComplexError;
use crate::dynamics::DynamicsError;
use crate::elemset::CarrierError;
use crate::proximity::{ProbeError, ProximityError};

pub use dot::export_dot;
pub use format::{parse, render, Document, MapDecl, ParseError, ProbeBody, ProbeDecl};
pub use generate::{generate_document, generate_ribbon_complex, GenConfig, GenProbe};
pub use report::AnalysisReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Proximity(#[from] ProximityError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("unknown probe `{0}`")]
    UnknownProbe(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("unknown set `{0}`")]
    UnknownSet(String),
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("no valid complex after {attempts} attempts")]
    GenerationExhausted { attempts: usize },
}
