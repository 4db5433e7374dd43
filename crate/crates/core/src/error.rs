//! Error types for every subsystem, each tagged with a coarse class so
//! callers (notably the CLI) can map failures onto a stable exit-code
//! contract: validation, resource-guard exhaustion, or a failed
//! certificate/property check.

use thiserror::Error;

/// Coarse failure class used for exit codes and report tagging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input, spec violation, out-of-contract parameters.
    Validation,
    /// A size/step/budget guard stopped the computation.
    Resource,
    /// A certificate or mathematical property check failed.
    Certificate,
}

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("spec field `{field}`: {reason}")]
    Spec { field: String, reason: String },
    #[error("element not valid for this backend: {reason}")]
    InvalidElement { reason: String },
    #[error("cannot parse word `{word}`: {reason}")]
    WordParse { word: String, reason: String },
    #[error("finite group enumeration exceeded the cap of {cap} elements")]
    EnumerationCap { cap: usize },
}

impl GroupError {
    pub fn spec(field: &str, reason: impl Into<String>) -> Self {
        GroupError::Spec {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            GroupError::EnumerationCap { .. } => ErrorClass::Resource,
            _ => ErrorClass::Validation,
        }
    }
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("distance {distance} exceeds guard {guard}; enlarge the working ball")]
    OutOfRange { distance: u32, guard: u32 },
    #[error("ball size guard {guard} exceeded ({reached} vertices reached)")]
    SizeGuard { reached: usize, guard: usize },
    #[error("empty vertex set")]
    EmptySet,
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl MetricError {
    pub fn class(&self) -> ErrorClass {
        match self {
            MetricError::OutOfRange { .. } | MetricError::SizeGuard { .. } => ErrorClass::Resource,
            MetricError::EmptySet => ErrorClass::Validation,
            MetricError::Group(e) => e.class(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("simplex enumeration guard {guard} exceeded ({emitted} simplices emitted)")]
    EnumerationGuard { emitted: usize, guard: usize },
    #[error("chain enumeration guard {guard} exceeded")]
    ChainGuard { guard: usize },
    #[error("homology matrix budget exceeded: dimension-{dim} boundary is {rows}x{cols}")]
    MatrixBudget { dim: usize, rows: usize, cols: usize },
    #[error("face list line {line}: {reason}")]
    FacesParse { line: usize, reason: String },
    #[error("simplex {simplex:?} exceeds the supported size of {cap} vertices")]
    SimplexTooLarge { simplex: Vec<String>, cap: usize },
}

impl ComplexError {
    pub fn class(&self) -> ErrorClass {
        match self {
            ComplexError::FacesParse { .. } => ErrorClass::Validation,
            _ => ErrorClass::Resource,
        }
    }
}

#[derive(Debug, Error)]
pub enum EquivariantError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("subgroup closure guard exceeded: {detail}")]
    ClosureGuard { detail: String },
    #[error("invariant-simplex guard {guard} exceeded")]
    PosetGuard { guard: usize },
    #[error("certificate `{name}` failed: {lhs_x2}/2 > {rhs_x2}/2 ({context})")]
    Certificate {
        name: String,
        lhs_x2: i64,
        rhs_x2: i64,
        context: String,
    },
    #[error("{0}")]
    Validation(String),
}

impl EquivariantError {
    pub fn class(&self) -> ErrorClass {
        match self {
            EquivariantError::Metric(e) => e.class(),
            EquivariantError::Group(e) => e.class(),
            EquivariantError::Complex(e) => e.class(),
            EquivariantError::ClosureGuard { .. } | EquivariantError::PosetGuard { .. } => {
                ErrorClass::Resource
            }
            EquivariantError::Certificate { .. } => ErrorClass::Certificate,
            EquivariantError::Validation(_) => ErrorClass::Validation,
        }
    }
}

#[derive(Debug, Error)]
pub enum ContractionError {
    #[error("configuration invalid: {0}")]
    Validation(String),
    #[error("step guard {guard} exceeded after {steps} steps")]
    StepGuard { guard: usize, steps: usize },
    #[error("certificate `{name}` failed at step {step}: {detail}")]
    Certificate {
        step: usize,
        name: String,
        detail: String,
    },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
}

impl ContractionError {
    pub fn class(&self) -> ErrorClass {
        match self {
            ContractionError::Validation(_) => ErrorClass::Validation,
            ContractionError::StepGuard { .. } => ErrorClass::Resource,
            ContractionError::Certificate { .. } => ErrorClass::Certificate,
            ContractionError::Metric(e) => e.class(),
            ContractionError::Group(e) => e.class(),
            ContractionError::Equivariant(e) => e.class(),
        }
    }
}
