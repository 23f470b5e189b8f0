use std::fmt;

use crate::tier::Tier;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One violated configuration bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every violation found while validating a configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigErrors(pub Vec<Violation>);

impl ConfigErrors {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(Violation::new(field, message));
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.0.iter()
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.0
            .iter()
            .any(|v| v.message.contains(needle) || v.field.contains(needle))
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// A SINR threshold that breaks the at-most-one-serving-node assumption of the
/// minimal-delay success formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdViolation {
    pub tier: Tier,
    pub threshold: f64,
    pub bound: f64,
}

impl fmt::Display for ThresholdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} threshold {} must exceed {}",
            self.tier, self.threshold, self.bound
        )
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigErrors),

    #[error("{function}: argument {value} outside domain ({bound})")]
    Domain {
        function: &'static str,
        value: f64,
        bound: &'static str,
    },

    #[error(
        "quadrature did not converge: estimate {value} with error estimate {achieved_error} \
         after {subdivisions} subdivisions"
    )]
    NonConvergence {
        value: f64,
        achieved_error: f64,
        subdivisions: usize,
    },

    #[error(
        "{tier} queue unstable: traffic {rho_prime} >= mean rate {mean_rate} \
         (utilization {utilization:.4})"
    )]
    Unstable {
        tier: Tier,
        mean_rate: f64,
        rho_prime: f64,
        utilization: f64,
    },

    #[error("{tier} deadline {deadline} does not exceed link latency {link_latency}")]
    DeadlineInfeasible {
        tier: Tier,
        deadline: f64,
        link_latency: f64,
    },

    #[error("SINR threshold assumption violated: {}", join(.0))]
    ThresholdAssumption(Vec<ThresholdViolation>),

    #[error("every per-tier success term is zero; association is undefined")]
    DegenerateAssociation,

    #[error("minimal-delay equilibrium not reached: residual {residual:e} after {iterations} steps")]
    EquilibriumNonConvergence { iterations: usize, residual: f64 },

    #[error("scene contains no base station")]
    EmptyScene,

    #[error("{0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("CSV schema error: {0}")]
    Schema(String),

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn join(items: &[ThresholdViolation]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
