//! Error type shared across the crate.
//!
//! Every fallible routine returns [`crate::Result`]. Variants are grouped by
//! what the caller can do about them: configuration problems are fixable by
//! the user, infeasibility is a property of the scenario, and the remaining
//! variants indicate numerical trouble that usually points at out-of-range
//! inputs.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of a routine.
    #[error("domain error in {context}: {message}")]
    Domain {
        context: &'static str,
        message: String,
    },

    /// A root-finding bracket does not contain the target value.
    #[error("target {target} is not bracketed on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
        target: f64,
    },

    /// An iterative routine ran out of its iteration budget.
    #[error("{context} did not converge within {iterations} iterations")]
    NoConvergence {
        context: &'static str,
        iterations: u32,
    },

    /// A scenario parameter failed validation; `field` names the culprit.
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    /// The interference budget is exactly zero, so no positive transmit
    /// power is admissible no matter how many feedback bits are spent.
    #[error(
        "interference budget is zero: {links} active link(s) need positive power, \
         so no feedback allocation can satisfy the constraint"
    )]
    ZeroBudget { links: usize },

    /// No allocation within the per-search bit cap satisfies the budget.
    #[error(
        "no feasible allocation within {cap} total feedback bits \
         (interference budget {budget})"
    )]
    BitCapExceeded { cap: u32, budget: f64 },

    /// A requested computation cannot be satisfied for structural reasons
    /// (e.g. more zero-forcing constraints than spatial dimensions).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Offered load meets or exceeds the service rate, so queue delay
    /// diverges and a simulation would never settle.
    #[error(
        "unstable queue: offered load {offered_bits_per_sec} bits/s is not \
         below the service rate {service_bits_per_sec} bits/s"
    )]
    UnstableQueue {
        offered_bits_per_sec: f64,
        service_bits_per_sec: f64,
    },

    /// A resource guard tripped (e.g. a codebook too large to enumerate).
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Reading or writing a file failed; `path` says which one.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Shorthand for a [`Error::Domain`] with a formatted message.
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            context,
            message: message.into(),
        }
    }

    /// Shorthand for a [`Error::Config`] naming the offending field.
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for the variants that mean "the scenario itself admits no
    /// solution", as opposed to bad input or numerical failure.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::ZeroBudget { .. } | Error::BitCapExceeded { .. } | Error::Infeasible(_)
        )
    }
}
