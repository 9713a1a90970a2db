//! Contextuality analysis toolkit.
//!
//! The crate decides whether a family of per-context outcome distributions
//! (an empirical model) admits a single global joint distribution, simulates
//! finite single-state ontological models, and quantifies the information
//! cost of contextual dependence: any auxiliary variable `M` that mediates
//! context dependence past a shared ontic state satisfies
//! `H(M) >= I(C;O|lambda)`.
//!
//! Modules follow the pipeline:
//!
//! * [`infotheory`] — exact/float probability tables, Shannon entropy,
//!   mutual information, conditional mutual information.
//! * [`scenario`] — measurement scenarios, empirical models, and marginal
//!   consistency (no-disturbance) validation.
//! * [`marginal_solver`] — global-joint feasibility over deterministic
//!   assignments via exact rational simplex, with witness distributions or
//!   Farkas infeasibility certificates.
//! * [`ontmodel`] — single-state ontological models, statistics
//!   reproduction, and the XOR construction `O = lambda ^ f(C)`.
//! * [`context_cost`] — auxiliary channels, the mediation condition, bound
//!   verification, and minimal deterministic channel search.
//! * [`quantum_witness`] — Born-rule statistics for small systems and CHSH
//!   model generation.
//! * [`format`] — JSON model/channel file formats with byte-deterministic
//!   rendering.

pub mod context_cost;
pub mod format;
pub mod infotheory;
pub mod marginal_solver;
pub mod ontmodel;
pub mod quantum_witness;
pub mod scenario;

mod simplex;

pub use infotheory::{Dist, JointTable, Mode, Prob, Variable};

/// Default comparison/normalization tolerance for float-mode data.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default cap on the number of deterministic global assignments the
/// feasibility solver will enumerate.
pub const DEFAULT_ASSIGNMENT_CAP: u64 = 1 << 20;

/// Default maximum denominator when snapping float-mode probabilities to
/// rationals ahead of exact feasibility solving.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

/// Errors produced by model construction, validation, and analysis.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} is not normalized: mass sums to {sum}")]
    NotNormalized { what: String, sum: f64 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown symbol `{symbol}` for `{what}`")]
    UnknownSymbol { what: String, symbol: String },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("mixed exact and float values in one {0}")]
    MixedMode(&'static str),

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("{0}")]
    Structural(String),

    #[error("model incomplete: no response for context `{context}`, ontic state `{lambda}`")]
    IncompleteResponses { context: String, lambda: String },

    #[error(
        "assignment space too large: {count} deterministic assignments exceeds the cap {cap}; \
         raise the cap to proceed"
    )]
    CapacityExceeded { count: u128, cap: u64 },

    #[error("empirical model failed validation: {0}")]
    InvalidModel(String),

    #[error("channel does not mediate the model: max deviation {max_deviation}")]
    MediationFailed { max_deviation: f64 },

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
