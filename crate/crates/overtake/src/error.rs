use thiserror::Error;

/// Errors shared across the solver, asymptotics, and overtaking modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("unknown model family: {0}")]
    UnknownFamily(String),

    #[error(
        "bisection failed to converge: bracket [{lo}, {hi}], best terminal capital {best_terminal:e} after {iters} iterations"
    )]
    Convergence {
        lo: f64,
        hi: f64,
        best_terminal: f64,
        iters: u32,
    },

    #[error("infeasible path at index {index}: {constraint} (magnitude {magnitude:e})")]
    Infeasible {
        index: usize,
        constraint: String,
        magnitude: f64,
    },

    #[error("sign convention violated: U(c) >= 0 at index {index} (c = {c})")]
    SignConvention { index: usize, c: f64 },

    #[error("degenerate comparison: zero denominator at T = {horizon}")]
    DegenerateComparison { horizon: usize },

    #[error("solver failed at horizon T = {horizon}")]
    AtHorizon {
        horizon: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o failure writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
