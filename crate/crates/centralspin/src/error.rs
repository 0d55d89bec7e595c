use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("singular point: {0}")]
    Singular(String),

    #[error("memory budget exceeded: need {required} bytes, budget is {budget} bytes")]
    Resource { required: u64, budget: u64 },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no semiclassical roots found (smallest residual {min_residual:.3e})")]
    NoRoots { min_residual: f64 },

    #[error("truncation loss {loss:.3e} exceeds tolerance")]
    Truncation { loss: f64 },

    #[error("{0}")]
    OutOfSegment(String),

    /// `line` is 1-based; 0 means the error is not tied to a config line.
    #[error("config error{}: {msg}", at_line(*line))]
    Config { line: usize, msg: String },
}

fn at_line(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" at line {line}")
    }
}

pub type Result<T> = std::result::Result<T, Error>;
