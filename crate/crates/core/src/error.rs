use thiserror::Error;

pub type Result<T, E = GlsfError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GlsfError {
    #[error("parameter `{field}` must be strictly positive and finite, got {value}")]
    Param { field: &'static str, value: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error(
        "linear solve did not converge: residual {residual:.3e} after {iterations} iterations"
    )]
    Solver { iterations: usize, residual: f64 },

    #[error("non-finite value at step {step} (t = {t}); last good time {last_good_t}")]
    NonFinite {
        step: usize,
        t: f64,
        last_good_t: f64,
    },

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error("configuration errors:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
