use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("E_BAD_FILLING: particle count {n} outside [1, {l}]")]
    BadFilling { n: usize, l: usize },

    #[error("E_BAD_GAMMA: {0}")]
    BadGamma(String),

    #[error("invalid scenario: {0}")]
    BadScenario(String),

    #[error(
        "E_DEGENERATE_FERMI: levels {below} and {above} differ by {gap:.3e}; \
         the lowest-{n} subspace is not unique"
    )]
    DegenerateFermi {
        n: usize,
        below: f64,
        above: f64,
        gap: f64,
    },

    #[error("E_COMPLEX_RESIDUE: imaginary residue {0:.3e} exceeds tolerance")]
    ComplexResidue(f64),

    #[error("E_EMPTY_SUPPORT: no site has density above {0}")]
    EmptySupport(f64),

    #[error("E_RANGE: index {index} out of range for length {len}")]
    Range { index: usize, len: usize },

    #[error("E_TOO_LARGE: {what} = {value} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("E_DEGENERATE_GROUND: many-body gap {0:.3e} below 1e-10")]
    DegenerateGround(f64),

    #[error("E_CAP: {0}")]
    Cap(String),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
