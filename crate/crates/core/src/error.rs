use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("position {position} has no admissible neighbor outside an exclusion zone of half-width {half_width}")]
    NoAdmissibleNeighbor { position: usize, half_width: usize },

    /// `round(fraction * n)` came out as zero.
    #[error("no anomalies selected: round({fraction} * {len}) == 0; use a longer series or a larger fraction")]
    NoAnomaliesSelected { fraction: f64, len: usize },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// The original profile is all zeros so the normalized dissimilarity has no denominator.
    #[error("normalization undefined: original matrix profile maximum is 0 (sum of absolute differences = {sum_abs_diffs})")]
    MetricUndefined { sum_abs_diffs: f64 },

    #[error("grid point {point}: {source}")]
    GridPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// The innermost error, looking through grid-point tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::GridPoint { source, .. } => source.root(),
            other => other,
        }
    }
}
