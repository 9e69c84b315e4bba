//! Exact matrix profiles of univariate time series, two insertion-only noise
//! models, and a DTW-aligned dissimilarity between matrix profiles.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below pin the common instantiations.

#![forbid(unsafe_code)]

pub mod dtw;
pub mod error;
pub mod ingest;
pub mod io;
pub mod mp;
pub mod noise;
pub mod robustness;
pub mod scalar;
pub mod series;
pub mod znorm;

pub use dtw::{dtw_exact, fastdtw, Radius, WarpAlgorithm, WarpingResult};
pub use error::{Error, Result};
pub use mp::{
    distance_profile, matrix_profile_fast, matrix_profile_fast_with_jobs, matrix_profile_naive,
    summarize, MatrixProfile, ProfileSummary,
};
pub use noise::{
    inject_duplicates, inject_irrelevant, CorruptionRecord, DuplicatePlacement, NoiseKind,
    NoiseSpec,
};
pub use robustness::{compare_profiles, run_grid, GridConfig, GridOutput, GridPoint, RobustnessReport};
pub use scalar::Scalar;
pub use series::{ExclusionZone, TimeSeries, WindowLength};
pub use znorm::{z_normalize, znorm_distance, ZNormalized};

pub type TimeSeries64 = TimeSeries<f64>;
pub type TimeSeries32 = TimeSeries<f32>;
pub type MatrixProfile64 = MatrixProfile<f64>;
pub type MatrixProfile32 = MatrixProfile<f32>;
pub type ProfileSummary64 = ProfileSummary<f64>;
pub type WarpingResult64 = WarpingResult<f64>;
pub type RobustnessReport64 = RobustnessReport<f64>;
