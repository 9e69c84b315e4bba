//! Dissimilarity between a clean-data matrix profile and one computed from a
//! corrupted copy of the series, plus the noise-grid driver.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtw::{fastdtw, Radius};
use crate::error::{Error, Result};
use crate::mp::{matrix_profile_fast, summarize, MatrixProfile, ProfileSummary};
use crate::noise::{DuplicatePlacement, NoiseKind, NoiseSpec, DEFAULT_ANOMALY_FRACTION};
use crate::scalar::Scalar;
use crate::series::{ExclusionZone, TimeSeries, WindowLength};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const CONTROL_LABEL: &str = "Original Matrix Profile";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RobustnessReport<T> {
    pub schema_version: u32,
    pub dataset: String,
    /// Row label, `Original Matrix Profile` for the zero-noise control.
    pub label: String,
    pub noise: Option<NoiseSpec>,
    pub seed: Option<u64>,
    pub window: usize,
    pub exclusion_half_width: usize,
    pub radius: usize,
    /// DTW-matched sum of absolute profile differences.
    pub sum_abs_diffs: T,
    /// `sum_abs_diffs / original_mp_length / original_summary.max`.
    pub normalized_dissimilarity: T,
    pub original_summary: ProfileSummary<T>,
    pub noisy_summary: ProfileSummary<T>,
    pub original_mp_length: usize,
    pub noisy_mp_length: usize,
    pub original_series_length: usize,
    pub noisy_series_length: usize,
}

impl<T: Scalar> RobustnessReport<T> {
    /// Normalized dissimilarity recomputed from the report's own fields.
    pub fn recompute_dissimilarity(&self) -> T {
        self.sum_abs_diffs / T::of_usize(self.original_mp_length) / self.original_summary.max
    }

    /// Relative gap between normalizing by the profile length and by the
    /// series length, `(m - 1) / n`.
    pub fn length_discrepancy(&self) -> f64 {
        (self.original_series_length - self.original_mp_length) as f64
            / self.original_series_length as f64
    }
}

/// Aligns the two distance vectors with FastDTW and normalizes the matched
/// cost by the original profile's length and maximum.
///
/// The returned report carries an empty dataset label and no noise spec;
/// callers fill those in.
pub fn compare_profiles<T: Scalar>(
    original: &MatrixProfile<T>,
    noisy: &MatrixProfile<T>,
    radius: Radius,
) -> Result<RobustnessReport<T>> {
    if original.is_empty() || noisy.is_empty() {
        return Err(Error::invalid("cannot compare empty matrix profiles"));
    }
    let original_summary = summarize(original)?;
    let noisy_summary = summarize(noisy)?;
    let warp = fastdtw(&original.distances, &noisy.distances, radius)?;
    let sum_abs_diffs = warp.total_cost;
    if original_summary.max.is_nan() || original_summary.max <= T::zero() {
        return Err(Error::MetricUndefined {
            sum_abs_diffs: sum_abs_diffs.as_f64(),
        });
    }
    let mut report = RobustnessReport {
        schema_version: REPORT_SCHEMA_VERSION,
        dataset: String::new(),
        label: CONTROL_LABEL.to_string(),
        noise: None,
        seed: None,
        window: original.window.get(),
        exclusion_half_width: original.exclusion.half_width,
        radius: radius.get(),
        sum_abs_diffs,
        normalized_dissimilarity: T::zero(),
        original_summary,
        noisy_summary,
        original_mp_length: original.len(),
        noisy_mp_length: noisy.len(),
        original_series_length: original.source_length,
        noisy_series_length: noisy.source_length,
    };
    report.normalized_dissimilarity = report.recompute_dissimilarity();
    Ok(report)
}

/// One noise setting of the evaluation grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GridPoint {
    Duplicated { times: usize },
    Irrelevant { fraction: f64 },
}

impl GridPoint {
    /// Duplicates x2..x6 followed by irrelevant features at 1, 5, 10, 25 and 50%.
    pub fn standard_grid() -> Vec<GridPoint> {
        (2..=6)
            .map(|times| GridPoint::Duplicated { times })
            .chain(
                [0.01, 0.05, 0.10, 0.25, 0.50]
                    .into_iter()
                    .map(|fraction| GridPoint::Irrelevant { fraction }),
            )
            .collect()
    }

    pub fn kind(self) -> NoiseKind {
        match self {
            GridPoint::Duplicated { times } => NoiseKind::DuplicatedAnomaly { times },
            GridPoint::Irrelevant { fraction } => NoiseKind::IrrelevantFeatures { fraction },
        }
    }

    pub fn label(self) -> String {
        self.kind().label()
    }

    pub fn spec(self, seed: u64, anomaly_fraction: f64, placement: DuplicatePlacement) -> NoiseSpec {
        NoiseSpec {
            kind: self.kind(),
            anomaly_fraction,
            seed,
            placement,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub window: WindowLength,
    pub exclusion: ExclusionZone,
    pub radius: Radius,
    pub anomaly_fraction: f64,
    pub placement: DuplicatePlacement,
    pub points: Vec<GridPoint>,
}

impl GridConfig {
    pub fn new(window: WindowLength) -> Self {
        Self {
            window,
            exclusion: window.default_exclusion(),
            radius: Radius::default(),
            anomaly_fraction: DEFAULT_ANOMALY_FRACTION,
            placement: DuplicatePlacement::Adjacent,
            points: GridPoint::standard_grid(),
        }
    }
}

/// Mean and sample standard deviation of a grid point over its seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedAverage {
    pub label: String,
    pub point: GridPoint,
    pub seeds: Vec<u64>,
    pub mean_sum_abs_diffs: f64,
    pub std_sum_abs_diffs: f64,
    pub mean_dissimilarity: f64,
    pub std_dissimilarity: f64,
    pub mean_noisy_summary: ProfileSummary<f64>,
    pub mean_noisy_mp_length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GridOutput<T> {
    pub schema_version: u32,
    pub dataset: String,
    pub seeds: Vec<u64>,
    /// Original profile compared with itself.
    pub control: Option<RobustnessReport<T>>,
    /// One report per (grid point, seed), grid-point major.
    pub reports: Vec<RobustnessReport<T>>,
    pub averages: Vec<SeedAverage>,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

fn average<T: Scalar>(point: GridPoint, reports: &[RobustnessReport<T>]) -> SeedAverage {
    let sums = reports.iter().map(|r| r.sum_abs_diffs.as_f64());
    let diss = reports.iter().map(|r| r.normalized_dissimilarity.as_f64());
    let (mean_sum_abs_diffs, std_sum_abs_diffs) = mean_std(sums);
    let (mean_dissimilarity, std_dissimilarity) = mean_std(diss);
    let n = reports.len() as f64;
    let avg = |f: fn(&RobustnessReport<T>) -> f64| reports.iter().map(f).sum::<f64>() / n;
    SeedAverage {
        label: point.label(),
        point,
        seeds: reports.iter().filter_map(|r| r.seed).collect(),
        mean_sum_abs_diffs,
        std_sum_abs_diffs,
        mean_dissimilarity,
        std_dissimilarity,
        mean_noisy_summary: ProfileSummary {
            mean: avg(|r| r.noisy_summary.mean.as_f64()),
            max: avg(|r| r.noisy_summary.max.as_f64()),
            min: avg(|r| r.noisy_summary.min.as_f64()),
        },
        mean_noisy_mp_length: avg(|r| r.noisy_mp_length as f64),
    }
}

fn tag(point: GridPoint) -> impl Fn(Error) -> Error {
    move |e| Error::GridPoint {
        point: point.label(),
        source: Box::new(e),
    }
}

/// Computes the original profile once, then for every grid point and seed
/// corrupts the series, recomputes the profile with the same window and
/// exclusion zone, and compares. Jobs run on the current rayon pool; the
/// output order is fixed (grid point major, seed minor).
pub fn run_grid<T: Scalar>(
    series: &TimeSeries<T>,
    config: &GridConfig,
    seeds: &[u64],
) -> Result<GridOutput<T>> {
    let mut output = GridOutput {
        schema_version: REPORT_SCHEMA_VERSION,
        dataset: series.name().to_string(),
        seeds: seeds.to_vec(),
        control: None,
        reports: Vec::new(),
        averages: Vec::new(),
    };
    if seeds.is_empty() {
        return Ok(output);
    }
    let original = matrix_profile_fast(series, config.window, config.exclusion)?;
    let mut control = compare_profiles(&original, &original, config.radius)?;
    control.dataset = series.name().to_string();
    output.control = Some(control);

    let jobs: Vec<(GridPoint, u64)> = config
        .points
        .iter()
        .flat_map(|&p| seeds.iter().map(move |&s| (p, s)))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(point, seed)| -> Result<RobustnessReport<T>> {
            let spec = point.spec(seed, config.anomaly_fraction, config.placement);
            let (noisy, _) = spec.apply(series).map_err(tag(point))?;
            let noisy_mp =
                matrix_profile_fast(&noisy, config.window, config.exclusion).map_err(tag(point))?;
            let mut report =
                compare_profiles(&original, &noisy_mp, config.radius).map_err(tag(point))?;
            report.dataset = series.name().to_string();
            report.label = point.label();
            report.noise = Some(spec);
            report.seed = Some(seed);
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;

    output.averages = config
        .points
        .iter()
        .zip(reports.chunks(seeds.len()))
        .map(|(&point, chunk)| average(point, chunk))
        .collect();
    output.reports = reports;
    Ok(output)
}
