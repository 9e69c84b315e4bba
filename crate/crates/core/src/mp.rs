//! Matrix profile: distance profiles, a brute-force reference and a fast
//! exact diagonal-streaming algorithm.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{ExclusionZone, TimeSeries, WindowLength};
use crate::znorm::{
    clamp_distance, is_degenerate, mean_std, z_normalize, znorm_distance,
    znorm_sq_distance_with_stats,
};

/// Diagonal length after which the streamed covariance is recomputed from scratch.
const COV_REFRESH: usize = 256;

/// Nearest-neighbor distance and index for every length-`m` subsequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MatrixProfile<T> {
    pub distances: Vec<T>,
    pub indices: Vec<usize>,
    pub window: WindowLength,
    pub exclusion: ExclusionZone,
    pub source_length: usize,
}

impl<T: Scalar> MatrixProfile<T> {
    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Checks the structural invariants: lengths, distance range and exclusion.
    pub fn validate(&self) -> Result<()> {
        let m = self.window.get();
        let expected = self.window.profile_len(self.source_length)?;
        if self.distances.len() != expected || self.indices.len() != expected {
            return Err(Error::invalid(format!(
                "profile has {} distances and {} indices, expected {expected}",
                self.distances.len(),
                self.indices.len()
            )));
        }
        let upper = T::of(2.0) * T::of_usize(m).sqrt();
        for (i, (&d, &j)) in self.distances.iter().zip(&self.indices).enumerate() {
            if !(d >= T::zero() && d <= upper) {
                return Err(Error::invalid(format!(
                    "distance {d} at position {i} outside [0, {upper}]"
                )));
            }
            if j >= expected || self.exclusion.excludes(i, j) {
                return Err(Error::invalid(format!(
                    "index {j} at position {i} is out of range or a trivial match"
                )));
            }
        }
        Ok(())
    }

    /// Same profile with every distance multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            distances: self.distances.iter().map(|&d| d * factor).collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ProfileSummary<T> {
    pub mean: T,
    pub max: T,
    pub min: T,
}

fn check_window<T: Scalar>(series: &TimeSeries<T>, m: WindowLength) -> Result<usize> {
    m.profile_len(series.len()).map_err(|_| {
        Error::invalid(format!(
            "window length {} must be smaller than the series length {} (series '{}')",
            m.get(),
            series.len(),
            series.name()
        ))
    })
}

/// Every position needs at least one neighbor outside its exclusion zone.
fn check_admissible(profile_len: usize, zone: ExclusionZone) -> Result<()> {
    let h = zone.half_width;
    let worst = (profile_len - 1).saturating_sub(h);
    if worst <= h && worst.max(profile_len - 1 - worst) <= h {
        return Err(Error::NoAdmissibleNeighbor {
            position: worst,
            half_width: h,
        });
    }
    Ok(())
}

/// Distance from the subsequence at `query_index` to every subsequence;
/// trivial matches hold `T::infinity()`.
pub fn distance_profile<T: Scalar>(
    series: &TimeSeries<T>,
    query_index: usize,
    m: WindowLength,
    zone: ExclusionZone,
) -> Result<Vec<T>> {
    let len = check_window(series, m)?;
    if query_index >= len {
        return Err(Error::invalid(format!(
            "query index {query_index} out of range 0..={}",
            len - 1
        )));
    }
    let query = series.window(query_index, m);
    (0..len)
        .map(|j| {
            if zone.excludes(query_index, j) {
                Ok(T::infinity())
            } else {
                znorm_distance(query, series.window(j, m))
            }
        })
        .collect()
}

/// Brute force over all admissible pairs of z-normalized windows.
pub fn matrix_profile_naive<T: Scalar>(
    series: &TimeSeries<T>,
    m: WindowLength,
    zone: ExclusionZone,
) -> Result<MatrixProfile<T>> {
    let len = check_window(series, m)?;
    check_admissible(len, zone)?;
    let w = m.get();
    let mut normalized = Vec::with_capacity(len * w);
    for i in 0..len {
        normalized.extend(z_normalize(series.window(i, m))?.values);
    }
    let row = |i: usize| &normalized[i * w..(i + 1) * w];

    let mut distances = Vec::with_capacity(len);
    let mut indices = Vec::with_capacity(len);
    for i in 0..len {
        let mut best = T::infinity();
        let mut best_j = usize::MAX;
        for j in 0..len {
            if zone.excludes(i, j) {
                continue;
            }
            let sq: T = row(i)
                .iter()
                .zip(row(j))
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            if sq < best {
                best = sq;
                best_j = j;
            }
        }
        distances.push(clamp_distance(best.sqrt(), w));
        indices.push(best_j);
    }
    Ok(MatrixProfile {
        distances,
        indices,
        window: m,
        exclusion: zone,
        source_length: series.len(),
    })
}

struct WindowStats<T> {
    mean: Vec<T>,
    std: Vec<T>,
    /// `1 / (sqrt(m) * std)`, zero for degenerate windows.
    inv_norm: Vec<T>,
    degenerate: Vec<bool>,
    /// Streaming covariance update terms.
    df: Vec<T>,
    dg: Vec<T>,
}

impl<T: Scalar> WindowStats<T> {
    fn new(values: &[T], m: usize, len: usize) -> Self {
        let mut mean = Vec::with_capacity(len);
        let mut std = Vec::with_capacity(len);
        for i in 0..len {
            let (mu, sigma) = mean_std(&values[i..i + m]);
            mean.push(mu);
            std.push(sigma);
        }
        let sqrt_m = T::of_usize(m).sqrt();
        let degenerate: Vec<bool> = std.iter().map(|&s| is_degenerate(s)).collect();
        let inv_norm = std
            .iter()
            .zip(&degenerate)
            .map(|(&s, &deg)| if deg { T::zero() } else { T::one() / (sqrt_m * s) })
            .collect();
        let half = T::of(0.5);
        let mut df = vec![T::zero(); len];
        let mut dg = vec![T::zero(); len];
        for i in 1..len {
            df[i] = (values[i + m - 1] - values[i - 1]) * half;
            dg[i] = (values[i + m - 1] - mean[i]) + (values[i - 1] - mean[i - 1]);
        }
        Self {
            mean,
            std,
            inv_norm,
            degenerate,
            df,
            dg,
        }
    }

    fn covariance(&self, values: &[T], m: usize, i: usize, j: usize) -> T {
        let (mi, mj) = (self.mean[i], self.mean[j]);
        values[i..i + m]
            .iter()
            .zip(&values[j..j + m])
            .map(|(&a, &b)| (a - mi) * (b - mj))
            .sum()
    }

    /// Pearson correlation, with the degenerate-window rule expressed as an
    /// equivalent correlation (`d = sqrt(2m(1 - rho))`).
    fn correlation(&self, cov: T, i: usize, j: usize) -> T {
        match (self.degenerate[i], self.degenerate[j]) {
            (true, true) => T::one(),
            (true, false) | (false, true) => T::of(0.5),
            (false, false) => (cov * self.inv_norm[i] * self.inv_norm[j])
                .max(-T::one())
                .min(T::one()),
        }
    }
}

/// Per-position best correlation seen so far.
struct Best<T> {
    rho: Vec<T>,
    index: Vec<usize>,
}

impl<T: Scalar> Best<T> {
    fn new(len: usize) -> Self {
        Self {
            rho: vec![T::neg_infinity(); len],
            index: vec![usize::MAX; len],
        }
    }

    #[inline]
    fn offer(&mut self, pos: usize, rho: T, neighbor: usize) {
        let cur = self.rho[pos];
        if rho > cur || (rho == cur && neighbor < self.index[pos]) {
            self.rho[pos] = rho;
            self.index[pos] = neighbor;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for pos in 0..self.rho.len() {
            self.offer(pos, other.rho[pos], other.index[pos]);
        }
        self
    }
}

fn scan_diagonal<T: Scalar>(
    values: &[T],
    m: usize,
    len: usize,
    stats: &WindowStats<T>,
    offset: usize,
    best: &mut Best<T>,
) {
    let mut cov = T::zero();
    for i in 0..len - offset {
        let j = i + offset;
        if i % COV_REFRESH == 0 {
            cov = stats.covariance(values, m, i, j);
        } else {
            cov = cov + stats.df[i] * stats.dg[j] + stats.df[j] * stats.dg[i];
        }
        let rho = stats.correlation(cov, i, j);
        best.offer(i, rho, j);
        best.offer(j, rho, i);
    }
}

/// Contiguous ranges of diagonals with roughly equal cell counts.
fn diagonal_chunks(first: usize, len: usize, pieces: usize) -> Vec<(usize, usize)> {
    let total: usize = (first..len).map(|k| len - k).sum();
    let target = total.div_ceil(pieces.max(1)).max(1);
    let mut chunks = Vec::new();
    let mut start = first;
    let mut acc = 0;
    for k in first..len {
        acc += len - k;
        if acc >= target {
            chunks.push((start, k + 1));
            start = k + 1;
            acc = 0;
        }
    }
    if start < len {
        chunks.push((start, len));
    }
    chunks
}

/// Exact matrix profile by streaming covariances along diagonals, on the
/// current rayon pool. Output does not depend on the number of threads.
pub fn matrix_profile_fast<T: Scalar>(
    series: &TimeSeries<T>,
    m: WindowLength,
    zone: ExclusionZone,
) -> Result<MatrixProfile<T>> {
    let len = check_window(series, m)?;
    check_admissible(len, zone)?;
    let values = series.values();
    let w = m.get();
    let stats = WindowStats::new(values, w, len);

    let first = zone.half_width + 1;
    let pieces = 8 * rayon::current_num_threads();
    let best = diagonal_chunks(first, len, pieces)
        .into_par_iter()
        .fold(
            || Best::new(len),
            |mut best, (lo, hi)| {
                for offset in lo..hi {
                    scan_diagonal(values, w, len, &stats, offset, &mut best);
                }
                best
            },
        )
        .reduce(|| Best::new(len), Best::merge);

    // Final distances come from the windows themselves, not the streamed
    // correlation, so they agree with the brute-force path to rounding.
    let distances = best
        .index
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let sq = znorm_sq_distance_with_stats(
                &values[i..i + w],
                (stats.mean[i], stats.std[i]),
                &values[j..j + w],
                (stats.mean[j], stats.std[j]),
            );
            clamp_distance(sq.sqrt(), w)
        })
        .collect();

    Ok(MatrixProfile {
        distances,
        indices: best.index,
        window: m,
        exclusion: zone,
        source_length: series.len(),
    })
}

/// [`matrix_profile_fast`] on a dedicated pool of `jobs` worker threads.
pub fn matrix_profile_fast_with_jobs<T: Scalar>(
    series: &TimeSeries<T>,
    m: WindowLength,
    zone: ExclusionZone,
    jobs: usize,
) -> Result<MatrixProfile<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?;
    pool.install(|| matrix_profile_fast(series, m, zone))
}

/// Mean, max and min over the finite distances of a profile.
pub fn summarize<T: Scalar>(profile: &MatrixProfile<T>) -> Result<ProfileSummary<T>> {
    let mut count = 0usize;
    let mut sum = T::zero();
    let mut max = T::neg_infinity();
    let mut min = T::infinity();
    for &d in profile.distances.iter().filter(|d| d.is_finite()) {
        count += 1;
        sum = sum + d;
        max = max.max(d);
        min = min.min(d);
    }
    if count == 0 {
        return Err(Error::invalid("cannot summarize an empty matrix profile"));
    }
    Ok(ProfileSummary {
        mean: sum / T::of_usize(count),
        max,
        min,
    })
}
