//! Insertion-only corruption of a series: duplicated anomalies and
//! irrelevant uniform features.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`. Only raw `u64`
//! draws are consumed, mapped to floats as `(x >> 11) * 2^-53` and to
//! bounded integers by rejection, so the seed-to-output mapping does not
//! depend on any sampling code outside this module.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

pub const DEFAULT_ANOMALY_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicatePlacement {
    /// The `k - 1` copies directly follow the original value.
    #[default]
    Adjacent,
    /// Each copy lands in an independently chosen random gap.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NoiseKind {
    /// Every selected value appears `times` times in total.
    DuplicatedAnomaly { times: usize },
    /// Adds `round(fraction * n)` values drawn from `Unif(min, max)`.
    IrrelevantFeatures { fraction: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    /// Share of values picked as duplication anchors; unused for irrelevant features.
    pub anomaly_fraction: f64,
    pub seed: u64,
    #[serde(default)]
    pub placement: DuplicatePlacement,
}

impl NoiseSpec {
    pub fn duplicated(times: usize, seed: u64) -> Self {
        Self {
            kind: NoiseKind::DuplicatedAnomaly { times },
            anomaly_fraction: DEFAULT_ANOMALY_FRACTION,
            seed,
            placement: DuplicatePlacement::Adjacent,
        }
    }

    pub fn irrelevant(fraction: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::IrrelevantFeatures { fraction },
            anomaly_fraction: DEFAULT_ANOMALY_FRACTION,
            seed,
            placement: DuplicatePlacement::Adjacent,
        }
    }

    pub fn apply<T: Scalar>(&self, series: &TimeSeries<T>) -> Result<(TimeSeries<T>, CorruptionRecord)> {
        let (out, positions) = match self.kind {
            NoiseKind::DuplicatedAnomaly { times } => duplicate_values(
                series.values(),
                times,
                self.anomaly_fraction,
                self.seed,
                self.placement,
            )?,
            NoiseKind::IrrelevantFeatures { fraction } => {
                irrelevant_values(series.values(), fraction, self.seed)?
            }
        };
        let name = format!("{}.{}.{}", series.name(), self.kind.slug(), self.seed);
        Ok((
            TimeSeries::new(name, out)?,
            CorruptionRecord {
                inserted_positions: positions,
                source: *self,
            },
        ))
    }

    /// Number of values this spec inserts into a series of length `n`.
    pub fn inserted_count(&self, n: usize) -> usize {
        match self.kind {
            NoiseKind::DuplicatedAnomaly { times } => {
                round_half_up(self.anomaly_fraction * n as f64) * times.saturating_sub(1)
            }
            NoiseKind::IrrelevantFeatures { fraction } => round_half_up(fraction * n as f64),
        }
    }
}

impl NoiseKind {
    /// Human-readable row label, e.g. `Duplicated Anomaly x2`.
    pub fn label(&self) -> String {
        match *self {
            NoiseKind::DuplicatedAnomaly { times } => format!("Duplicated Anomaly x{times}"),
            NoiseKind::IrrelevantFeatures { fraction } => {
                format!("Irrelevant Features - {}%", percent(fraction))
            }
        }
    }

    /// File-name friendly tag, e.g. `dup-x2` or `irrelevant-25pct`.
    pub fn slug(&self) -> String {
        match *self {
            NoiseKind::DuplicatedAnomaly { times } => format!("dup-x{times}"),
            NoiseKind::IrrelevantFeatures { fraction } => {
                format!("irrelevant-{}pct", percent(fraction))
            }
        }
    }
}

fn percent(fraction: f64) -> String {
    let pct = (fraction * 100.0 * 1e6).round() / 1e6;
    format!("{pct}")
}

/// Ground truth for a corruption: where the injected values sit in the output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorruptionRecord {
    pub inserted_positions: Vec<usize>,
    pub source: NoiseSpec,
}

impl CorruptionRecord {
    /// The corrupted values with every injected position removed.
    pub fn strip<T: Copy>(&self, corrupted: &[T]) -> Vec<T> {
        let mut injected = self.inserted_positions.iter().peekable();
        corrupted
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                if injected.peek() == Some(&i) {
                    injected.next();
                    false
                } else {
                    true
                }
            })
            .map(|(_, &v)| v)
            .collect()
    }
}

pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor().max(0.0) as usize
}

fn check_fraction(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value <= 1.0) {
        return Err(Error::invalid(format!("{name} must lie in (0, 1], got {value}")));
    }
    Ok(())
}

struct Draws(ChaCha8Rng);

impl Draws {
    fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `0..bound`, `bound > 0`.
    fn below(&mut self, bound: usize) -> usize {
        let bound = bound as u64;
        let limit = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.0.next_u64();
            if x < limit {
                return (x % bound) as usize;
            }
        }
    }

    /// `count` distinct values of `0..n` by a partial Fisher-Yates shuffle.
    fn sample_distinct(&mut self, n: usize, count: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }
}

/// Places `inserts` (gap, value) pairs among `original`, where gap `g` sits
/// just before original index `g`. Values sharing a gap keep their order.
fn merge_into_gaps<T: Copy>(original: &[T], mut inserts: Vec<(usize, T)>) -> (Vec<T>, Vec<usize>) {
    inserts.sort_by_key(|&(gap, _)| gap);
    let mut out = Vec::with_capacity(original.len() + inserts.len());
    let mut positions = Vec::with_capacity(inserts.len());
    let mut pending = inserts.into_iter().peekable();
    for gap in 0..=original.len() {
        while let Some(&(g, v)) = pending.peek() {
            if g != gap {
                break;
            }
            positions.push(out.len());
            out.push(v);
            pending.next();
        }
        if let Some(&v) = original.get(gap) {
            out.push(v);
        }
    }
    (out, positions)
}

fn duplicate_values<T: Scalar>(
    values: &[T],
    times: usize,
    fraction: f64,
    seed: u64,
    placement: DuplicatePlacement,
) -> Result<(Vec<T>, Vec<usize>)> {
    if times < 2 {
        return Err(Error::invalid(format!(
            "duplication factor must be at least 2, got {times}"
        )));
    }
    check_fraction("anomaly fraction", fraction)?;
    let n = values.len();
    let selected = round_half_up(fraction * n as f64);
    if selected == 0 {
        return Err(Error::NoAnomaliesSelected { fraction, len: n });
    }
    let mut draws = Draws::new(seed);
    let mut anchors = draws.sample_distinct(n, selected.min(n));
    anchors.sort_unstable();

    match placement {
        DuplicatePlacement::Adjacent => {
            let mut out = Vec::with_capacity(n + anchors.len() * (times - 1));
            let mut positions = Vec::with_capacity(anchors.len() * (times - 1));
            let mut next = anchors.iter().peekable();
            for (i, &v) in values.iter().enumerate() {
                out.push(v);
                if next.peek() == Some(&&i) {
                    next.next();
                    for _ in 1..times {
                        positions.push(out.len());
                        out.push(v);
                    }
                }
            }
            Ok((out, positions))
        }
        DuplicatePlacement::Random => {
            let inserts = anchors
                .iter()
                .flat_map(|&a| std::iter::repeat_n(values[a], times - 1))
                .map(|v| (draws.below(n + 1), v))
                .collect();
            Ok(merge_into_gaps(values, inserts))
        }
    }
}

fn irrelevant_values<T: Scalar>(values: &[T], fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<usize>)> {
    check_fraction("irrelevant-feature fraction", fraction)?;
    let n = values.len();
    if n < 2 {
        return Err(Error::invalid("irrelevant features need a series of at least 2 values"));
    }
    let (lo, hi) = values
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if lo == hi {
        return Err(Error::Degenerate(format!(
            "series is constant ({lo}); Unif(min, max) has empty support"
        )));
    }
    let count = round_half_up(fraction * n as f64);
    let mut draws = Draws::new(seed);
    let (lo64, hi64) = (lo.as_f64(), hi.as_f64());
    let inserts = (0..count)
        .map(|_| {
            let v = T::of(lo64 + draws.unit() * (hi64 - lo64)).max(lo).min(hi);
            let gap = draws.below(n + 1);
            (gap, v)
        })
        .collect();
    Ok(merge_into_gaps(values, inserts))
}

/// Inserts `k - 1` adjacent copies after each of `round(fraction * n)`
/// randomly chosen values.
pub fn inject_duplicates<T: Scalar>(
    series: &TimeSeries<T>,
    k: usize,
    anomaly_fraction: f64,
    seed: u64,
) -> Result<(TimeSeries<T>, CorruptionRecord)> {
    inject_duplicates_with(series, k, anomaly_fraction, seed, DuplicatePlacement::Adjacent)
}

pub fn inject_duplicates_with<T: Scalar>(
    series: &TimeSeries<T>,
    k: usize,
    anomaly_fraction: f64,
    seed: u64,
    placement: DuplicatePlacement,
) -> Result<(TimeSeries<T>, CorruptionRecord)> {
    NoiseSpec {
        kind: NoiseKind::DuplicatedAnomaly { times: k },
        anomaly_fraction,
        seed,
        placement,
    }
    .apply(series)
}

/// Inserts `round(p * n)` values from `Unif(min(X), max(X))` at random gaps.
pub fn inject_irrelevant<T: Scalar>(
    series: &TimeSeries<T>,
    p: f64,
    seed: u64,
) -> Result<(TimeSeries<T>, CorruptionRecord)> {
    NoiseSpec::irrelevant(p, seed).apply(series)
}
