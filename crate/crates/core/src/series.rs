//! Validated containers for a univariate series and the window parameters
//! applied to it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered, finite samples with a label and optional UTC millisecond timestamps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TimeSeries<T> {
    name: String,
    values: Vec<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timestamps: Option<Vec<i64>>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(name: impl Into<String>, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("time series must contain at least one value"));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "time series value at position {pos} is not finite"
            )));
        }
        Ok(Self {
            name: name.into(),
            values,
            timestamps: None,
        })
    }

    pub fn with_timestamps(mut self, timestamps: Vec<i64>) -> Result<Self> {
        if timestamps.len() != self.values.len() {
            return Err(Error::invalid(format!(
                "{} timestamps supplied for {} values",
                timestamps.len(),
                self.values.len()
            )));
        }
        self.timestamps = Some(timestamps);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[i64]> {
        self.timestamps.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Subsequence of length `m` starting at `start`.
    pub fn window(&self, start: usize, m: WindowLength) -> &[T] {
        &self.values[start..start + m.get()]
    }

    pub fn min_max(&self) -> (T, T) {
        self.values
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Subsequence length `m`, at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct WindowLength(usize);

impl WindowLength {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!(
                "window length must be at least 2, got {m}"
            )));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Number of subsequences, `n - m + 1`, of a series of length `n`.
    pub fn profile_len(self, n: usize) -> Result<usize> {
        if self.0 > n {
            return Err(Error::invalid(format!(
                "window length {} must not exceed the series length {n}",
                self.0
            )));
        }
        Ok(n - self.0 + 1)
    }

    /// `ceil(m / 4)`, the conventional trivial-match exclusion half-width.
    pub fn default_exclusion(self) -> ExclusionZone {
        ExclusionZone::new(self.0.div_ceil(4))
    }
}

impl TryFrom<usize> for WindowLength {
    type Error = Error;

    fn try_from(m: usize) -> Result<Self> {
        Self::new(m)
    }
}

impl From<WindowLength> for usize {
    fn from(m: WindowLength) -> usize {
        m.0
    }
}

/// Positions `j` with `|j - i| <= half_width` are trivial matches of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExclusionZone {
    pub half_width: usize,
}

impl ExclusionZone {
    pub fn new(half_width: usize) -> Self {
        Self { half_width }
    }

    pub fn excludes(self, i: usize, j: usize) -> bool {
        i.abs_diff(j) <= self.half_width
    }
}
