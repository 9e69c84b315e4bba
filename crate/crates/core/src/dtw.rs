//! Dynamic time warping under absolute-difference local cost: full dynamic
//! programming and the multilevel FastDTW approximation.
//!
//! Steps are the usual three (diagonal, advance `i`, advance `j`) without
//! weights. Equal-cost predecessors resolve diagonal first, then the
//! `i`-advancing step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_RADIUS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Radius(usize);

impl Radius {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("DTW radius must be at least 1"));
        }
        Ok(Self(r))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl Default for Radius {
    fn default() -> Self {
        Self(DEFAULT_RADIUS)
    }
}

impl TryFrom<usize> for Radius {
    type Error = Error;

    fn try_from(r: usize) -> Result<Self> {
        Self::new(r)
    }
}

impl From<Radius> for usize {
    fn from(r: Radius) -> usize {
        r.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WarpAlgorithm {
    Exact,
    Fast { radius: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct WarpingResult<T> {
    /// Sum of `|a_i - b_j|` over the path, accumulated in path order.
    pub total_cost: T,
    pub path: Vec<(usize, usize)>,
    pub algorithm: WarpAlgorithm,
}

impl<T: Scalar> WarpingResult<T> {
    /// Checks endpoints and step shape of the path against the input lengths.
    pub fn validate_path(&self, len_a: usize, len_b: usize) -> Result<()> {
        let (first, last) = match (self.path.first(), self.path.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::invalid("empty warping path")),
        };
        if first != (0, 0) || last != (len_a - 1, len_b - 1) {
            return Err(Error::invalid(format!(
                "path runs {first:?} -> {last:?}, expected (0, 0) -> ({}, {})",
                len_a - 1,
                len_b - 1
            )));
        }
        for pair in self.path.windows(2) {
            let (di, dj) = (pair[1].0.wrapping_sub(pair[0].0), pair[1].1.wrapping_sub(pair[0].1));
            if di > 1 || dj > 1 || di + dj == 0 {
                return Err(Error::invalid(format!("illegal step {:?} -> {:?}", pair[0], pair[1])));
            }
        }
        Ok(())
    }

    /// Path cost recomputed from the inputs.
    pub fn path_cost(&self, a: &[T], b: &[T]) -> T {
        self.path
            .iter()
            .fold(T::zero(), |acc, &(i, j)| acc + (a[i] - b[j]).abs())
    }
}

/// Cells allowed per row: row `i` may use columns `ranges[i].0..=ranges[i].1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corridor {
    ranges: Vec<(usize, usize)>,
    cols: usize,
}

impl Corridor {
    pub fn full(rows: usize, cols: usize) -> Self {
        Self {
            ranges: vec![(0, cols - 1); rows],
            cols,
        }
    }

    /// Projects a path found on the half-resolution series onto the full
    /// resolution (each coarse cell covers a 2x2 block) and widens it by
    /// `radius` cells in every direction.
    pub fn from_coarse_path(path: &[(usize, usize)], rows: usize, cols: usize, radius: usize) -> Self {
        let mut lo = vec![usize::MAX; rows];
        let mut hi = vec![0usize; rows];
        for &(ci, cj) in path {
            let (c0, c1) = (2 * cj, (2 * cj + 1).min(cols - 1));
            for i in (2 * ci)..=(2 * ci + 1).min(rows - 1) {
                lo[i] = lo[i].min(c0);
                hi[i] = hi[i].max(c1);
            }
        }
        // Both bounds are non-decreasing in i, so the widened range of row i
        // comes from rows i - radius and i + radius.
        let ranges = (0..rows)
            .map(|i| {
                let l = lo[i.saturating_sub(radius)].saturating_sub(radius);
                let h = (hi[(i + radius).min(rows - 1)] + radius).min(cols - 1);
                (l, h)
            })
            .collect();
        Self { ranges, cols }
    }

    pub fn rows(&self) -> usize {
        self.ranges.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn range(&self, row: usize) -> (usize, usize) {
        self.ranges[row]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.ranges
            .get(i)
            .is_some_and(|&(lo, hi)| lo <= j && j <= hi)
    }

    pub fn cell_count(&self) -> usize {
        self.ranges.iter().map(|&(lo, hi)| hi - lo + 1).sum()
    }

    pub fn is_subset_of(&self, other: &Corridor) -> bool {
        self.rows() == other.rows()
            && self
                .ranges
                .iter()
                .zip(&other.ranges)
                .all(|(&(l, h), &(ol, oh))| ol <= l && h <= oh)
    }
}

const FROM_DIAG: u8 = 0;
const FROM_I: u8 = 1;
const FROM_J: u8 = 2;

/// Dynamic programming restricted to `corridor`.
fn constrained_dtw<T: Scalar>(a: &[T], b: &[T], corridor: &Corridor) -> (T, Vec<(usize, usize)>) {
    let rows = a.len();
    let mut offsets = Vec::with_capacity(rows + 1);
    offsets.push(0usize);
    for i in 0..rows {
        let (lo, hi) = corridor.range(i);
        offsets.push(offsets[i] + hi - lo + 1);
    }
    let mut steps = vec![FROM_DIAG; offsets[rows]];
    let mut prev: Vec<T> = Vec::new();
    let mut cur: Vec<T> = Vec::new();
    let mut prev_range = (1usize, 0usize);

    for i in 0..rows {
        let (lo, hi) = corridor.range(i);
        cur.clear();
        let (plo, phi) = prev_range;
        let prev_at = |j: usize, prev: &[T]| -> Option<T> {
            (i > 0 && plo <= j && j <= phi).then(|| prev[j - plo])
        };
        for j in lo..=hi {
            let local = (a[i] - b[j]).abs();
            let cell = offsets[i] + j - lo;
            if i == 0 && j == 0 {
                cur.push(local);
                continue;
            }
            let mut best = T::infinity();
            let mut step = FROM_DIAG;
            if j > 0 {
                if let Some(d) = prev_at(j - 1, &prev) {
                    best = d;
                }
            }
            if let Some(d) = prev_at(j, &prev) {
                if d < best {
                    best = d;
                    step = FROM_I;
                }
            }
            if j > lo {
                let d = cur[j - 1 - lo];
                if d < best {
                    best = d;
                    step = FROM_J;
                }
            }
            steps[cell] = step;
            cur.push(best + local);
        }
        std::mem::swap(&mut prev, &mut cur);
        prev_range = (lo, hi);
    }

    let total = prev[b.len() - 1 - prev_range.0];
    let mut path = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (rows - 1, b.len() - 1);
    path.push((i, j));
    while (i, j) != (0, 0) {
        let lo = corridor.range(i).0;
        match steps[offsets[i] + j - lo] {
            FROM_DIAG => {
                i -= 1;
                j -= 1;
            }
            FROM_I => i -= 1,
            _ => j -= 1,
        }
        path.push((i, j));
    }
    path.reverse();
    (total, path)
}

fn check_inputs<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("DTW inputs must be non-empty"));
    }
    Ok(())
}

/// Globally optimal warping path over the full cost matrix.
pub fn dtw_exact<T: Scalar>(a: &[T], b: &[T]) -> Result<WarpingResult<T>> {
    check_inputs(a, b)?;
    let (total_cost, path) = constrained_dtw(a, b, &Corridor::full(a.len(), b.len()));
    Ok(WarpingResult {
        total_cost,
        path,
        algorithm: WarpAlgorithm::Exact,
    })
}

/// Halves the resolution: entry `t` is the mean of elements `2t` and
/// `2t + 1`; an odd final element is carried through.
pub fn coarsen<T: Scalar>(values: &[T]) -> Vec<T> {
    let half = T::of(0.5);
    values
        .chunks(2)
        .map(|c| match c {
            [x, y] => (*x + *y) * half,
            [x] => *x,
            _ => unreachable!(),
        })
        .collect()
}

fn fastdtw_rec<T: Scalar>(a: &[T], b: &[T], radius: usize) -> (T, Vec<(usize, usize)>) {
    let min_len = radius + 2;
    if a.len() <= min_len || b.len() <= min_len {
        return constrained_dtw(a, b, &Corridor::full(a.len(), b.len()));
    }
    let (_, coarse_path) = fastdtw_rec(&coarsen(a), &coarsen(b), radius);
    let corridor = Corridor::from_coarse_path(&coarse_path, a.len(), b.len(), radius);
    constrained_dtw(a, b, &corridor)
}

/// FastDTW: solve at half resolution, project the path back, and refine
/// inside a corridor `radius` cells wide around it.
pub fn fastdtw<T: Scalar>(a: &[T], b: &[T], radius: Radius) -> Result<WarpingResult<T>> {
    check_inputs(a, b)?;
    let (total_cost, path) = fastdtw_rec(a, b, radius.get());
    Ok(WarpingResult {
        total_cost,
        path,
        algorithm: WarpAlgorithm::Fast {
            radius: radius.get(),
        },
    })
}
