//! Z-normalization and the z-normalized Euclidean distance.
//!
//! A window whose population standard deviation falls below
//! [`Scalar::degeneracy_epsilon`] normalizes to all zeros. That makes the
//! distance between two constant windows 0 and between a constant and a
//! non-constant window exactly `sqrt(m)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ZNormalized<T> {
    pub values: Vec<T>,
    /// Set when the window had (numerically) zero variance.
    pub degenerate: bool,
}

/// Mean and population standard deviation, two-pass.
pub(crate) fn mean_std<T: Scalar>(window: &[T]) -> (T, T) {
    let len = T::of_usize(window.len());
    let mean = window.iter().copied().sum::<T>() / len;
    let var = window
        .iter()
        .map(|&v| {
            let d = v - mean;
            d * d
        })
        .sum::<T>()
        / len;
    (mean, var.sqrt())
}

pub(crate) fn is_degenerate<T: Scalar>(std: T) -> bool {
    std.is_nan() || std < T::degeneracy_epsilon()
}

pub fn z_normalize<T: Scalar>(window: &[T]) -> Result<ZNormalized<T>> {
    if window.len() < 2 {
        return Err(Error::invalid(format!(
            "z-normalization needs a window of at least 2 values, got {}",
            window.len()
        )));
    }
    let (mean, std) = mean_std(window);
    if is_degenerate(std) {
        return Ok(ZNormalized {
            values: vec![T::zero(); window.len()],
            degenerate: true,
        });
    }
    Ok(ZNormalized {
        values: window.iter().map(|&v| (v - mean) / std).collect(),
        degenerate: false,
    })
}

/// Squared Euclidean distance between windows already reduced to `(mean, std)`.
/// Degenerate windows contribute zeros.
pub(crate) fn znorm_sq_distance_with_stats<T: Scalar>(
    a: &[T],
    (mean_a, std_a): (T, T),
    b: &[T],
    (mean_b, std_b): (T, T),
) -> T {
    let za = |v: T| {
        if is_degenerate(std_a) {
            T::zero()
        } else {
            (v - mean_a) / std_a
        }
    };
    let zb = |v: T| {
        if is_degenerate(std_b) {
            T::zero()
        } else {
            (v - mean_b) / std_b
        }
    };
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = za(x) - zb(y);
            d * d
        })
        .sum()
}

/// Clamp a distance into the admissible range `[0, 2 sqrt(m)]`.
pub(crate) fn clamp_distance<T: Scalar>(d: T, m: usize) -> T {
    let upper = T::of(2.0) * T::of_usize(m).sqrt();
    d.max(T::zero()).min(upper)
}

pub fn znorm_distance<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "windows must have equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::invalid(format!(
            "windows must have at least 2 values, got {}",
            a.len()
        )));
    }
    let sq = znorm_sq_distance_with_stats(a, mean_std(a), b, mean_std(b));
    Ok(clamp_distance(sq.sqrt(), a.len()))
}
