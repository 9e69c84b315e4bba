//! Synthetic stand-ins for the case-study datasets and small RNG helpers.

#![allow(dead_code)]

use std::f64::consts::TAU;

use mp_robust_core::TimeSeries64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.unit().max(1e-300);
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    }

    pub fn values(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }
}

/// Hourly city traffic: two weekday rush-hour peaks, quieter weekends,
/// multiplicative noise and a few disrupted days.
pub fn traffic_surrogate(n: usize, seed: u64) -> TimeSeries64 {
    let mut rng = Rng::new(seed);
    let disrupted: Vec<usize> = (0..4).map(|_| rng.range(0, n / 24)).collect();
    let values = (0..n)
        .map(|t| {
            let hour = (t % 24) as f64;
            let day = t / 24;
            let weekend = day % 7 >= 5;
            let bump = |c: f64, w: f64| (-(hour - c).powi(2) / (2.0 * w * w)).exp();
            let shape = if weekend {
                0.15 + 0.55 * bump(14.0, 3.5)
            } else {
                0.12 + 0.9 * bump(8.0, 1.5) + 0.75 * bump(17.5, 2.0) + 0.35 * bump(13.0, 3.0)
            };
            let mut v = 20_000.0 * shape * (1.0 + 0.06 * rng.normal());
            if disrupted.contains(&day) {
                v *= 0.4;
            }
            v.max(0.0)
        })
        .collect();
    TimeSeries64::new("traffic-surrogate", values).unwrap()
}

/// Inter-key gaps in ms: log-normal around ~160 ms, clipped to (0, 1000],
/// with slow drift in typing speed.
pub fn keystroke_surrogate(n: usize, seed: u64) -> TimeSeries64 {
    let mut rng = Rng::new(seed);
    let values = (0..n)
        .map(|t| {
            let drift = 0.15 * (TAU * t as f64 / 5_000.0).sin();
            let v = (5.0 + drift + 0.35 * rng.normal()).exp();
            v.clamp(1.0, 1000.0).round()
        })
        .collect();
    TimeSeries64::new("keystrokes-surrogate", values).unwrap()
}

/// Per-minute acceleration magnitude (g): resting baseline with circadian
/// bouts of activity.
pub fn calf_surrogate(n: usize, seed: u64) -> TimeSeries64 {
    let mut rng = Rng::new(seed);
    let mut active_left = 0usize;
    let values = (0..n)
        .map(|t| {
            let minute_of_day = (t % 1440) as f64;
            let daylight = 0.5 + 0.5 * (TAU * (minute_of_day - 360.0) / 1440.0).sin();
            if active_left == 0 && rng.unit() < 0.004 + 0.02 * daylight {
                active_left = rng.range(5, 40);
            }
            let activity = if active_left > 0 {
                active_left -= 1;
                0.25 + 0.15 * rng.normal().abs()
            } else {
                0.0
            };
            1.0 + activity + 0.01 * rng.normal()
        })
        .collect();
    TimeSeries64::new("calf-surrogate", values).unwrap()
}

/// Minimum path-order cost over every monotone connected warping path,
/// by exhaustive depth-first enumeration.
pub fn brute_force_dtw(a: &[f64], b: &[f64]) -> f64 {
    fn walk(a: &[f64], b: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (a[i] - b[j]).abs();
        if i == a.len() - 1 && j == b.len() - 1 {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best
}

/// Textbook normalize-then-subtract distance, independent of the library.
pub fn reference_znorm_distance(a: &[f64], b: &[f64]) -> f64 {
    let norm = |w: &[f64]| -> Vec<f64> {
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let std = (w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        if std < 1e-12 {
            vec![0.0; w.len()]
        } else {
            w.iter().map(|v| (v - mean) / std).collect()
        }
    };
    let (za, zb) = (norm(a), norm(b));
    za.iter().zip(&zb).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Exhaustive double loop over windows: (distances, indices).
pub fn reference_profile(values: &[f64], m: usize, half_width: usize) -> (Vec<f64>, Vec<usize>) {
    let len = values.len() - m + 1;
    let mut distances = Vec::with_capacity(len);
    let mut indices = Vec::with_capacity(len);
    for i in 0..len {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..len {
            if i.abs_diff(j) <= half_width {
                continue;
            }
            let d = reference_znorm_distance(&values[i..i + m], &values[j..j + m]);
            if d < best.0 {
                best = (d, j);
            }
        }
        distances.push(best.0);
        indices.push(best.1);
    }
    (distances, indices)
}
