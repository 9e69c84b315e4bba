//! Preprocessing for the three case-study sources: accelerometer magnitude
//! and resampling, keystroke bigram gaps, and hourly traffic totals.
//!
//! CSV layouts (header row required, UTF-8):
//!
//! * keystrokes: `timestamp_ms,key_token`
//! * accelerometer: `timestamp_ms,ax,ay,az`
//! * traffic: `hour_iso8601,site_id,count`
//!
//! Column lookup is by name and accepts a few aliases used by the public
//! exports (`End_Time`, `Site`, `Sum_Volume`, `x`/`y`/`z`, ...). Timestamp
//! columns take integer UTC milliseconds or a date-time string, which is
//! read as UTC unless it carries an offset.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use chrono::{DateTime, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

pub const HOUR_MS: i64 = 3_600_000;
pub const MINUTE_MS: i64 = 60_000;
pub const DEFAULT_MAX_GAP_MS: i64 = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccelSample {
    pub timestamp_ms: i64,
    pub accel_x: f64,
    pub accel_y: f64,
    pub accel_z: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeystrokeEvent {
    pub timestamp_ms: i64,
    pub key_token: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrafficReading {
    /// Start of the hour, UTC milliseconds.
    pub hour_ms: i64,
    pub site_id: String,
    pub count: u64,
}

/// Values paired with UTC millisecond timestamps.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Timestamped<T> {
    pub timestamps: Vec<i64>,
    pub values: Vec<T>,
}

impl<T: Scalar> Timestamped<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_series(self, name: impl Into<String>) -> Result<TimeSeries<T>> {
        TimeSeries::new(name, self.values)?.with_timestamps(self.timestamps)
    }
}

/// Orientation-free acceleration magnitude `sqrt(x^2 + y^2 + z^2)`.
pub fn amag<T: Scalar>(x: T, y: T, z: T) -> Result<T> {
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::invalid(format!(
            "non-finite acceleration component ({x}, {y}, {z})"
        )));
    }
    Ok((x * x + y * y + z * z).sqrt())
}

/// Result of [`resample_mean`]: the bucket means plus the number of empty
/// buckets that were skipped between the first and last sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Resampled<T> {
    pub data: Timestamped<T>,
    pub empty_buckets: usize,
}

/// Mean of the samples in each non-overlapping, epoch-aligned bucket of
/// `interval_ms`. Empty buckets produce no value.
pub fn resample_mean<T, I>(samples: I, interval_ms: i64) -> Result<Resampled<T>>
where
    T: Scalar,
    I: IntoIterator<Item = (i64, T)>,
{
    if interval_ms <= 0 {
        return Err(Error::invalid(format!(
            "resampling interval must be positive, got {interval_ms} ms"
        )));
    }
    let mut out = Resampled {
        data: Timestamped {
            timestamps: Vec::new(),
            values: Vec::new(),
        },
        empty_buckets: 0,
    };
    let mut current: Option<(i64, T, usize)> = None;
    let mut last_ts = i64::MIN;
    let flush = |bucket: i64, sum: T, count: usize, out: &mut Resampled<T>| {
        if let Some(&prev) = out.data.timestamps.last() {
            let skipped = ((bucket - prev) / interval_ms - 1) as usize;
            if skipped > 0 {
                log::warn!("{skipped} empty resampling bucket(s) before t={bucket} ms");
                out.empty_buckets += skipped;
            }
        }
        out.data.timestamps.push(bucket);
        out.data.values.push(sum / T::of_usize(count));
    };
    for (idx, (ts, v)) in samples.into_iter().enumerate() {
        if ts < last_ts {
            return Err(Error::invalid(format!(
                "samples out of order at position {idx}: {ts} ms after {last_ts} ms"
            )));
        }
        last_ts = ts;
        let bucket = ts.div_euclid(interval_ms) * interval_ms;
        current = match current {
            Some((b, sum, count)) if b == bucket => Some((b, sum + v, count + 1)),
            Some((b, sum, count)) => {
                flush(b, sum, count, &mut out);
                Some((bucket, v, 1))
            }
            None => Some((bucket, v, 1)),
        };
    }
    if let Some((b, sum, count)) = current {
        flush(b, sum, count, &mut out);
    }
    Ok(out)
}

/// Inter-key gap (ms) for each adjacent event pair spelling `bigram`,
/// keeping gaps in `(0, max_gap_ms]`. Timestamps are those of the second key.
pub fn bigram_gaps<T: Scalar>(
    events: &[KeystrokeEvent],
    bigram: (&str, &str),
    max_gap_ms: i64,
) -> Timestamped<T> {
    let mut out = Timestamped::default();
    for pair in events.windows(2) {
        if pair[0].key_token == bigram.0 && pair[1].key_token == bigram.1 {
            let gap = pair[1].timestamp_ms - pair[0].timestamp_ms;
            if gap > 0 && gap <= max_gap_ms {
                out.timestamps.push(pair[1].timestamp_ms);
                out.values.push(T::of(gap as f64));
            }
        }
    }
    out
}

/// Most frequent adjacent pair whose gap lies in `(0, max_gap_ms]`; ties go
/// to the lexicographically smallest pair.
pub fn top_bigram(events: &[KeystrokeEvent], max_gap_ms: i64) -> Option<(String, String)> {
    let mut counts: HashMap<(&str, &str), usize> = HashMap::new();
    for pair in events.windows(2) {
        let gap = pair[1].timestamp_ms - pair[0].timestamp_ms;
        if gap > 0 && gap <= max_gap_ms {
            *counts
                .entry((pair[0].key_token.as_str(), pair[1].key_token.as_str()))
                .or_default() += 1;
        }
    }
    counts
        .into_iter()
        .max_by(|(ka, ca), (kb, cb)| ca.cmp(cb).then_with(|| kb.cmp(ka)))
        .map(|((a, b), _)| (a.to_string(), b.to_string()))
}

/// Total count over all sites for each hour present, in time order.
pub fn traffic_hourly_sum<T: Scalar>(readings: &[TrafficReading]) -> Timestamped<T> {
    let mut hours: BTreeMap<i64, u64> = BTreeMap::new();
    for r in readings {
        *hours.entry(r.hour_ms.div_euclid(HOUR_MS) * HOUR_MS).or_default() += r.count;
    }
    Timestamped {
        timestamps: hours.keys().copied().collect(),
        values: hours.values().map(|&c| T::of(c as f64)).collect(),
    }
}

/// Parses integer milliseconds or a date-time string into UTC milliseconds.
pub fn parse_timestamp_ms(raw: &str) -> Result<i64> {
    let s = raw.trim();
    if let Ok(ms) = s.parse::<i64>() {
        // 14-digit compact stamps (YYYYMMDDHHMMSS) are not epoch milliseconds.
        if s.len() != 14 {
            return Ok(ms);
        }
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp_millis());
    }
    const FORMATS: [&str; 6] = [
        "%Y-%m-%dT%H:%M:%S%.f",
        "%Y-%m-%d %H:%M:%S%.f",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
        "%Y%m%d%H%M%S",
        "%d/%m/%Y %H:%M",
    ];
    for fmt in FORMATS {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(dt.and_utc().timestamp_millis());
        }
    }
    Err(Error::Parse(format!("unrecognized timestamp '{raw}'")))
}

struct Columns {
    headers: Vec<String>,
}

impl Columns {
    fn new(headers: &csv::StringRecord) -> Self {
        Self {
            headers: headers.iter().map(|h| h.trim().to_ascii_lowercase()).collect(),
        }
    }

    fn find(&self, aliases: &[&str]) -> Result<usize> {
        aliases
            .iter()
            .find_map(|a| self.headers.iter().position(|h| h == a))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "missing column; expected one of {aliases:?}, found {:?}",
                    self.headers
                ))
            })
    }
}

fn field(record: &csv::StringRecord, col: usize, line: usize) -> Result<&str> {
    record
        .get(col)
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("row {line}: missing field {col}")))
}

fn number(record: &csv::StringRecord, col: usize, line: usize) -> Result<f64> {
    let raw = field(record, col, line)?;
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::Parse(format!("row {line}: '{raw}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("row {line}: non-finite value '{raw}'")));
    }
    Ok(v)
}

const TIME_ALIASES: [&str; 5] = ["timestamp_ms", "timestamp", "time", "end_time", "hour_iso8601"];

pub fn read_keystrokes<R: Read>(reader: R) -> Result<Vec<KeystrokeEvent>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let cols = Columns::new(rdr.headers()?);
    let t = cols.find(&TIME_ALIASES)?;
    let k = cols.find(&["key_token", "key", "token"])?;
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        out.push(KeystrokeEvent {
            timestamp_ms: parse_timestamp_ms(field(&rec, t, line + 2)?)?,
            key_token: field(&rec, k, line + 2)?.to_string(),
        });
    }
    Ok(out)
}

/// Streams `(timestamp_ms, amag)` pairs from an accelerometer CSV.
pub fn read_accel_magnitudes<R: Read>(reader: R) -> Result<impl Iterator<Item = Result<(i64, f64)>>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let cols = Columns::new(rdr.headers()?);
    let t = cols.find(&TIME_ALIASES)?;
    let x = cols.find(&["ax", "accel_x", "x"])?;
    let y = cols.find(&["ay", "accel_y", "y"])?;
    let z = cols.find(&["az", "accel_z", "z"])?;
    Ok(rdr.into_records().enumerate().map(move |(line, rec)| {
        let rec = rec?;
        let line = line + 2;
        let ts = parse_timestamp_ms(field(&rec, t, line)?)?;
        let m = amag(number(&rec, x, line)?, number(&rec, y, line)?, number(&rec, z, line)?)?;
        Ok((ts, m))
    }))
}

pub fn read_accel<R: Read>(reader: R) -> Result<Vec<AccelSample>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let cols = Columns::new(rdr.headers()?);
    let t = cols.find(&TIME_ALIASES)?;
    let x = cols.find(&["ax", "accel_x", "x"])?;
    let y = cols.find(&["ay", "accel_y", "y"])?;
    let z = cols.find(&["az", "accel_z", "z"])?;
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line + 2;
        out.push(AccelSample {
            timestamp_ms: parse_timestamp_ms(field(&rec, t, line)?)?,
            accel_x: number(&rec, x, line)?,
            accel_y: number(&rec, y, line)?,
            accel_z: number(&rec, z, line)?,
        });
    }
    Ok(out)
}

pub fn read_traffic<R: Read>(reader: R) -> Result<Vec<TrafficReading>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let cols = Columns::new(rdr.headers()?);
    let t = cols.find(&["hour_iso8601", "end_time", "hour", "timestamp", "timestamp_ms"])?;
    let s = cols.find(&["site_id", "site"])?;
    let c = cols.find(&["count", "sum_volume", "volume"])?;
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line + 2;
        let raw = field(&rec, c, line)?;
        let count: u64 = raw
            .parse()
            .map_err(|_| Error::Parse(format!("row {line}: count '{raw}' is not a nonnegative integer")))?;
        out.push(TrafficReading {
            hour_ms: parse_timestamp_ms(field(&rec, t, line)?)?,
            site_id: field(&rec, s, line)?.to_string(),
            count,
        });
    }
    Ok(out)
}
