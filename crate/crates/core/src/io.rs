//! CSV and JSON layouts for series, profiles, warping paths and reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! series written here reads back bit-for-bit.

use std::io::{Read, Write};

use serde::Serialize;

use crate::dtw::WarpingResult;
use crate::error::{Error, Result};
use crate::ingest::parse_timestamp_ms;
use crate::mp::MatrixProfile;
use crate::robustness::{GridOutput, CONTROL_LABEL};
use crate::scalar::Scalar;
use crate::series::{ExclusionZone, TimeSeries, WindowLength};

/// `value` column, preceded by `timestamp_ms` when the series has timestamps.
pub fn write_series_csv<T: Scalar, W: Write>(series: &TimeSeries<T>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    match series.timestamps() {
        Some(ts) => {
            w.write_record(["timestamp_ms", "value"])?;
            for (t, v) in ts.iter().zip(series.values()) {
                w.write_record([t.to_string(), v.to_string()])?;
            }
        }
        None => {
            w.write_record(["value"])?;
            for v in series.values() {
                w.write_record([v.to_string()])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads the `value` column (or the only column) of a generic series CSV,
/// plus `timestamp_ms` when present.
pub fn read_series_csv<T: Scalar, R: Read>(reader: R, name: &str) -> Result<TimeSeries<T>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let value_col = headers
        .iter()
        .position(|h| h == "value")
        .or((headers.len() == 1).then_some(0))
        .ok_or_else(|| Error::Parse(format!("no 'value' column in {headers:?}")))?;
    let ts_col = headers.iter().position(|h| h == "timestamp_ms");
    let mut values = Vec::new();
    let mut stamps = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let raw = rec.get(value_col).unwrap_or("").trim();
        let v: f64 = raw
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: '{raw}' is not a number", line + 2)))?;
        values.push(T::of(v));
        if let Some(c) = ts_col {
            stamps.push(parse_timestamp_ms(rec.get(c).unwrap_or(""))?);
        }
    }
    let series = TimeSeries::new(name, values)?;
    if ts_col.is_some() {
        series.with_timestamps(stamps)
    } else {
        Ok(series)
    }
}

/// `position,distance,index` rows.
pub fn write_profile_csv<T: Scalar, W: Write>(profile: &MatrixProfile<T>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["position", "distance", "index"])?;
    for (i, (d, j)) in profile.distances.iter().zip(&profile.indices).enumerate() {
        w.write_record([i.to_string(), d.to_string(), j.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a profile CSV back; window and exclusion are not stored in the file.
pub fn read_profile_csv<T: Scalar, R: Read>(
    reader: R,
    window: WindowLength,
    exclusion: ExclusionZone,
) -> Result<MatrixProfile<T>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut distances = Vec::new();
    let mut indices = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse_err = || Error::Parse(format!("row {}: malformed profile row", line + 2));
        let pos: usize = rec.get(0).ok_or_else(parse_err)?.trim().parse().map_err(|_| parse_err())?;
        if pos != line {
            return Err(Error::Parse(format!("row {}: position {pos} out of sequence", line + 2)));
        }
        let d: f64 = rec.get(1).ok_or_else(parse_err)?.trim().parse().map_err(|_| parse_err())?;
        let j: usize = rec.get(2).ok_or_else(parse_err)?.trim().parse().map_err(|_| parse_err())?;
        distances.push(T::of(d));
        indices.push(j);
    }
    let profile = MatrixProfile {
        source_length: distances.len() + window.get() - 1,
        distances,
        indices,
        window,
        exclusion,
    };
    profile.validate()?;
    Ok(profile)
}

/// Two-column `i,j` warping path.
pub fn write_path_csv<T: Scalar, W: Write>(result: &WarpingResult<T>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["i", "j"])?;
    for (i, j) in &result.path {
        w.write_record([i.to_string(), j.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Matched pairs of two profiles along a warping path:
/// `i,j,original,noisy,abs_diff`.
pub fn write_alignment_csv<T: Scalar, W: Write>(
    original: &[T],
    noisy: &[T],
    result: &WarpingResult<T>,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["i", "j", "original", "noisy", "abs_diff"])?;
    for &(i, j) in &result.path {
        let (a, b) = (original[i], noisy[j]);
        w.write_record([
            i.to_string(),
            j.to_string(),
            a.to_string(),
            b.to_string(),
            (a - b).abs().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Raw series next to its profile: `position,value,distance`, with an empty
/// distance for the last `m - 1` positions.
pub fn write_plot_csv<T: Scalar, W: Write>(
    series: &TimeSeries<T>,
    profile: &MatrixProfile<T>,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["position", "value", "distance"])?;
    for (i, v) in series.values().iter().enumerate() {
        let d = profile.distances.get(i).map(|d| d.to_string()).unwrap_or_default();
        w.write_record([i.to_string(), v.to_string(), d])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<S: Serialize, W: Write>(value: &S, mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Per-dataset table: `Signal,Type,Sum abs diffs,Mean,Max,Min`, a control
/// row followed by the seed-averaged grid points.
pub fn write_summary_table<T: Scalar, W: Write>(output: &GridOutput<T>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["Signal", "Type", "Sum abs diffs", "Mean", "Max", "Min"])?;
    if let Some(control) = &output.control {
        let s = &control.original_summary;
        w.write_record([
            output.dataset.clone(),
            CONTROL_LABEL.to_string(),
            control.sum_abs_diffs.to_string(),
            s.mean.to_string(),
            s.max.to_string(),
            s.min.to_string(),
        ])?;
    }
    for avg in &output.averages {
        let s = &avg.mean_noisy_summary;
        w.write_record([
            output.dataset.clone(),
            avg.label.clone(),
            avg.mean_sum_abs_diffs.to_string(),
            s.mean.to_string(),
            s.max.to_string(),
            s.min.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Normalized dissimilarities, one column per dataset and one row per grid
/// point, headed by `N`, `MP Length` and `Maximum value` rows.
pub fn write_dissimilarity_table<T: Scalar, W: Write>(outputs: &[GridOutput<T>], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["Data set".to_string()];
    header.extend(outputs.iter().map(|o| o.dataset.clone()));
    w.write_record(&header)?;

    let meta = |label: &str, f: &dyn Fn(&GridOutput<T>) -> String| {
        let mut row = vec![label.to_string()];
        row.extend(outputs.iter().map(f));
        row
    };
    w.write_record(meta("N", &|o| {
        o.control.as_ref().map(|c| c.original_series_length.to_string()).unwrap_or_default()
    }))?;
    w.write_record(meta("MP Length", &|o| {
        o.control.as_ref().map(|c| c.original_mp_length.to_string()).unwrap_or_default()
    }))?;
    w.write_record(meta("Maximum value", &|o| {
        o.control.as_ref().map(|c| c.original_summary.max.to_string()).unwrap_or_default()
    }))?;
    w.write_record(meta(CONTROL_LABEL, &|o| {
        o.control.as_ref().map(|c| c.normalized_dissimilarity.to_string()).unwrap_or_default()
    }))?;

    let mut labels: Vec<String> = Vec::new();
    for o in outputs {
        for a in &o.averages {
            if !labels.contains(&a.label) {
                labels.push(a.label.clone());
            }
        }
    }
    for label in labels {
        let mut row = vec![label.clone()];
        row.extend(outputs.iter().map(|o| {
            o.averages
                .iter()
                .find(|a| a.label == label)
                .map(|a| a.mean_dissimilarity.to_string())
                .unwrap_or_default()
        }));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
