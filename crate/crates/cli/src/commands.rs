use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use mp_robust_core::ingest::{self, DEFAULT_MAX_GAP_MS, MINUTE_MS};
use mp_robust_core::noise::DEFAULT_ANOMALY_FRACTION;
use mp_robust_core::{
    fastdtw, io, matrix_profile_fast, run_grid, summarize, ExclusionZone, GridConfig, GridPoint,
    NoiseKind, NoiseSpec, Radius, TimeSeries64, WindowLength,
};
use serde::Serialize;

use crate::config::{self, DatasetKind, FileConfig, Format, NoiseChoice};
use crate::output::write_atomic;
use crate::{CliError, InputArgs, MpArgs, NoiseArgs, RobustnessArgs, WindowArgs};

type CmdResult = Result<(), CliError>;

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string())
}

fn out_dir(args: &InputArgs, file: &FileConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

fn kind(args: &InputArgs, file: &FileConfig) -> DatasetKind {
    args.kind.or(file.kind).unwrap_or(DatasetKind::Generic)
}

fn parse_bigram(raw: &str) -> Result<(String, String), CliError> {
    match raw.split_once(',') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(CliError::config(format!(
            "--bigram expects `first,second`, got '{raw}'"
        ))),
    }
}

/// Reads one input as a series according to `--kind`.
fn load_series(path: &Path, name: String, args: &InputArgs, file: &FileConfig) -> Result<TimeSeries64, CliError> {
    let reader = open(path)?;
    let series = match kind(args, file) {
        DatasetKind::Generic => io::read_series_csv(reader, &name)?,
        DatasetKind::Traffic => {
            let readings = ingest::read_traffic(reader)?;
            ingest::traffic_hourly_sum::<f64>(&readings).into_series(name)?
        }
        DatasetKind::Calf => {
            let interval = args.interval_ms.or(file.interval_ms).unwrap_or(MINUTE_MS);
            let samples = ingest::read_accel_magnitudes(reader)?.collect::<Result<Vec<_>, _>>()?;
            let resampled = ingest::resample_mean::<f64, _>(samples, interval)?;
            if resampled.empty_buckets > 0 {
                log::warn!(
                    "{}: {} empty {interval} ms buckets skipped",
                    path.display(),
                    resampled.empty_buckets
                );
            }
            resampled.data.into_series(name)?
        }
        DatasetKind::Keystrokes => {
            let events = ingest::read_keystrokes(reader)?;
            let max_gap = args.max_gap_ms.or(file.max_gap_ms).unwrap_or(DEFAULT_MAX_GAP_MS);
            let bigram = match args.bigram.as_deref().or(file.bigram.as_deref()) {
                Some(raw) => parse_bigram(raw)?,
                None if args.top_bigram || file.top_bigram.unwrap_or(false) => {
                    ingest::top_bigram(&events, max_gap).ok_or_else(|| {
                        CliError::config(format!("{}: no bigram within {max_gap} ms", path.display()))
                    })?
                }
                None => {
                    return Err(CliError::config(
                        "keystroke input needs --bigram a,b or --top-bigram",
                    ))
                }
            };
            log::info!("bigram '{}','{}'", bigram.0, bigram.1);
            ingest::bigram_gaps::<f64>(&events, (&bigram.0, &bigram.1), max_gap).into_series(name)?
        }
    };
    log::info!("{}: {} values", series.name(), series.len());
    Ok(series)
}

/// Loads every `--input`, naming them by `--name` (single input) or file stem.
fn load_all(args: &InputArgs, file: &FileConfig) -> Result<Vec<TimeSeries64>, CliError> {
    if args.name.is_some() && args.input.len() > 1 {
        return Err(CliError::config("--name only applies to a single --input"));
    }
    args.input
        .iter()
        .map(|p| {
            let name = args.name.clone().unwrap_or_else(|| stem(p));
            load_series(p, name, args, file)
        })
        .collect()
}

fn load_one(args: &InputArgs, file: &FileConfig) -> Result<TimeSeries64, CliError> {
    if args.input.len() != 1 {
        return Err(CliError::config("this subcommand takes exactly one --input"));
    }
    Ok(load_all(args, file)?.remove(0))
}

fn default_window(kind: DatasetKind) -> Option<usize> {
    match kind {
        DatasetKind::Keystrokes => Some(20),
        DatasetKind::Calf => Some(60),
        DatasetKind::Traffic => Some(24),
        DatasetKind::Generic => None,
    }
}

fn window_and_zone(
    w: &WindowArgs,
    kind: DatasetKind,
    file: &FileConfig,
) -> Result<(WindowLength, ExclusionZone), CliError> {
    let m = w
        .window
        .or(file.window)
        .or(default_window(kind))
        .ok_or_else(|| CliError::config("-m/--window is required for generic input"))?;
    let m = WindowLength::new(m)?;
    let zone = w
        .exclusion
        .or(file.exclusion)
        .map(ExclusionZone::new)
        .unwrap_or_else(|| m.default_exclusion());
    Ok((m, zone))
}

fn fraction(flag: Option<f64>, file: &FileConfig) -> f64 {
    flag.or(file.fraction).unwrap_or(DEFAULT_ANOMALY_FRACTION)
}

fn json_or_csv(flag: Option<Format>, file: &FileConfig) -> Format {
    flag.or(file.format).unwrap_or(Format::Json)
}

pub fn ingest(args: &InputArgs, file: &FileConfig) -> CmdResult {
    let dir = out_dir(args, file);
    for series in load_all(args, file)? {
        write_atomic(&dir, &format!("{}.series.csv", series.name()), |w| {
            io::write_series_csv(&series, w)
        })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MpSummary<'a> {
    dataset: &'a str,
    window: usize,
    exclusion_half_width: usize,
    series_length: usize,
    mp_length: usize,
    mean: f64,
    max: f64,
    min: f64,
}

pub fn mp(args: &MpArgs, file: &FileConfig) -> CmdResult {
    let series = load_one(&args.input, file)?;
    let (m, zone) = window_and_zone(&args.window, kind(&args.input, file), file)?;
    let profile = matrix_profile_fast(&series, m, zone)?;
    let summary = summarize(&profile)?;
    let dir = out_dir(&args.input, file);
    let name = series.name();

    write_atomic(&dir, &format!("{name}.mp.csv"), |w| io::write_profile_csv(&profile, w))?;
    write_atomic(&dir, &format!("{name}.mp.plot.csv"), |w| {
        io::write_plot_csv(&series, &profile, w)
    })?;
    let doc = MpSummary {
        dataset: name,
        window: m.get(),
        exclusion_half_width: zone.half_width,
        series_length: series.len(),
        mp_length: profile.len(),
        mean: summary.mean,
        max: summary.max,
        min: summary.min,
    };
    write_atomic(&dir, &format!("{name}.mp.summary.json"), |w| io::write_json(&doc, w))?;
    if json_or_csv(args.format, file) == Format::Json {
        write_atomic(&dir, &format!("{name}.mp.json"), |w| io::write_json(&profile, w))?;
    }
    Ok(())
}

pub fn noise(args: &NoiseArgs, file: &FileConfig) -> CmdResult {
    let series = load_one(&args.input, file)?;
    let kind = match args.noise {
        NoiseChoice::Dup => NoiseKind::DuplicatedAnomaly {
            times: args
                .k
                .ok_or_else(|| CliError::config("--noise dup requires --k"))?,
        },
        NoiseChoice::Irrelevant => NoiseKind::IrrelevantFeatures {
            fraction: args
                .p
                .ok_or_else(|| CliError::config("--noise irrelevant requires --p"))?,
        },
    };
    let seed = config::resolve_seeds(None, args.seed, file, 1)?[0];
    let spec = NoiseSpec {
        kind,
        anomaly_fraction: fraction(args.fraction, file),
        seed,
        placement: args
            .duplicate_placement
            .or(file.duplicate_placement)
            .map(Into::into)
            .unwrap_or_default(),
    };
    let (noisy, record) = spec.apply(&series)?;
    let dir = out_dir(&args.input, file);
    write_atomic(&dir, &format!("{}.csv", noisy.name()), |w| io::write_series_csv(&noisy, w))?;
    write_atomic(&dir, &format!("{}.record.json", noisy.name()), |w| {
        io::write_json(&record, w)
    })?;
    Ok(())
}

fn grid_points(args: &RobustnessArgs) -> Result<Vec<GridPoint>, CliError> {
    let dups = || -> Vec<GridPoint> {
        match &args.k {
            Some(ks) => ks.iter().map(|&times| GridPoint::Duplicated { times }).collect(),
            None => GridPoint::standard_grid()
                .into_iter()
                .filter(|p| matches!(p, GridPoint::Duplicated { .. }))
                .collect(),
        }
    };
    let irr = || -> Vec<GridPoint> {
        match &args.p {
            Some(ps) => ps.iter().map(|&fraction| GridPoint::Irrelevant { fraction }).collect(),
            None => GridPoint::standard_grid()
                .into_iter()
                .filter(|p| matches!(p, GridPoint::Irrelevant { .. }))
                .collect(),
        }
    };
    let points = match args.noise {
        Some(NoiseChoice::Dup) => dups(),
        Some(NoiseChoice::Irrelevant) => irr(),
        None => dups().into_iter().chain(irr()).collect(),
    };
    if points.is_empty() {
        return Err(CliError::config("the noise grid is empty"));
    }
    Ok(points)
}

pub fn robustness(args: &RobustnessArgs, file: &FileConfig) -> CmdResult {
    let inputs = load_all(&args.input, file)?;
    let dataset_kind = kind(&args.input, file);
    let (m, zone) = window_and_zone(&args.window, dataset_kind, file)?;
    let radius = Radius::new(args.radius.or(file.radius).unwrap_or(mp_robust_core::dtw::DEFAULT_RADIUS))?;
    let seeds = config::resolve_seeds(args.seeds.clone(), args.seed, file, config::DEFAULT_SEED_COUNT)?;
    if seeds.is_empty() {
        return Err(CliError::config("at least one seed is required"));
    }
    let grid = GridConfig {
        window: m,
        exclusion: zone,
        radius,
        anomaly_fraction: fraction(args.fraction, file),
        placement: args
            .duplicate_placement
            .or(file.duplicate_placement)
            .map(Into::into)
            .unwrap_or_default(),
        points: grid_points(args)?,
    };
    let dir = out_dir(&args.input, file);
    let format = json_or_csv(args.format, file);

    let mut outputs = Vec::with_capacity(inputs.len());
    for series in &inputs {
        let output = run_grid(series, &grid, &seeds)?;
        let name = series.name();
        if format == Format::Json {
            write_atomic(&dir, &format!("{name}.reports.json"), |w| io::write_json(&output, w))?;
        }
        write_atomic(&dir, &format!("{name}.table.csv"), |w| {
            io::write_summary_table(&output, w)
        })?;
        write_alignments(&dir, series, &grid, seeds[0])?;
        outputs.push(output);
    }
    let table_name = if outputs.len() == 1 {
        format!("{}.dissimilarity.csv", outputs[0].dataset)
    } else {
        "dissimilarity.csv".to_string()
    };
    write_atomic(&dir, &table_name, |w| io::write_dissimilarity_table(&outputs, w))?;
    Ok(())
}

/// Matched-pair data for the first seed of every grid point.
fn write_alignments(dir: &Path, series: &TimeSeries64, grid: &GridConfig, seed: u64) -> CmdResult {
    let original = matrix_profile_fast(series, grid.window, grid.exclusion)?;
    for point in &grid.points {
        let spec = point.spec(seed, grid.anomaly_fraction, grid.placement);
        let (noisy, _) = spec.apply(series)?;
        let noisy_mp = matrix_profile_fast(&noisy, grid.window, grid.exclusion)?;
        let result = fastdtw(&original.distances, &noisy_mp.distances, grid.radius)?;
        write_atomic(dir, &format!("{}.align.csv", noisy.name()), |w| {
            io::write_alignment_csv(&original.distances, &noisy_mp.distances, &result, w)
        })?;
    }
    Ok(())
}
