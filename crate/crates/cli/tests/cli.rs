use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mp_robust_core::{ingest, io};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_mp-robust");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("MP_ROBUST_SEED")
        .output()
        .expect("spawn mp-robust")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_series(dir: &Path, name: &str, values: impl IntoIterator<Item = f64>) -> PathBuf {
    let path = dir.join(name);
    let mut text = String::from("value\n");
    for v in values {
        text.push_str(&format!("{v}\n"));
    }
    fs::write(&path, text).unwrap();
    path
}

fn wave(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(|i| {
        let t = i as f64;
        50.0 + 10.0 * (t / 24.0 * std::f64::consts::TAU).sin() + 3.0 * (t * 0.731).sin() * (t * 0.117).cos()
    })
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn noise_row_counts() {
    let dir = TempDir::new().unwrap();
    let input = write_series(dir.path(), "t.csv", wave(3600));
    let out = dir.path().join("out");

    let r = run(&["noise", "--input", s(&input), "--noise", "dup", "--k", "2", "--seed", "7", "--out", s(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(data_rows(&out.join("t.dup-x2.7.csv")), 3780);
    assert!(out.join("t.dup-x2.7.record.json").exists());

    let r = run(&["noise", "--input", s(&input), "--noise", "irrelevant", "--p", "0.25", "--seed", "7", "--out", s(&out)]);
    assert_eq!(code(&r), 0);
    assert_eq!(data_rows(&out.join("t.irrelevant-25pct.7.csv")), 4500);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write_series(dir.path(), "t.csv", wave(300));
    let flat = write_series(dir.path(), "flat.csv", std::iter::repeat_n(4.0, 300));
    let out = dir.path().join("out");
    let o = s(&out);

    let r = run(&["noise", "--input", s(&input), "--noise", "irrelevant", "--p", "0", "--out", o]);
    assert_eq!(code(&r), 2);
    let r = run(&["mp", "--input", s(&input), "-m", "301", "--out", o]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("window length"));
    let r = run(&["mp", "--input", s(&dir.path().join("missing.csv")), "-m", "10", "--out", o]);
    assert_eq!(code(&r), 2);
    let r = run(&["mp", "--input", s(&input), "--out", o]);
    assert_eq!(code(&r), 2, "generic input needs a window");

    let r = run(&["noise", "--input", s(&flat), "--noise", "irrelevant", "--p", "0.1", "--out", o]);
    assert_eq!(code(&r), 3);
    let r = run(&["robustness", "--input", s(&flat), "-m", "10", "--seeds", "1", "--out", o]);
    assert_eq!(code(&r), 4);

    let r = run(&["mp", "--input", s(&input), "-m", "10", "--out", o]);
    assert_eq!(code(&r), 0);
}

#[test]
fn mp_outputs_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = write_series(dir.path(), "t.csv", wave(400));
    let out = dir.path().join("out");
    let r = run(&["mp", "--input", s(&input), "-m", "24", "--out", s(&out)]);
    assert_eq!(code(&r), 0);

    let m = mp_robust_core::WindowLength::new(24).unwrap();
    let profile = io::read_profile_csv::<f64, _>(
        fs::File::open(out.join("t.mp.csv")).unwrap(),
        m,
        m.default_exclusion(),
    )
    .unwrap();
    assert_eq!(profile.len(), 377);
    let json: mp_robust_core::MatrixProfile64 =
        serde_json::from_slice(&fs::read(out.join("t.mp.json")).unwrap()).unwrap();
    assert_eq!(json.distances, profile.distances);
    assert_eq!(json.indices, profile.indices);
    assert_eq!(data_rows(&out.join("t.mp.plot.csv")), 400);

    let original = io::read_series_csv::<f64, _>(fs::File::open(&input).unwrap(), "t").unwrap();
    let r = run(&["noise", "--input", s(&input), "--noise", "dup", "--k", "3", "--seed", "2", "--out", s(&out)]);
    assert_eq!(code(&r), 0);
    let noisy = io::read_series_csv::<f64, _>(fs::File::open(out.join("t.dup-x3.2.csv")).unwrap(), "n").unwrap();
    let record: mp_robust_core::CorruptionRecord =
        serde_json::from_slice(&fs::read(out.join("t.dup-x3.2.record.json")).unwrap()).unwrap();
    assert_eq!(record.strip(noisy.values()), original.values());
}

#[test]
fn robustness_is_byte_identical_and_has_control_row() {
    let dir = TempDir::new().unwrap();
    let input = write_series(dir.path(), "t.csv", wave(500));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, jobs) in [(&a, "1"), (&b, "2")] {
        let r = run(&[
            "robustness", "--input", s(&input), "-m", "24", "--seeds", "3,4", "--k", "2,4", "--p", "0.05,0.25",
            "--jobs", jobs, "--out", s(out),
        ]);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    }
    for name in ["t.reports.json", "t.table.csv", "t.dissimilarity.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }

    let output: mp_robust_core::GridOutput<f64> =
        serde_json::from_slice(&fs::read(a.join("t.reports.json")).unwrap()).unwrap();
    assert_eq!(output.seeds, vec![3, 4]);
    assert_eq!(output.reports.len(), 8);
    assert_eq!(output.control.as_ref().unwrap().normalized_dissimilarity, 0.0);

    let table = fs::read_to_string(a.join("t.table.csv")).unwrap();
    let control = table.lines().nth(1).unwrap();
    assert!(control.starts_with("t,Original Matrix Profile,0,"), "{control}");
    let diss = fs::read_to_string(a.join("t.dissimilarity.csv")).unwrap();
    assert!(diss.lines().any(|l| l == "Original Matrix Profile,0"));
    assert_eq!(data_rows(&a.join("t.dissimilarity.csv")), 4 + 4);
    assert!(a.join("t.dup-x2.3.align.csv").exists());
    assert!(a.join("t.irrelevant-25pct.3.align.csv").exists());
}

#[test]
fn config_file_and_seed_env() {
    let dir = TempDir::new().unwrap();
    let input = write_series(dir.path(), "t.csv", wave(300));
    let out = dir.path().join("out");
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, format!("window = 20\nseeds = [5]\nout = \"{}\"\n", s(&out))).unwrap();

    let r = run(&["--config", s(&cfg), "robustness", "--input", s(&input), "--noise", "dup", "--k", "2"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let output: mp_robust_core::GridOutput<f64> =
        serde_json::from_slice(&fs::read(out.join("t.reports.json")).unwrap()).unwrap();
    assert_eq!(output.seeds, vec![5]);
    assert_eq!(output.reports[0].window, 20);

    // A flag wins over the file.
    let r = run(&["--config", s(&cfg), "mp", "--input", s(&input), "-m", "30"]);
    assert_eq!(code(&r), 0);
    assert_eq!(data_rows(&out.join("t.mp.csv")), 271);

    fs::write(&cfg, "windw = 20\n").unwrap();
    let r = run(&["--config", s(&cfg), "mp", "--input", s(&input)]);
    assert_eq!(code(&r), 2);

    let r = Command::new(BIN)
        .args(["noise", "--input", s(&input), "--noise", "dup", "--k", "2", "--out", s(&out)])
        .env("MP_ROBUST_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(code(&r), 0);
    assert!(out.join("t.dup-x2.11.csv").exists());
}

#[test]
fn ingest_kinds() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");

    let traffic = dir.path().join("traffic.csv");
    let mut text = String::from("hour_iso8601,site_id,count\n");
    for h in 0..48 {
        for site in ["A", "B"] {
            text.push_str(&format!("2019-03-{:02}T{:02}:00:00Z,{site},{}\n", 1 + h / 24, h % 24, 10 + h));
        }
    }
    fs::write(&traffic, text).unwrap();
    let r = run(&["ingest", "--input", s(&traffic), "--kind", "traffic", "--out", s(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let series = io::read_series_csv::<f64, _>(fs::File::open(out.join("traffic.series.csv")).unwrap(), "x").unwrap();
    assert_eq!(series.len(), 48);
    assert_eq!(series.values()[1], 22.0);
    assert_eq!(series.timestamps().unwrap()[1] - series.timestamps().unwrap()[0], ingest::HOUR_MS);

    let keys = dir.path().join("keys.csv");
    let mut text = String::from("timestamp_ms,key_token\n");
    let mut t = 0;
    for i in 0..50 {
        for k in ["t", "h", "e"] {
            t += 100 + (i * 7) % 40;
            text.push_str(&format!("{t},{k}\n"));
        }
    }
    fs::write(&keys, text).unwrap();
    let r = run(&["ingest", "--input", s(&keys), "--kind", "keystrokes", "--out", s(&out)]);
    assert_eq!(code(&r), 2, "a bigram must be chosen");
    let r = run(&["ingest", "--input", s(&keys), "--kind", "keystrokes", "--top-bigram", "--out", s(&out)]);
    assert_eq!(code(&r), 0);
    assert_eq!(data_rows(&out.join("keys.series.csv")), 50);

    let accel = dir.path().join("calf.csv");
    let mut text = String::from("timestamp_ms,ax,ay,az\n");
    for i in 0..600 {
        text.push_str(&format!("{},3,4,{}\n", i * 1000, if i % 2 == 0 { 0 } else { 12 }));
    }
    fs::write(&accel, text).unwrap();
    let r = run(&["ingest", "--input", s(&accel), "--kind", "calf", "--out", s(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let series = io::read_series_csv::<f64, _>(fs::File::open(out.join("calf.series.csv")).unwrap(), "x").unwrap();
    assert_eq!(series.len(), 10);
    assert!(series.values().iter().all(|&v| (v - 9.0).abs() < 1e-12));
}
