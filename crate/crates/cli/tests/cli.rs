use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const ROW1: &str = "0.2130,0.3291,1.4299,1.1817,17.1984";
const STRONG: &str = "0.7210,0.1479,0.0121,7.4189,65.6983";

fn eggfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eggfit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = eggfit(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &TempDir, name: &str, params: &str, n: usize, seed: u64) -> PathBuf {
    let p = path(dir, name);
    ok(&[
        "synth",
        "--params",
        params,
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--output",
        s(&p),
    ]);
    p
}

fn fit(dir: &TempDir, input: &Path, model: &str, name: &str) -> (PathBuf, Value) {
    let p = path(dir, name);
    ok(&["fit", "--input", s(input), "--model", model, "--output", s(&p)]);
    let v = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    (p, v)
}

/// `(snr_db, value, kind)` rows of a curve CSV.
fn rows(csv: &str) -> Vec<(f64, f64, String)> {
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("snr_db,value,kind"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string())
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn synth_then_fit_recovers_scintillation_index() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "row1.txt", ROW1, 100_000, 11);
    let (_, report) = fit(&dir, &data, "egg", "fit.json");
    let si = report["scintillation_index"].as_f64().unwrap();
    assert!(rel(si, 0.1484) < 0.05, "{si}");
    assert_eq!(report["model"], "egg");
    assert_eq!(report["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["input_digest"].as_str().unwrap().len(), 64);
    for key in ["loglik", "iterations", "converged", "em_config", "gof"] {
        assert!(report.get(key).is_some(), "{key}");
    }
}

#[test]
fn eg_fit_has_gamma_parameter_names() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "eg.txt", "0.3,0.4,2.5,0.6,1", 20_000, 3);
    let (_, report) = fit(&dir, &data, "eg", "eg.json");
    let mut keys: Vec<&str> = report["params"]
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    keys.sort();
    assert_eq!(keys, ["alpha", "beta", "lambda", "omega"]);
}

#[test]
fn fit_is_deterministic_and_report_reloads() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.txt", ROW1, 5_000, 2);
    let (p1, v) = fit(&dir, &data, "egg", "r1.json");
    let (p2, _) = fit(&dir, &data, "egg", "r2.json");
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    let from_report = ok(&["perf", "outage", "--report", s(&p1), "--snr-db", "20:20:1"]);
    let p = &v["params"];
    let inline = ["omega", "lambda", "a", "b", "c"]
        .iter()
        .map(|k| p[k].as_f64().unwrap().to_string())
        .collect::<Vec<_>>()
        .join(",");
    assert_eq!(
        from_report,
        ok(&["perf", "outage", "--params", &inline, "--snr-db", "20:20:1"])
    );
}

#[test]
fn non_positive_sample_is_input_error() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "bad.txt");
    fs::write(&p, "# header comment\nirradiance\n0.4\n1.2\n0\n0.7\n").unwrap();
    let out = eggfit(&["fit", "--input", s(&p)]);
    assert_eq!(code(&out), 2);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line 5"), "{msg}");
    let out = eggfit(&["fit", "--input", s(&path(&dir, "missing.txt"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn too_few_samples_is_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "two.txt");
    fs::write(&p, "0.4\n1.2\n").unwrap();
    assert_eq!(code(&eggfit(&["fit", "--input", s(&p)])), 3);
}

#[test]
fn outage_curve_matches_published_value() {
    let csv = ok(&[
        "perf",
        "outage",
        "--params",
        STRONG,
        "--detection",
        "imdd",
        "--snr-db",
        "0:60:5",
    ]);
    let r = rows(&csv);
    assert_eq!(r.len(), 13);
    let (db, v, kind) = &r[12];
    assert_eq!((*db, kind.as_str()), (60.0, "exact"));
    assert!(rel(*v, 1.0493e-2) < 0.05, "{v}");
}

#[test]
fn capacity_asymptote_row() {
    let csv = ok(&[
        "perf",
        "capacity",
        "--params",
        ROW1,
        "--snr-db",
        "60:60:1",
        "--asymptotic",
    ]);
    let r = rows(&csv);
    let asym = r.iter().find(|x| x.2 == "asymptotic").unwrap().1;
    assert!(rel(asym, 12.3799) < 2e-3, "{asym}");
    let bits = rows(&ok(&[
        "perf", "capacity", "--params", ROW1, "--snr-db", "60:60:1", "--unit", "bits",
    ]));
    let nats = r.iter().find(|x| x.2 == "exact").unwrap().1;
    assert!(rel(bits[0].1, nats / std::f64::consts::LN_2) < 1e-12);
}

#[test]
fn incompatible_modulation_exits_two() {
    let out = eggfit(&[
        "perf",
        "ber",
        "--params",
        ROW1,
        "--detection",
        "imdd",
        "--modulation",
        "mqam:16",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("modulation parameter table"));
    let out = eggfit(&[
        "simulate",
        "ber",
        "--params",
        ROW1,
        "--detection",
        "het",
        "--modulation",
        "ook",
    ]);
    assert_eq!(code(&out), 2);
    let out = eggfit(&["perf", "ber", "--params", ROW1, "--modulation", "mpsk:6"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn simulate_is_deterministic_and_agrees_with_exact() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    let args = |p: &Path| {
        vec![
            "simulate".to_string(),
            "ber".into(),
            "--params".into(),
            STRONG.into(),
            "--detection".into(),
            "het".into(),
            "--modulation".into(),
            "bpsk".into(),
            "--snr-db".into(),
            "0:40:10".into(),
            "--samples".into(),
            "200000".into(),
            "--seed".into(),
            "5".into(),
            "--output".into(),
            s(p).into(),
        ]
    };
    let run = |p: &Path| ok(&args(p).iter().map(String::as_str).collect::<Vec<_>>());
    run(&a);
    run(&b);
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("snr_db,value,kind,se\n"));
    let exact = rows(&ok(&[
        "perf",
        "ber",
        "--params",
        STRONG,
        "--detection",
        "het",
        "--snr-db",
        "0:40:10",
    ]));
    for (line, (db, v, _)) in text.lines().skip(1).zip(exact) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0].parse::<f64>().unwrap(), db);
        assert_eq!(f[2], "simulated");
        let (est, se): (f64, f64) = (f[1].parse().unwrap(), f[3].parse().unwrap());
        assert!((est - v).abs() <= 3.0 * se, "{db} dB: {est} ± {se} vs {v}");
    }
}

#[test]
fn zero_threshold_gives_zero_outage() {
    let csv = ok(&[
        "simulate",
        "outage",
        "--params",
        ROW1,
        "--gamma-th",
        "1e-300",
        "--snr-db",
        "0:20:10",
        "--samples",
        "10000",
    ]);
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[1].parse::<f64>().unwrap(), 0.0);
        assert_eq!(f[3].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn synth_is_seeded_and_rejects_empty() {
    let dir = TempDir::new().unwrap();
    let a = synth(&dir, "a.txt", ROW1, 1000, 9);
    let b = synth(&dir, "b.txt", ROW1, 1000, 9);
    let c = synth(&dir, "c.txt", ROW1, 1000, 10);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 1001);
    assert_eq!(code(&eggfit(&["synth", "--params", ROW1, "--n", "0"])), 2);
    assert_eq!(code(&eggfit(&["synth", "--params", "0.2,0.3,-1,1,1", "--n", "5"])), 2);
    assert_eq!(code(&eggfit(&["synth", "--n", "5"])), 2);
}

#[test]
fn gof_scores_and_discriminates() {
    let dir = TempDir::new().unwrap();
    let data = synth(&dir, "d.txt", ROW1, 100_000, 4);
    let (report, v) = fit(&dir, &data, "egg", "r.json");
    let score = |rep: &Path| -> Value {
        serde_json::from_str(&ok(&["gof", "--input", s(&data), "--report", s(rep), "--bins", "50"])).unwrap()
    };
    let good = score(&report);
    assert_eq!(good["bins"], 50);
    assert!(good["r2"].as_f64().unwrap() > 0.97);
    assert!(good["mse"].as_f64().unwrap() < 5e-5);

    let mut worse = v.clone();
    let b = worse["params"]["b"].as_f64().unwrap();
    worse["params"]["b"] = Value::from(2.0 * b);
    let wp = path(&dir, "w.json");
    fs::write(&wp, serde_json::to_string_pretty(&worse).unwrap()).unwrap();
    let bad = score(&wp);
    assert!(bad["mse"].as_f64().unwrap() > good["mse"].as_f64().unwrap());
    assert!(bad["r2"].as_f64().unwrap() < good["r2"].as_f64().unwrap());

    let junk = path(&dir, "junk.json");
    fs::write(&junk, "{\"model\": \"egg\", \"params\": {\"omega\": 0.5}}").unwrap();
    assert_eq!(code(&eggfit(&["gof", "--input", s(&data), "--report", s(&junk)])), 2);
}

#[test]
fn help_and_bad_flags() {
    let out = eggfit(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = eggfit(&["perf", "outage", "--params", ROW1, "--snr-db", "10:0:1"]);
    assert_eq!(code(&out), 2);
    let out = eggfit(&["perf", "outage"]);
    assert_eq!(code(&out), 2);
}
