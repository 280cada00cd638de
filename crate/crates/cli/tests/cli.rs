use std::path::Path;
use std::process::{Command, Output};

use e2e_cli::output::{parse_csv, CsvRow};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_e2e-spin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

fn scan(dir: &Path, json: &str, extra: &[&str]) -> Vec<CsvRow> {
    let cfg = write_config(dir, "cfg.json", json);
    let out_dir = dir.to_string_lossy().into_owned();
    let mut args = vec!["scan", "--config", &cfg, "--output-dir", &out_dir];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    parse_csv(&std::fs::read_to_string(dir.join("scan.csv")).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.json", r#"{"modle": "c3"}"#);
    let out = run(&["scan", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modle"));

    let out = run(&["point", "--theta-a=nan", "--theta-b=0"]);
    assert_eq!(out.status.code(), Some(3));

    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let target = file.join("sub");
    let small = write_config(dir.path(), "small.json", r#"{"grid": {"step_deg": 90}}"#);
    let out = run(&["scan", "--config", &small, "--output-dir", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["validate", "--no-mc", "--cases", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("suites passed"));
}

#[test]
fn csv_round_trip_and_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let rows = scan(dir.path(), r#"{"scenario": "perp", "grid": {"step_deg": 15}}"#, &[]);
    assert_eq!(rows.len(), 25 * 25);
    assert_eq!((rows[0].theta_a_deg, rows[0].theta_b_deg), (-180.0, -180.0));
    assert_eq!((rows[1].theta_a_deg, rows[1].theta_b_deg), (-180.0, -165.0));
    assert!(rows.iter().all(|r| r.tdcs_stderr.is_none()));

    let text = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    for (line, r) in text.lines().skip(1).zip(&rows) {
        let again = format!(
            "{},{},{},{},{},{},{},{}",
            r.theta_a_deg, r.theta_b_deg, r.tdcs, r.concurrence, r.eof, r.bell_lhs, r.asymmetry, r.measurable
        );
        assert_eq!(line, again);
    }

    let pgm = std::fs::read_to_string(dir.path().join("scan_tdcs.pgm")).unwrap();
    let tokens: Vec<u32> = pgm.lines().skip(1).map(|t| t.parse().unwrap()).collect();
    assert_eq!(&tokens[..3], &[25, 25, 255]);
    assert_eq!(tokens.len(), 3 + 25 * 25);
    assert_eq!(tokens[3..].iter().max(), Some(&255));
    for f in ["concurrence", "eof", "bell_lhs", "asymmetry"] {
        assert!(dir.path().join(format!("scan_{f}.pgm")).exists());
    }
}

#[test]
fn scenario_equivalences() {
    let grids: Vec<Vec<CsvRow>> = ["perp", "one_unpolarized", "unpolarized"]
        .iter()
        .map(|s| {
            let dir = tempfile::tempdir().unwrap();
            scan(dir.path(), &format!(r#"{{"scenario": "{s}", "grid": {{"step_deg": 4}}}}"#), &[])
        })
        .collect();
    let (perp, one, unpol) = (&grids[0], &grids[1], &grids[2]);
    for ((p, o), u) in perp.iter().zip(one).zip(unpol) {
        assert!((p.concurrence - o.concurrence).abs() <= 1e-10, "{p:?} {o:?}");
        assert!((p.eof - o.eof).abs() <= 1e-10);
        assert!((p.tdcs - u.tdcs).abs() <= 1e-12 * p.tdcs.abs().max(1.0));
    }
}

#[test]
fn c3_output_is_independent_of_workers() {
    let json = r#"{"model": "c3", "scenario": "antiparallel", "grid": {"step_deg": 45}, "mc": {"samples": 20000, "seed": 3}}"#;
    let read = |workers: &str| {
        let dir = tempfile::tempdir().unwrap();
        let rows = scan(dir.path(), json, &["--workers", workers]);
        assert!(rows.iter().all(|r| r.tdcs_stderr.is_some()));
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "csv" || x == "pgm"))
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    let one = read("1");
    assert_eq!(one.len(), 6);
    assert_eq!(one, read("3"));
}

#[test]
fn point_and_bell_sim_reports() {
    let out = run(&["point", "--theta-a", "45", "--theta-b", "-45"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["amplitudes"]["td"], v["amplitudes"]["te"]);
    assert!((v["concurrence"].as_f64().unwrap() - 1.0).abs() <= 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "anti.json", r#"{"scenario": "antiparallel"}"#);
    let out = run(&["bell-sim", "--config", &cfg, "--theta-a", "45", "--theta-b", "-45", "--samples", "20000", "--seed", "5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["pull"].as_f64().unwrap().abs() < 6.0);
    assert_eq!(v["violates_classical_bound"], true);
}
