use std::path::Path;
use std::process::{Command, Output};

fn mqnmr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mqnmr")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn scan_csv_shape_and_first_row() {
    let out = mqnmr(&["scan", "--system", "ring", "--n", "4", "--tmax", "0.5", "--dt", "0.1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(header.len(), 2 * 4 + 4);
    assert_eq!(header[0], "t");
    assert_eq!(header[1], "J_-4Q");
    assert_eq!(header[5], "J_+0Q");
    assert_eq!(header[10], "J_0Q_diag");
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    for (i, v) in first.iter().enumerate().skip(1) {
        let expected = if i == 5 || i == 10 { 1.0 } else { 0.0 };
        assert!((v - expected).abs() < 1e-14, "column {i} = {v}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = mqnmr(&["scan", "--system", "ring", "--n", "6", "--tmax", "2", "--out", path(p)]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn protocol_report_rows_and_summary() {
    let out = mqnmr(&["protocol", "--system", "rectangle", "--tau1", "7.86", "--tau2", "7.86", "--filter", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).take_while(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows[0].starts_with("1,") && rows[15].starts_with("16,"));
    for key in ["diag_deviation", "offdiag_norm", "sign_pattern", "tau1", "tau2", "filter_order"] {
        assert!(text.contains(&format!("# {key},")), "{key}");
    }
}

#[test]
fn saturated_protocol_adds_column() {
    let out = mqnmr(&["protocol", "--system", "ring", "--n", "6", "--tau1", "6.08", "--tau2", "6.08", "--filter", "6", "--saturate"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("p,rho_pp,rho_pp_saturated\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 65);
}

#[test]
fn config_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let first = mqnmr(&["config-dump", "zeros", "--system", "ring", "--n", "6", "--initial", "down-up", "--tmax", "8"]);
    assert_eq!(code(&first), 0);
    std::fs::write(&cfg, &first.stdout).unwrap();
    let again = mqnmr(&["config-dump", "--config", path(&cfg)]);
    assert_eq!(code(&again), 0);
    assert_eq!(first.stdout, again.stdout);
    let parsed = mqnmr::cli::RunConfig::from_json(&stdout(&first)).unwrap();
    assert_eq!(parsed.task, mqnmr::cli::TaskSpec::Zeros { t_max: 8.0, dt: 0.01, threshold: 1e-3 });
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"system":{"type":"ring","n":4},"task":{"type":"scan"},"extra":1}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["scan", "--system", "ring", "--n", "20"],
        vec!["scan", "--config", path(&cfg)],
        vec!["scan"],
        vec!["protocol", "--system", "rectangle", "--tau1", "1", "--tau2", "1", "--filter", "9"],
        vec!["scan", "--couplings", "/nonexistent/couplings.txt", "--n", "3"],
        vec!["bogus-subcommand"],
    ];
    for args in cases {
        let out = mqnmr(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let msg = String::from_utf8(mqnmr(&["scan", "--config", path(&cfg)]).stderr).unwrap();
    assert!(msg.contains("extra"), "{msg}");
}

#[test]
fn malformed_coupling_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    std::fs::write(&f, "1,2,1.0\n1,2,0.5\n").unwrap();
    let out = mqnmr(&["scan", "--couplings", path(&f), "--n", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn numeric_error_exits_3() {
    // A 2Q filter on a 3-ring at τ₁ = 0 leaves nothing: both corners vanish.
    let out = mqnmr(&["protocol", "--system", "ring", "--n", "3", "--tau1", "0", "--tau2", "0", "--filter", "2"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unwritable_output_exits_4() {
    let out = mqnmr(&["scan", "--system", "ring", "--n", "4", "--tmax", "1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn custom_couplings_match_builtin_ring() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("ring4.txt");
    let ring = mqnmr::ring_couplings(4, 1.0).unwrap();
    std::fs::write(&f, ring.to_pair_list()).unwrap();
    let a = mqnmr(&["scan", "--couplings", path(&f), "--n", "4", "--tmax", "3"]);
    let b = mqnmr(&["scan", "--system", "ring", "--n", "4", "--tmax", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
