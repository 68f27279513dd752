//! End-to-end tests of the `hbl` binary: exit codes, report shapes, and
//! byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hbl_cli::report::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hbl"))
}

fn workspace_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hbl-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn polytope_reports_the_two_line_segment_exactly() {
    let cfg = workspace_file("configs/lw-h2.json");
    let out = run(&["polytope", cfg.to_str().unwrap(), "--mode", "sufficient", "--family", "coords"]);
    assert_eq!(code(&out), 0);
    let rep: RunReport = serde_json::from_str(&stdout_str(&out)).expect("report parses");
    assert_eq!(rep.command, "polytope");
    assert_eq!(rep.polytopes.len(), 1);
    let sec = &rep.polytopes[0];
    assert!(sec.feasible);
    assert_eq!(sec.affine_dim, 1);
    assert_eq!(
        sec.vertices,
        vec![
            vec!["1/5", "2/5", "1/5", "2/5"],
            vec!["2/5", "1/5", "2/5", "1/5"],
        ]
    );
}

#[test]
fn reports_are_byte_for_byte_deterministic() {
    let cfg = workspace_file("configs/lw-h2.json");
    let a = run(&["polytope", cfg.to_str().unwrap()]);
    let b = run(&["polytope", cfg.to_str().unwrap()]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let boxes = tmp_file(
        "boxes.json",
        r#"[ {"c": [], "free": [[0,1]], "t": [0,2]}, {"c": [], "free": [[0,1]], "t": [0,2]} ]"#,
    );
    let h1 = workspace_file("configs/lw-h1.json");
    let mc = |_: u32| {
        run(&[
            "montecarlo",
            h1.to_str().unwrap(),
            "--boxes",
            boxes.to_str().unwrap(),
            "--budget",
            "20000",
            "--seed",
            "9",
        ])
    };
    let m1 = mc(0);
    let m2 = mc(1);
    assert_eq!(code(&m1), 0);
    assert_eq!(m1.stdout, m2.stdout);
}

#[test]
fn check_rejects_the_off_balance_point_with_a_balance_tag() {
    let cfg = workspace_file("configs/skewed-h2.json");
    let out = run(&[
        "check",
        cfg.to_str().unwrap(),
        "--q",
        "1/5,2/5,2/5,1/5",
        "--mode",
        "sufficient",
    ]);
    assert_eq!(code(&out), 3);
    let rep: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    let sec = &rep.checks[0];
    assert!(!sec.inside);
    assert!(sec.violated.iter().any(|t| t.starts_with("C(")), "violated: {:?}", sec.violated);
}

#[test]
fn check_accepts_exponents_from_the_config_file() {
    let cfg = workspace_file("configs/lw-h1.json");
    let out = run(&["check", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(rep.checks.iter().all(|c| c.inside));
    assert_eq!(rep.checks[0].q, vec!["2/3", "2/3"]);
}

#[test]
fn user_errors_exit_with_code_two() {
    let cfg = workspace_file("configs/lw-h2.json");
    // Wrong arity.
    assert_eq!(code(&run(&["check", cfg.to_str().unwrap(), "--q", "1/5,2/5"])), 2);
    // Out-of-domain reciprocal exponent.
    assert_eq!(
        code(&run(&["check", cfg.to_str().unwrap(), "--q", "2,0,1/5,2/5"])),
        2
    );
    // Repeated coordinate index inside one projection.
    let bad = tmp_file(
        "bad-config.json",
        r#"{"n": 2, "projections": [{"coords": [1, 1]}, {"coords": [2]}]}"#,
    );
    assert_eq!(code(&run(&["polytope", bad.to_str().unwrap()])), 2);
    // Compression pair with w not inside the orthogonal complement of v.
    assert_eq!(
        code(&run(&[
            "witness",
            cfg.to_str().unwrap(),
            "--condition",
            "c1",
            "--v",
            "1,0",
            "--w",
            "1,0",
        ])),
        2
    );
}

#[test]
fn infeasible_polytope_exits_with_code_three() {
    let cfg = tmp_file(
        "infeasible.json",
        r#"{"n": 2, "m": 1, "projections": [{"coords": [1]}], "family": "coords"}"#,
    );
    let out = run(&["polytope", cfg.to_str().unwrap(), "--mode", "necessary"]);
    assert_eq!(code(&out), 3);
    let rep: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(!rep.polytopes[0].feasible);
    assert!(rep.polytopes[0].vertices.is_empty());
}

#[test]
fn witness_budget_exhaustion_exits_with_code_four_and_flags_the_table() {
    let cfg = workspace_file("configs/lw-h2.json");
    let out = run(&[
        "witness",
        cfg.to_str().unwrap(),
        "--condition",
        "scaling",
        "--ladder",
        "8,2,3",
        "--budget",
        "10",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stdout_str(&out).contains("budget-exceeded"));
}

#[test]
fn witness_emits_a_rectangular_long_format_table() {
    let cfg = workspace_file("configs/lw-h1.json");
    let out = run(&[
        "witness",
        cfg.to_str().unwrap(),
        "--condition",
        "scaling",
        "--ladder",
        "4,2,3",
        "--q",
        "2/3,2/3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap(),
        &csv::StringRecord::from(vec!["record", "param", "series", "lower", "upper", "value"])
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let measures = rows.iter().filter(|r| &r[0] == "measure").count();
    let slopes = rows.iter().filter(|r| &r[0] == "slope").count();
    let ratios = rows.iter().filter(|r| &r[0] == "ratio").count();
    // 3 rungs x (domain + 2 images), a slope line per series, a ratio per rung.
    assert_eq!(measures, 9);
    assert_eq!(slopes, 3);
    assert_eq!(ratios, 3);
}

#[test]
fn frames_cross_check_matches_on_the_two_line_config_and_refuses_h1() {
    let lw = workspace_file("configs/lw-h2.json");
    let out = run(&["frames", lw.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    let frames = rep.frames.unwrap();
    assert!(frames.matches_sufficient_vertices);
    assert!(!frames.conjectural);
    let pairs: Vec<(usize, usize)> =
        frames.pairs.iter().map(|p| (p.x_index, p.y_index)).collect();
    assert_eq!(pairs, vec![(1, 3), (2, 4)]);

    let h1 = workspace_file("configs/lw-h1.json");
    assert_eq!(code(&run(&["frames", h1.to_str().unwrap()])), 2);
}

#[test]
fn montecarlo_of_a_zero_indicator_is_exactly_zero() {
    let boxes = tmp_file(
        "zero-box.json",
        r#"[ {"c": [], "free": [[0,0]], "t": [0,2]}, {"c": [], "free": [[0,1]], "t": [0,2]} ]"#,
    );
    let h1 = workspace_file("configs/lw-h1.json");
    let out = run(&[
        "montecarlo",
        h1.to_str().unwrap(),
        "--boxes",
        boxes.to_str().unwrap(),
        "--budget",
        "1000",
    ]);
    assert_eq!(code(&out), 0);
    let rep: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    let mc = rep.montecarlo.unwrap();
    // The sampling region has zero volume, so the estimate is exact.
    assert_eq!(mc.mean, 0.0);
    assert_eq!(mc.std_err, 0.0);
}

#[test]
fn plot_renders_a_slice_and_rejects_collapsing_ones() {
    let dir = std::env::temp_dir().join(format!("hbl-plot-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report_path = dir.join("lw-report.json");
    let cfg = workspace_file("configs/lw-h2.json");
    let out = run(&[
        "polytope",
        cfg.to_str().unwrap(),
        "--mode",
        "sufficient",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let svg_path = dir.join("slice.svg");
    let out = run(&[
        "plot",
        report_path.to_str().unwrap(),
        "--slice",
        "1,2",
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("(1/5, 2/5)"));
    let csv_text = std::fs::read_to_string(dir.join("slice.csv")).unwrap();
    assert!(csv_text.contains("sufficient,1,1/5,2/5"));

    // The necessary region of the skew config is a square whose (q1, q2)
    // shadow collapses two vertices onto each point.
    let skew = workspace_file("configs/skewed-h2.json");
    let skew_report = dir.join("skew-report.json");
    let out = run(&[
        "polytope",
        skew.to_str().unwrap(),
        "--mode",
        "necessary",
        "--out",
        skew_report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "plot",
        skew_report.to_str().unwrap(),
        "--slice",
        "1,2",
        "--out",
        dir.join("skew.svg").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    // The (q1, q3) shadow is faithful.
    let out = run(&[
        "plot",
        skew_report.to_str().unwrap(),
        "--slice",
        "1,3",
        "--out",
        dir.join("skew.svg").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn run_reports_round_trip_through_their_schema() {
    let cfg = workspace_file("configs/skewed-h2.json");
    for args in [
        vec!["polytope", cfg.to_str().unwrap()],
        vec!["check", cfg.to_str().unwrap(), "--q", "2/5,1/5,2/5,1/5"],
        vec!["frames", cfg.to_str().unwrap()],
    ] {
        let out = run(&args);
        let text = stdout_str(&out);
        let rep: RunReport = serde_json::from_str(&text).expect("report parses");
        let re = serde_json::to_string_pretty(&rep).unwrap() + "\n";
        assert_eq!(re, text, "round-trip changed bytes for {:?}", args);
    }
}
