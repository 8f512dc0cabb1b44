use std::io::Cursor;

use resilience::cli::run_with;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let mut argv = vec!["resq"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut Cursor::new(stdin.as_bytes().to_vec()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("resq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const OPINION_JSON: &str = r#"{"n": 2, "u_max": 1, "b_bar": [[0.8, -0.9, 0.5, -0.5, 0], [0.9, -0.8, -0.4, 0.4, 0.1]]}"#;

#[test]
fn report_table_lists_opinion_r_q() {
    let path = temp_file("opinion.json", OPINION_JSON);
    let r = run(&["report", path.to_str().unwrap()], "");
    assert_eq!(r.code, 0, "{}", r.err);
    let r_q: Vec<f64> = r
        .out
        .lines()
        .filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()))
        .map(|l| l.split_whitespace().last().unwrap().parse().unwrap())
        .collect();
    let want = [0.02, 0.04, 0.14, 0.14, 0.91];
    assert_eq!(r_q.len(), 5, "{}", r.out);
    for (got, w) in r_q.iter().zip(want) {
        assert!((got - w).abs() < 0.015, "{got} vs {w}");
    }
    assert!(r.out.contains("0.02532"));
}

#[test]
fn scenario_piped_into_report_matches_hand_written_file() {
    let scenario = run(&["scenario", "opinion"], "");
    assert_eq!(scenario.code, 0);
    let piped = run(&["report", "-", "--json"], &scenario.out);
    let path = temp_file("hand.json", OPINION_JSON);
    let direct = run(&["report", path.to_str().unwrap(), "--json"], "");
    assert_eq!(piped.code, 0, "{}", piped.err);
    assert_eq!(piped.out, direct.out);
    assert!(piped.out.contains("\"r_max\": 0.0253164556962"));
}

#[test]
fn spacecraft_loss_of_fifth_coefficient_cannot_reach_target() {
    let spec = run(&["scenario", "spacecraft"], "");
    let path = temp_file("spacecraft.json", &spec.out);
    let r = run(&["reach", path.to_str().unwrap(), "--lost", "4", "--target", "667", "0.067", "2", "2", "2", "2"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("T_M* = inf"), "{}", r.out);
    assert!(r.out.contains("t(d) = inf"), "{}", r.out);
}

#[test]
fn reach_accepts_negative_targets() {
    let path = temp_file("opinion-reach.json", OPINION_JSON);
    let r = run(&["reach", path.to_str().unwrap(), "--lost", "2", "--target", "-1", "1"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("t(d) = 7.12"), "{}", r.out);
}

#[test]
fn out_of_range_lost_column_is_a_domain_error() {
    let path = temp_file("opinion-rq.json", OPINION_JSON);
    let r = run(&["rq", path.to_str().unwrap(), "--lost", "9"], "");
    assert_eq!(r.code, 1);
    assert!(r.err.contains("lost"), "{}", r.err);
}

#[test]
fn malformed_input_is_reported_not_panicked() {
    let r = run(&["report", "-"], "{ not json");
    assert_eq!(r.code, 1);
    assert!(r.err.starts_with("error[ParseError]"), "{}", r.err);
    let ragged = run(&["report", "-"], r#"{"n": 2, "u_max": 1, "b_bar": [[1, 0], [0]]}"#);
    assert_eq!(ragged.code, 1, "{}", ragged.out);
    let negative = run(&["report", "-"], r#"{"n": 1, "u_max": -1, "b_bar": [[1, 0]]}"#);
    assert_eq!(negative.code, 1);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&[], "").code, 2);
    assert_eq!(run(&["frobnicate"], "").code, 2);
    assert_eq!(run(&["--feas-tol", "-1", "scenario", "opinion"], "").code, 2);
}

#[test]
fn sweep_writes_csv() {
    let path = temp_file("opinion-sweep.json", OPINION_JSON);
    let r = run(&["sweep", path.to_str().unwrap(), "--lost", "0", "--samples", "8"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "beta,ratio");
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[2], "0.785398163397,39.5");
    assert_eq!(lines[1].split(',').nth(1), lines[5].split(',').nth(1));
}

#[test]
fn sweep_marks_blocked_directions_as_inf() {
    let path = temp_file("blocked.json", r#"{"n": 2, "u_max": 1, "b_bar": [[1, 0, -2], [0, 1, 0]]}"#);
    let r = run(&["sweep", path.to_str().unwrap(), "--lost", "2", "--samples", "4"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.lines().nth(1).unwrap().ends_with(",inf"), "{}", r.out);
}

#[test]
fn output_is_identical_across_runs() {
    let a = run(&["scenario", "spacecraft"], "");
    let pa = run(&["report", "-", "--json"], &a.out);
    let pb = run(&["report", "-", "--json"], &a.out);
    assert_eq!(pa.out, pb.out);
}

#[test]
fn verify_geometry_reports_pass_counts() {
    let r = run(&["verify-geometry", "--seed", "3", "--cases", "3", "--directions", "90"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("segment maximum      3/3"), "{}", r.out);
}
