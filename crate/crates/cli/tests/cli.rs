use std::process::{Command, Output};

fn hkdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn diff_of_square() {
    let o = hkdiff(&["diff", "--N", "3", "x^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "d^1 f = 2*x*d1x\nd^2 f = 2*x*d2x + d1x^2\nd^3 f = 2*x*d3x + 2*d1x*d2x\n"
    );
}

#[test]
fn diff_of_constant_is_zero() {
    let o = hkdiff(&["diff", "--m", "2", "--N", "3", "7/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.ends_with("= 0")));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn generic_second_differential() {
    let o = hkdiff(&["diff", "--m", "2", "--N", "2", "--generic"]);
    let text = stdout(&o);
    let d2 = text.lines().nth(1).unwrap();
    assert_eq!(
        d2,
        "d^2 f = f_x1*d2x1 + f_x2*d2x2 + 1/2*f_x1x1*d1x1^2 + f_x1x2*d1x1*d1x2 + 1/2*f_x2x2*d1x2^2"
    );
}

#[test]
fn alpha_cubic_specialized() {
    let o = hkdiff(&["alpha", "--N", "3", "x + x^2 + x^3", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("y1 -> y1\ny2 -> y2 + y1^2\ny3 -> y3 + 2*y1*y2 + y1^3\n"));
}

#[test]
fn alpha_identity_and_singular() {
    let o = hkdiff(&["alpha", "--N", "2", "x1", "x2"]);
    assert_eq!(stdout(&o), "y1_1 -> y1_1\ny2_1 -> y2_1\ny1_2 -> y1_2\ny2_2 -> y2_2\n");
    let o = hkdiff(&["alpha", "--N", "2", "x1+x2", "x1+x2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("not an automorphism") && err.contains("[[1, 1], [1, 1]]"), "{err}");
}

#[test]
fn parse_errors_carry_positions() {
    let o = hkdiff(&["diff", "--N", "1", "x + (x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("position 6"), "{}", stderr(&o));
    let o = hkdiff(&["alpha", "--N", "2", "1 + x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("constant term"));
}

#[test]
fn bad_usage_exits_one() {
    assert_eq!(hkdiff(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hkdiff(&["alpha", "x"]).status.code(), Some(1));
    assert_eq!(hkdiff(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_small_run_passes() {
    let o = hkdiff(&["verify", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all suites passed"));
    assert_eq!(stdout(&o).matches("PASS").count(), 18);
}

#[test]
fn verify_rejects_zero_trials() {
    let o = hkdiff(&["verify", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("trials"));
}

#[test]
fn verify_catches_corrupted_alpha() {
    let o = hkdiff(&["verify", "--trials", "3", "--corrupt-alpha"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("first counterexample"));
}

#[test]
fn verify_json_is_deterministic() {
    let a = stdout(&hkdiff(&["verify", "--trials", "2", "--m", "2", "--N", "2", "--format", "json"]));
    let b = stdout(&hkdiff(&["verify", "--trials", "2", "--m", "2", "--N", "2", "--format", "json"]));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 6);
}

#[test]
fn examples_match() {
    let o = hkdiff(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("\n  match").count(), 2, "{text}");
    assert!(text.contains("y3 -> a1*y3 + 2*a2*y1*y2 + a3*y1^3"));
    let o = hkdiff(&["examples", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_match"], true);
    assert_eq!(v["examples"].as_array().unwrap().len(), 2);
    assert_eq!(v["examples"][1]["image"][2]["computed"].as_str().unwrap().matches("y2_1^2").count(), 1);
}

#[test]
fn file_input_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inv.json");
    let o = hkdiff(&["invert", "--N", "3", "x1 + x2^2", "x2", "--format", "json", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"kind\": \"series_map\""));
    let o = hkdiff(&["invert", "--input", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "x1 -> x1 + x2^2\nx2 -> x2\n");
    let o = hkdiff(&["alpha", "--input", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn group_operations() {
    let o = hkdiff(&["compose", "--N", "2", "--phi", "x + x^2", "--psi", "x + x^2"]);
    assert_eq!(stdout(&o), "x -> x + 2*x^2\n");
    let o = hkdiff(&["invert", "--poly", "3*x1", "3*x2 + 5*x1^2"]);
    assert_eq!(stdout(&o), "x1 -> 1/3*x1\nx2 -> 1/3*x2 - 5/27*x1^2\n");
    let o = hkdiff(&["compose", "--poly", "--phi", "x1", "x2 + x1^2", "--psi", "x1", "x2 - x1^2"]);
    assert_eq!(stdout(&o), "x1 -> x1\nx2 -> x2\n");
}

#[test]
fn classify_and_embed() {
    let o = hkdiff(&["classify", "x1", "x2 + x1^3"]);
    let text = stdout(&o);
    assert!(text.contains("triangular: true") && text.contains("elementary: true"), "{text}");
    let o = hkdiff(&["embed", "--N", "1", "--unchecked", "x + x^2"]);
    assert_eq!(stdout(&o), "x -> x + x^2\ny1 -> y1 + 2*x*y1\n");
    let o = hkdiff(&["embed", "--N", "1", "x + x^2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hkdiff(&["embed", "--N", "1", "x1", "x2 + x1^2"]);
    assert_eq!(
        stdout(&o),
        "x1 -> x1\nx2 -> x2 + x1^2\ny1_1 -> y1_1\ny2_1 -> y2_1 + 2*x1*y1_1\n"
    );
}
