//! End-to-end tests of the command-line interface.

use std::io::Write;
use std::process::{Command, Stdio};

fn run_cli(args: &[&str], stdin: Option<&str>) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zetareduce"));
    cmd.args(args);
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    } else {
        cmd.stdin(Stdio::null());
    }
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn reduce_zeta2_brown_spec() {
    let spec = r#"{"kind":"brown","payload":{"n":2,"a":[0,-1],"b":[-1,0],"c":{}},"verify":true,"digits":10}"#;
    let (stdout, _, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 0, "stdout: {}", stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["convergent"], true);
    assert_eq!(report["result"][0]["index"][0], 2);
    assert_eq!(report["result"][0]["coeff"], "1");
    assert_eq!(report["verify"]["pass"], true);
}

#[test]
fn reduce_word_spec() {
    let spec = r#"{"kind":"word","payload":{"letters":[{"pole":{"n":0,"l":1}},{"power":{"m":0}}]}}"#;
    let (stdout, _, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["result"][0]["index"][0], 2);
}

#[test]
fn divergent_reports_convergent_false() {
    let spec = r#"{"kind":"brown","payload":{"n":1,"a":[-1],"b":[0],"c":{}}}"#;
    let (stdout, _, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["convergent"], false);
    assert!(report.get("result").is_none());
}

#[test]
fn unknown_kind_is_rejected() {
    let spec = r#"{"kind":"nope","payload":{}}"#;
    let (_, stderr, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown kind"), "stderr: {}", stderr);
}

#[test]
fn schema_error_has_pointer() {
    let spec = r#"{"kind":"brown","payload":{"n":2,"a":[0],"b":[0,0],"c":{}}}"#;
    let (_, stderr, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 2);
    assert!(stderr.contains("/payload"), "stderr: {}", stderr);
}

#[test]
fn batch_preserves_order_and_exit_code() {
    let specs = r#"[
        {"kind":"shifted-series","payload":{"shifts":[1],"exponents":[2]},"verify":true,"digits":10},
        {"kind":"brown","payload":{"n":1,"a":[2],"b":[3],"c":{}},"verify":true,"digits":10}
    ]"#;
    let (stdout, _, code) = run_cli(&["reduce"], Some(specs));
    assert_eq!(code, 0, "stdout: {}", stdout);
    let reports: Vec<serde_json::Value> = serde_json::from_str(&stdout).unwrap();
    assert_eq!(reports.len(), 2);
    // first: zeta(2) - 1
    assert_eq!(reports[0]["kind"], "shifted-series");
    assert_eq!(reports[0]["verify"]["pass"], true);
    // second: Beta(3, 4) = 2! 3! / 6! = 1/60
    assert_eq!(reports[1]["result"][0]["coeff"], "1/60");
}

#[test]
fn verify_subcommand_forces_verification() {
    let spec = r#"{"kind":"word","payload":{"letters":[{"pole":{"n":0,"l":1}},{"power":{"m":0}},{"power":{"m":0}}]}}"#;
    let (stdout, _, code) = run_cli(&["verify", "--digits", "12"], Some(spec));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["verify"]["pass"], true);
    let value = report["verify"]["value"].as_str().unwrap();
    assert!(value.starts_with("1.202056903159"), "value {}", value);
}

#[test]
fn eval_mzv_command() {
    let (stdout, _, code) = run_cli(&["eval-mzv", "--index", "1,2", "--digits", "12"], None);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let value = report["value"].as_str().unwrap();
    assert!(value.starts_with("1.202056903159"), "value {}", value);
}

#[test]
fn selberg_spec_runs() {
    let spec = r#"{"kind":"selberg","payload":{"n":1,"base_a":[0],"base_b":[0],"log_a":[1],"log_b":[1]},"verify":true,"digits":10,"tol":1e-6}"#;
    let (stdout, _, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 0, "stdout: {}", stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    // 2 - zeta(2)
    assert_eq!(report["result"][0]["coeff"], "2");
    assert_eq!(report["result"][1]["coeff"], "-1");
    assert_eq!(report["verify"]["pass"], true);
}

#[test]
fn bigzeta_spec_runs() {
    let spec = r#"{"kind":"bigzeta","payload":{"rows":[[1,1,1],[0,1,1]],"width":3,"shifts":[0,0,0]},"verify":true,"digits":10}"#;
    let (stdout, _, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 0, "stdout: {}", stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["result"][0]["index"][0], 1);
    assert_eq!(report["result"][0]["index"][1], 2);
    assert_eq!(report["verify"]["pass"], true);
}

#[test]
fn file_round_trip() {
    let dir = std::env::temp_dir().join(format!("zr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("spec.json");
    let output = dir.join("report.json");
    std::fs::write(
        &input,
        r#"{"kind":"word","payload":{"letters":[{"pole":{"n":0,"l":1}},{"power":{"m":0}}]}}"#,
    )
    .unwrap();
    let (_, _, code) = run_cli(
        &[
            "reduce",
            "--in",
            input.to_str().unwrap(),
            "--out",
            output.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(report["result"][0]["index"][0], 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn demos_run_clean() {
    for name in ["zeta2", "zeta3", "zeta22", "selberg-log", "ball-rivoal"] {
        let (stdout, stderr, code) = run_cli(&["demo", name], None);
        assert_eq!(code, 0, "demo {}: {} {}", name, stdout, stderr);
        let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(report["verify"]["pass"], true, "demo {}", name);
    }
}

#[test]
fn difference_spec_runs() {
    let spec = r#"{"kind":"brown","payload":{"n":2,"a":[0,0],"b":[0,0],"c":{"1,2":1}},"verify":true,"digits":10}"#;
    let (stdout, _, code) = run_cli(&["reduce"], Some(spec));
    assert_eq!(code, 0, "{}", stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["result"][0]["coeff"], "1/6");
}
