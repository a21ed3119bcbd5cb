use std::process::{Command, Output};

fn nccalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nccalc")).args(args).output().expect("spawn nccalc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_normal_forms() {
    for (expr, want) in [("W*Z", "q*Z*W"), ("W*Ws", "1 - Z*Zs"), ("X1^2+X2^2+X3^2+X4^2", "1")] {
        let o = nccalc(&["eval", expr]);
        assert!(o.status.success(), "{expr}");
        assert_eq!(stdout(&o).lines().next(), Some(want), "{expr}");
    }
    let o = nccalc(&["eval", "Z*Zs - Zs*Z", "--target", "torus"]);
    assert_eq!(stdout(&o).lines().next(), Some("0"));
}

#[test]
fn eval_parse_error_is_a_usage_error() {
    let o = nccalc(&["eval", "Z + Y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 4"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(nccalc(&["verify"]).status.code(), Some(2));
    assert_eq!(nccalc(&["verify", "--target", "sphere", "--inject-fault", "nope"]).status.code(), Some(2));
    assert_eq!(nccalc(&["verify", "--target", "torus", "--inject-fault", "flip-gamma311"]).status.code(), Some(2));
    assert_eq!(nccalc(&["verify", "--target", "sphere", "--theta", "1/5", "--dim", "7"]).status.code(), Some(2));
}

#[test]
fn json_report_is_deterministic() {
    let a = nccalc(&["verify", "--target", "sphere", "--format", "json"]);
    let b = nccalc(&["verify", "--target", "sphere", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["passed"], true);
    assert!(v["first_failure"].is_null());
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn torus_markdown_to_file() {
    let dir = std::env::temp_dir().join(format!("nccalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("torus.md");
    let o = nccalc(&["verify", "--target", "torus", "--out", path.to_str().unwrap(), "--dim", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with('#'), "{text}");
    assert!(text.contains("torus"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn injected_fault_exits_1_with_reason() {
    let o = nccalc(&["verify", "--target", "sphere", "--format", "json", "--inject-fault", "negate-R1212"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["fault"], "negate-R1212");
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
}
