use std::io::Write;
use std::process::{Command, Output};

fn bsw(args: &[&str], session: &str) -> Output {
    let dir = std::env::temp_dir().join(format!("bsw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("s{}.bsw", args.join("_").replace('-', "")));
    std::fs::File::create(&path)
        .unwrap()
        .write_all(session.as_bytes())
        .unwrap();
    Command::new(env!("CARGO_BIN_EXE_bsw"))
        .args(args)
        .arg(&path)
        .output()
        .unwrap()
}

#[test]
fn successful_run_exits_zero() {
    let out = bsw(&["run"], "ring x,y; ideal I = x, y; resolve I;");
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        doc["commands"][0]["result"]["complex"]["ranks"],
        serde_json::json!([1, 2, 1])
    );
}

#[test]
fn failing_command_exits_two_and_keeps_going() {
    let out = bsw(
        &["run"],
        "ring x; ideal U = 1; ideal I = x; resolve U; dim I;",
    );
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["totals"]["failed"], 1);
    assert_eq!(doc["commands"][1]["status"], "ok");
}

#[test]
fn exhausted_budget_exits_three() {
    let out = bsw(
        &["run", "--budget", "1"],
        "ring x,y,z; ideal I = x^2 - y*z, y^2 - x*z, z^2 - x*y; resolve I;",
    );
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["commands"][0]["error"]["kind"], "budget");
}

#[test]
fn check_reports_the_syntax_error_position() {
    let out = bsw(&["check"], "ring x;;");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1, column 8"), "{err}");
}
