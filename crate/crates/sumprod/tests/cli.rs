use std::fs;
use std::process::{Command, Output};

fn sumprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod")).args(args).env_remove("SUMPROD_THREADS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compute_examples() {
    let cases: [(&[&str], &str); 6] = [
        (&["compute", "energy", "--p", "7", "--set", "1,2,4"], "15"),
        (&["compute", "energy", "--p", "7", "--set", "1,2,4", "--kind", "multiplicative"], "27"),
        (&["compute", "tk", "--p", "7", "--set", "1,2,4", "--k", "3"], "111"),
        (&["compute", "ek", "--p", "7", "--set", "1,2,4", "--k", "3"], "33"),
        (&["compute", "subgroup", "--p", "13", "--order", "4"], "1,5,8,12"),
        (&["compute", "incidence", "--p", "2", "--full"], "56"),
    ];
    for (args, want) in cases {
        let out = sumprod(args);
        assert!(out.status.success(), "{args:?}");
        assert_eq!(stdout(&out).trim(), want, "{args:?}");
    }
}

#[test]
fn compute_over_rationals() {
    let out = sumprod(&["compute", "sumset", "--set", "1/2,3", "--op", "product"]);
    assert_eq!(stdout(&out).trim(), "1/4,3/2,9");
    let out = sumprod(&["compute", "expander", "--set", "1,2,3,4,5,6,7,8,9,10,11,12", "--format", "csv"]);
    assert!(stdout(&out).lines().nth(1).unwrap().starts_with("125,540,"));
}

#[test]
fn formats() {
    let out = sumprod(&["compute", "energy", "--p", "7", "--set", "1,2,4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["value"], "15");
    let out = sumprod(&["compute", "energy", "--p", "7", "--set", "1,2,4", "--format", "csv"]);
    assert_eq!(stdout(&out), "quantity,value\nenergy,15\n");
}

#[test]
fn set_literals_round_trip() {
    // Residues are reduced and deduplicated, so the printed form is canonical.
    let out = sumprod(&["compute", "sumset", "--p", "11", "--set", "3,14,-1", "--with", "0", "--op", "sum"]);
    let printed = stdout(&out).trim().to_string();
    assert_eq!(printed, "3,10");
    let again = sumprod(&["compute", "sumset", "--p", "11", "--set", &printed, "--with", "0"]);
    assert_eq!(stdout(&again).trim(), printed);

    let out = sumprod(&["compute", "sumset", "--set", "2/4,-3,0", "--with", "0"]);
    let printed = stdout(&out).trim().to_string();
    let again = sumprod(&["compute", "sumset", "--set", &printed, "--with", "0"]);
    assert_eq!(stdout(&again).trim(), printed);
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        &["verify", "--check", "UNKNOWN"][..],
        &["compute", "energy", "--p", "8", "--set", "1"],
        &["compute", "energy", "--p", "7", "--set", "1,x"],
        &["compute", "subgroup", "--p", "13", "--order", "5"],
        &["verify", "--check", "EP_INEQ", "--params", "{\"p\": 7}"],
        &["verify", "--family", "nope"],
        &["report", "/nonexistent/report.jsonl"],
    ] {
        assert_eq!(sumprod(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_exit_codes() {
    let out = sumprod(&["verify", "--check", "EP_INEQ", "--family", "small-random", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 100);
    let out = sumprod(&["verify", "--check", "TWO_THIRDS", "--p-max", "499"]);
    assert_eq!(out.status.code(), Some(0));

    let params = r#"{"p": 7, "A": [1, 2, 4], "P": [1, 3], "k": 2}"#;
    let out = sumprod(&["verify", "--check", "EP_INEQ", "--params", params]);
    assert_eq!(out.status.code(), Some(0));
    let line: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(line["verdict"], "pass");
    assert_eq!(line["params"]["A"], serde_json::json!([1, 2, 4]));
}

#[test]
fn thread_count_does_not_change_output() {
    let one = sumprod(&["verify", "--family", "default", "--seed", "7", "--threads", "1"]);
    let many = Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args(["verify", "--family", "default", "--seed", "7"])
        .env("SUMPROD_THREADS", "8")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn report_writes_csv_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("run.jsonl");
    let out = sumprod(&["verify", "--family", "default", "--seed", "3", "--out", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out_dir = dir.path().join("report");
    let out = sumprod(&["report", input.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(csv.starts_with("check_id,group,count,"));
    assert!(csv.lines().any(|l| l.starts_with("EP_INEQ,all,")));
    assert!(out_dir.join("expander_exponent.svg").exists());
    assert!(fs::read_to_string(out_dir.join("two_thirds.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn empty_report_gives_empty_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.jsonl");
    fs::write(&input, "").unwrap();
    let out_dir = dir.path().join("report");
    let out = sumprod(&["report", input.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    let svgs =
        fs::read_dir(&out_dir).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"));
    assert_eq!(svgs.count(), 0);
}

#[test]
fn empty_family_prints_nothing() {
    let out = sumprod(&["verify", "--family", "empty"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}
