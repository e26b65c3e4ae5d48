use serde_json::Value;
use std::process::Command;
use towerforge::towers::{verify_triple, CheckKind};
use towerforge_cli::{
    render_text, run_with, Payload, ReportEnvelope, Summary, EXIT_INVALID, EXIT_PASS, EXIT_USAGE,
};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("towerforge").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json", "--no-timestamp"]);
    let (code, out, _) = run(&full);
    assert_eq!(code, EXIT_PASS, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn verify_flagship_json() {
    let v = json(&["verify", "--p", "5", "--q", "3", "--qprime", "7"]);
    let c = &v["payload"]["certificate"];
    assert_eq!(v["payload"]["kind"], "verify");
    assert_eq!(c["n"], 1);
    assert_eq!(c["gamma_order"], 32);
    assert_eq!(v["summary"]["pass"], true);
    assert!(v.get("timestamp").is_none());
    let check = &c["checks"][0];
    for key in [
        "table", "row", "col", "expected", "computed", "pass", "kind", "method",
    ] {
        assert!(check.get(key).is_some(), "{key}");
    }
    let t1 = c["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|ch| ch["table"] == "T1" && ch["row"] == 4 && ch["col"] == "h_j")
        .expect("T1 row 4 h_j");
    assert_eq!(t1["expected"], "16");
    assert_eq!(t1["computed"], "16");
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let args = [
        "verify",
        "--p",
        "5",
        "--q",
        "3",
        "--qprime",
        "23",
        "--format",
        "json",
        "--no-timestamp",
    ];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let env: ReportEnvelope = serde_json::from_str(&a).unwrap();
    assert_eq!(towerforge_cli::render_json(&env), a);
}

#[test]
fn timestamp_is_present_by_default() {
    let (code, out, _) = run(&["unit", "--m", "105", "--format", "json"]);
    assert_eq!(code, EXIT_PASS);
    let v: Value = serde_json::from_str(&out).unwrap();
    let ts = v["timestamp"].as_str().unwrap();
    assert!(chrono::DateTime::parse_from_rfc3339(ts).is_ok(), "{ts}");
}

#[test]
fn verify_csv_has_one_row_per_check() {
    let (code, out, _) = run(&[
        "verify", "--p", "5", "--q", "3", "--qprime", "7", "--format", "csv",
    ]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&["verify", "--p", "5", "--q", "3", "--qprime", "7"]);
    let checks = v["payload"]["certificate"]["checks"]
        .as_array()
        .unwrap()
        .len();
    let mut r = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(&r.headers().unwrap()[3], "table");
    assert_eq!(r.records().count(), checks);
}

#[test]
fn invalid_triple_exits_2() {
    let (code, out, err) = run(&["verify", "--p", "13", "--q", "3", "--qprime", "7"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.is_empty());
    assert!(err.contains("symbol"), "{err}");
    assert_eq!(
        run(&["verify", "--p", "7", "--q", "3", "--qprime", "7"]).0,
        EXIT_INVALID
    );
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["verify", "--p", "5"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["verify", "--p", "five", "--q", "3", "--qprime", "7"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["nonsense"]).0, EXIT_USAGE);
    assert_eq!(run(&["scan"]).0, EXIT_USAGE);
    assert_eq!(run(&["unit", "--m", "5", "--format", "xml"]).0, EXIT_USAGE);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("verify"));
}

#[test]
fn query_commands() {
    let v = json(&["classgroup", "--disc", "-420"]);
    let r = &v["payload"]["report"];
    assert_eq!(r["h"], 8);
    assert_eq!(r["invariants"], serde_json::json!([2, 2, 2]));
    assert!(r["wide_h"].is_null());

    let v = json(&["gamma", "--n", "2"]);
    let s = &v["payload"]["report"]["summary"];
    assert_eq!(s["order"], 64);
    assert_eq!(s["abelianization"], serde_json::json!([2, 2, 2]));
    assert_eq!(s["derived_type"], serde_json::json!([2, 4]));
    assert_eq!(s["index2"].as_array().unwrap().len(), 7);

    let v = json(&["unit", "--m", "105"]);
    let u = &v["payload"]["report"]["unit"];
    assert_eq!(
        (u["x"].as_str(), u["y"].as_str(), u["norm"].as_i64()),
        (Some("41"), Some("4"), Some(1))
    );

    let (code, out, _) = run(&["classgroup", "--disc", "-420"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("h = 8"), "{out}");
}

#[test]
fn invalid_queries_exit_2() {
    assert_eq!(run(&["classgroup", "--disc", "-12"]).0, EXIT_INVALID);
    assert_eq!(run(&["classgroup", "--disc", "0"]).0, EXIT_INVALID);
    assert_eq!(run(&["gamma", "--n", "0"]).0, EXIT_INVALID);
    assert_eq!(run(&["unit", "--m", "12"]).0, EXIT_INVALID);
    assert_eq!(run(&["unit", "--m", "1"]).0, EXIT_INVALID);
}

#[test]
fn scan_csv_marks_case_a_with_n_1() {
    let (code, out, _) = run(&["scan", "--max", "60", "--format", "csv", "--jobs", "2"]);
    assert_eq!(code, EXIT_PASS);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let mut rows = 0;
    for rec in r.records() {
        let rec = rec.unwrap();
        rows += 1;
        assert_eq!(&rec[3] == "A", &rec[4] == "1", "{rec:?}");
        assert_eq!(&rec[11], "true");
    }
    assert!(rows > 10);
}

#[test]
fn scan_is_independent_of_job_count() {
    let base = [
        "scan",
        "--max-p",
        "70",
        "--max-q",
        "50",
        "--max-qprime",
        "60",
        "--format",
        "json",
        "--no-timestamp",
    ];
    let (_, one, _) = run(&[&base[..], &["--jobs", "1"]].concat());
    let (_, many, _) = run(&[&base[..], &["--jobs", "3"]].concat());
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v["command"] = Value::Null;
        v
    };
    assert_eq!(strip(&one), strip(&many));
    let v = strip(&one);
    assert!(v["payload"]["certificates"]
        .as_array()
        .unwrap()
        .windows(2)
        .all(|w| (
            w[0]["p"].as_i64(),
            w[0]["q"].as_i64(),
            w[0]["qprime"].as_i64()
        ) < (
            w[1]["p"].as_i64(),
            w[1]["q"].as_i64(),
            w[1]["qprime"].as_i64()
        )));
}

#[test]
fn scan_text_ends_with_summary() {
    let (code, out, _) = run(&["scan", "--max", "30", "--no-timestamp"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("(5, 3, 7)  case A"));
    assert!(out.contains("triples: 4  passed: 4  failed: 0"), "{out}");
}

#[test]
fn scan_limit_from_environment() {
    let bin = env!("CARGO_BIN_EXE_towerforge");
    let status = |limit: &str, max: &str| {
        Command::new(bin)
            .args(["scan", "--max", max, "--format", "csv"])
            .env("TOWERFORGE_SCAN_LIMIT", limit)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(status("20", "30"), Some(EXIT_USAGE));
    assert_eq!(status("30", "30"), Some(EXIT_PASS));
    assert_eq!(status("zero", "30"), Some(EXIT_USAGE));
    assert_eq!(status("-5", "30"), Some(EXIT_USAGE));
    let out = Command::new(bin)
        .args(["scan", "--max", "1001"])
        .env_remove("TOWERFORGE_SCAN_LIMIT")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("towerforge-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, stdout, _) = run(&["gamma", "--n", "1", "--format", "json", "--out", p]);
    assert_eq!(code, EXIT_PASS);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["payload"]["report"]["summary"]["order"], 32);
    std::fs::remove_file(&path).unwrap();
    let (code, _, _) = run(&["gamma", "--n", "1", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn strict_tables_flag_forms() {
    for flags in [
        &["--strict-tables"][..],
        &["--strict-tables", "false"],
        &["--strict-tables=true"],
    ] {
        let mut args = vec!["verify", "--p", "5", "--q", "3", "--qprime", "7"];
        args.extend_from_slice(flags);
        assert_eq!(run(&args).0, EXIT_PASS, "{flags:?}");
    }
    assert_eq!(
        run(&["--strict-tables", "maybe", "unit", "--m", "5"]).0,
        EXIT_USAGE
    );
}

#[test]
fn table_mismatch_is_a_warning_when_lenient() {
    let mut cert = verify_triple(5, 3, 7).unwrap();
    let mut bad = cert
        .checks
        .iter()
        .find(|c| c.kind == CheckKind::Table)
        .unwrap()
        .clone();
    bad.pass = false;
    bad.computed = "999".into();
    cert.discrepancies.push(bad);

    let strict = Summary::of(std::slice::from_ref(&cert), true);
    assert!(!strict.pass);
    assert_eq!((strict.discrepancies, strict.warnings), (1, 0));
    let lenient = Summary::of(std::slice::from_ref(&cert), false);
    assert!(lenient.pass);
    assert_eq!((lenient.discrepancies, lenient.warnings), (0, 1));

    let env = ReportEnvelope {
        tool: "towerforge".into(),
        version: "0".into(),
        command: vec![],
        timestamp: None,
        payload: Payload::Verify { certificate: cert },
        summary: lenient,
    };
    assert_eq!(env.exit_code(), EXIT_PASS);
    let text = render_text(&env, false);
    assert!(text.contains("warning: T"), "{text}");
    assert!(render_text(&env, true).contains("discrepancy: T"));
}
