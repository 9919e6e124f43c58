use std::process::{Command, Output};

fn nt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nt")).args(args).env("NT_THREADS", "2").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn passing_suite_exits_zero() {
    let out = nt(&["verify", "postnikov", "--q-max", "81"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["failed"], 0);
    assert_eq!(r["failures"], serde_json::json!([]));
    assert!(r.get("wall_time_s").is_none());
}

#[test]
fn failing_suite_exits_one() {
    let out = nt(&["verify", "gsum", "--p", "5", "--beta", "2", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["failed"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "nonsense"][..],
        &["verify", "rho", "--q-max", "x"],
        &["verify", "gsum", "--p", "9"],
        &["verify", "rho", "--format", "xml"],
        &["moment", "--q", "27"],
        &[],
    ] {
        assert_eq!(nt(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["verify", "gsum", "--p", "5", "--beta", "4", "--sample", "20", "--seed", "3"];
    let (a, b) = (nt(&args), nt(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn moment_csv() {
    let out = nt(&["moment", "--q", "27", "--d", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,d,T,step,moment,normalizer,ratio"));
    assert!(lines.next().unwrap().starts_with("27,9,1.000000000000e+01,2.500000000000e-01,"));
}

#[test]
fn wall_time_on_request() {
    let out = nt(&["verify", "rho", "--wall-time"]);
    assert!(json(&out)["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn report_to_file() {
    let path = std::env::temp_dir().join(format!("nt-report-{}.csv", std::process::id()));
    let out = nt(&["verify", "kl3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("suite,checks,failed,max_deviation\nkl3,"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn fixtures_verify_and_refresh() {
    assert_eq!(nt(&["fixtures"]).status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("nt-fixtures-{}", std::process::id()));
    for flag in ["--refresh", "--refresh-fixtures"] {
        let out = nt(&["fixtures", flag, "--dir", dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(dir.join("moment_27_9.json").exists());
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn params_echoed() {
    let r = json(&nt(&["verify", "moment", "--T", "10", "--step", "0.25"]));
    assert_eq!(r["params"]["step"].as_f64(), Some(0.25));
    assert_eq!(r["failed"], 0);
}
