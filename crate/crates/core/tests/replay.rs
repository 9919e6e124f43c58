use weylcheck::suites::{replay, run, Suite, SuiteParams};

// with a zero precision unit rounding alone produces failures to replay
#[test]
fn witnesses_replay_to_the_same_deviation() {
    let cases = [
        (Suite::Gsum, SuiteParams { p: Some(5), beta: Some(2), tol: Some(0.0), ..Default::default() }),
        (Suite::Kl3, SuiteParams { tol: Some(0.0), ..Default::default() }),
        (Suite::Gauss, SuiteParams { q_max: Some(30), tol: Some(0.0), ..Default::default() }),
    ];
    let mut replayed = 0;
    for (suite, params) in cases {
        let r = run(suite, &params).unwrap();
        assert!(r.failures.len() as u64 <= r.failed);
        for w in r.failures.iter().take(8) {
            let o = replay(w).unwrap();
            assert!(!o.pass, "{suite}: {}", w.check);
            assert_eq!(o.deviation, w.deviation, "{suite}: {}", w.check);
            replayed += 1;
        }
    }
    assert!(replayed > 0);
}

#[test]
fn unknown_check_is_rejected() {
    let r = run(Suite::Gsum, &SuiteParams { p: Some(5), beta: Some(2), tol: Some(0.0), ..Default::default() }).unwrap();
    let mut w = r.failures[0].clone();
    w.check = "nonsense.check".into();
    assert!(replay(&w).is_err());
}

#[test]
fn witness_cap() {
    let r = run(Suite::Gauss, &SuiteParams { q_max: Some(200), tol: Some(0.0), ..Default::default() }).unwrap();
    assert!(r.failures.len() <= weylcheck::report::MAX_WITNESSES);
    assert!(r.failed >= r.failures.len() as u64);
}
