use num_complex::Complex64;
use weylcheck::fixtures::{builtin, compute, verify_builtin, NAMES};

fn value(name: &str) -> Complex64 {
    let (_, f) = builtin().unwrap().into_iter().find(|(n, _)| n == name).unwrap();
    Complex64::new(f.value_re, f.value_im)
}

#[test]
fn builtin_fixtures_reproduce() {
    let r = verify_builtin().unwrap();
    assert_eq!(r.checks, NAMES.len() as u64);
    assert!(r.passed(), "{:?}", r.failures);
}

// Kl₃(1,1,1;5) from the defining triple sum written out independently
#[test]
fn kl3_5_against_naive_sum() {
    let mut s = Complex64::new(0.0, 0.0);
    for x in 1..5u64 {
        for y in 1..5u64 {
            for z in 1..5u64 {
                if x * y * z % 5 == 1 {
                    let t = (x + y + z) as f64 / 5.0;
                    s += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t);
                }
            }
        }
    }
    assert!((s - value("kl3_5")).norm() < 1e-12);
}

#[test]
fn gsum_25_has_expected_size() {
    // a nonzero pair mod 25 has |g| = 25 here
    assert!((value("gsum_25").norm() - 25.0).abs() < 1e-9);
    assert_eq!(value("gsum_9"), Complex64::new(0.0, 0.0));
}

#[test]
fn moment_fixtures_are_positive() {
    for n in ["moment_27_9", "moment_25_5", "moment_125_25"] {
        let v = value(n);
        assert!(v.re > 0.0 && v.im == 0.0, "{n}");
    }
}

#[test]
fn refresh_writes_every_fixture() {
    let dir = std::env::temp_dir().join(format!("weylcheck-fixtures-{}", std::process::id()));
    let paths = weylcheck::fixtures::refresh(&dir).unwrap();
    assert_eq!(paths.len(), NAMES.len());
    for (p, name) in paths.iter().zip(NAMES) {
        let text = std::fs::read_to_string(p).unwrap();
        let f: weylcheck::fixtures::Fixture = serde_json::from_str(&text).unwrap();
        // files keep thirteen significant digits
        let now = compute(name).unwrap().value_re;
        assert!((f.value_re - now).abs() <= 1e-12 * now.abs().max(1.0), "{name}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}
