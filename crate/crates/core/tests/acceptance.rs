//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (visible with `--nocapture`) and asserts the criterion with its pinned
//! tolerance and time budget.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use weylcheck::characters::{enumerate_characters, CharacterFilter};
use weylcheck::charsums::gsum::{first_nonquadratic_primitive, g_sum, singular_characters, GMethod};
use weylcheck::exponents::{m_value, slack_doubled};
use weylcheck::lfunc::hurwitz::{zeta, zeta_borwein};
use weylcheck::report::SweepReport;
use weylcheck::suites::{self, run, Suite, SuiteParams};

fn line(n: u32, what: &str, pass: bool, detail: String, took: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} {verdict}: {what} ({detail}; {:.2}s)", took.as_secs_f64());
}

fn summary(r: &SweepReport) -> String {
    format!("{} checks, {} failed, max deviation {:.3e}", r.checks, r.failed, r.max_deviation)
}

fn count(r: &SweepReport, check: &str) -> usize {
    r.failures.iter().filter(|w| w.check == check).count()
}

fn defaults() -> SuiteParams {
    SuiteParams::default()
}

#[test]
fn criterion_01_postnikov_exact() {
    let t = Instant::now();
    let r = run(Suite::Postnikov, &defaults()).unwrap();
    let took = t.elapsed();
    let moduli: Vec<u64> = serde_json::from_value(r.measurements["moduli"].clone()).unwrap();
    let covered = moduli.contains(&2401) && moduli.contains(&2187) && moduli.contains(&64) && moduli.contains(&8);
    let ok = r.passed() && covered && r.max_deviation == 0.0 && took < Duration::from_secs(60);
    line(1, "Postnikov identity, odd p^β ≤ 2401 and 2^β ≤ 64, exact", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_02_gsum_methods_and_bound() {
    let t = Instant::now();
    let mut total = SweepReport::new("gsum");
    for p in [3u64, 5, 7] {
        for beta in [2u32, 3] {
            let r = run(Suite::Gsum, &SuiteParams { p: Some(p), beta: Some(beta), ..defaults() }).unwrap();
            let sampled: Vec<u64> = serde_json::from_value(r.measurements["sampled_moduli"].clone()).unwrap();
            assert!(sampled.is_empty(), "{p}^{beta} must be exhaustive");
            let prims = enumerate_characters(p.pow(beta), CharacterFilter::Primitive).len() as u64;
            assert_eq!(r.checks, 2 * prims * prims);
            total = total.merge(r);
        }
    }
    for (p, beta) in [(5u64, 4u32), (7, 4)] {
        let r = run(Suite::Gsum, &SuiteParams { p: Some(p), beta: Some(beta), ..defaults() }).unwrap();
        let sampled: Vec<u64> = serde_json::from_value(r.measurements["sampled_moduli"].clone()).unwrap();
        assert_eq!(sampled, vec![p.pow(beta)]);
        assert_eq!(r.checks, 2 * suites::DEFAULT_SAMPLE as u64);
        total = total.merge(r);
    }
    let took = t.elapsed();
    let ok = total.passed() && took < Duration::from_secs(180);
    line(2, "g direct == shifted and |g| ≤ bound", ok, summary(&total), took);
    assert!(ok, "{:?}", total.failures.first());
}

#[test]
fn criterion_03_singular_count() {
    let t = Instant::now();
    let chi = first_nonquadratic_primitive(125).unwrap();
    assert!(chi.order() > 2);
    let singular = singular_characters(&chi, 0.125).unwrap().len();
    let prims8 = enumerate_characters(8, CharacterFilter::Primitive);
    let mut all_zero = true;
    for a in &prims8 {
        for b in &prims8 {
            all_zero &= g_sum(a, b, GMethod::Direct).unwrap().value == Complex64::new(0.0, 0.0);
        }
    }
    let took = t.elapsed();
    let ok = singular == 8 && all_zero && took < Duration::from_secs(10);
    line(3, "8 singular ψ at q = 125; g ≡ 0 exactly at q = 8", ok, format!("{singular} singular, q=8 zero: {all_zero}"), took);
    assert!(ok);
}

#[test]
fn criterion_04_gauss_structure() {
    let t = Instant::now();
    let r = run(Suite::Gauss, &SuiteParams { q_max: Some(200), ..defaults() }).unwrap();
    let took = t.elapsed();
    line(4, "Gauss sums: structural formula, bound, vanishing taxonomy, q ≤ 200", r.passed(), summary(&r), took);
    assert!(r.passed(), "{:?}", r.failures.first());
    assert_eq!(count(&r, "gauss.vanishing"), 0);
}

#[test]
fn criterion_05_kl3_expansion() {
    let t = Instant::now();
    let r = run(Suite::Kl3, &defaults()).unwrap();
    let took = t.elapsed();
    let expected: u64 = suites::KL3_MODULI.iter().map(|q| q * q * q).sum();
    let ok = r.passed() && r.checks == expected;
    line(5, "Kl₃ character expansion, q ∈ {5,7,9,25,27}, all (a,b,c)", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_06_tchi_structure() {
    let t = Instant::now();
    let r = run(Suite::Tchi, &defaults()).unwrap();
    let took = t.elapsed();
    line(6, "T_χ structure, q ∈ {9,25,27,45}, all admissible (d,h,m,n)", r.passed(), summary(&r), took);
    assert!(r.passed() && r.checks > 0, "{:?}", r.failures.first());
}

#[test]
fn criterion_07_quadratic_gauss() {
    let t = Instant::now();
    let r = run(Suite::Quadgauss, &defaults()).unwrap();
    let took = t.elapsed();
    let exhaustive: u64 = suites::QUADGAUSS_PRIMES.iter().map(|p| p.pow(2) + p.pow(5)).sum();
    let sampled = (suites::TERNARY_PRIMES.len() * suites::TERNARY_FORMS) as u64;
    let ok = r.passed() && r.checks == exhaustive + sampled;
    line(7, "quadratic Gauss sums: n ≤ 2 exhaustive, n = 3 seeded", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_08_rho_exact() {
    let t = Instant::now();
    let r = run(Suite::Rho, &defaults()).unwrap();
    let took = t.elapsed();
    let ok = r.passed() && r.max_deviation == 0.0;
    line(8, "ρ exact formula, p ∈ {3,5,7,11}, β ≤ 4", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_09_hhat_bound() {
    let t = Instant::now();
    let r = run(Suite::Hhat, &defaults()).unwrap();
    let took = t.elapsed();
    let moduli: Vec<u64> = serde_json::from_value(r.measurements["moduli"].clone()).unwrap();
    let ok = r.passed() && moduli.contains(&343) && moduli.contains(&32);
    line(9, "|S| ≤ p^β, p^γ ≤ 343 odd and 2^γ ≤ 32", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_10_exponents() {
    let t = Instant::now();
    let r = run(Suite::Exponents, &SuiteParams { beta: Some(200), ..defaults() }).unwrap();
    let mut ok = r.passed();
    for beta in 1..=200u32 {
        for alpha in 0..beta {
            ok &= slack_doubled(alpha, beta).is_none_or(|s| s >= 0);
        }
        if beta % 2 == 0 {
            ok &= beta / 4 + (2 * beta).div_ceil(3) <= beta;
        }
    }
    ok &= m_value(1, 4).as_f64() == f64::NEG_INFINITY;
    let took = t.elapsed();
    line(10, "exponent inequality β ≤ 200 and even reduction", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_11_l_engine() {
    assert_eq!(suites::LFE_THRESHOLD, 1e-8);
    assert_eq!(suites::ZETA_ORACLE_THRESHOLD, 1e-10);
    let t = Instant::now();
    let r = run(Suite::Lfe, &SuiteParams { q_max: Some(50), t_max: Some(10.0), step: Some(0.5), ..defaults() }).unwrap();
    let half = Complex64::new(0.5, 0.0);
    let oracle = (zeta(half).unwrap() - zeta_borwein(half, 60).unwrap()).norm();
    let fixed = (zeta(half).unwrap().re + 1.4603545088095868).abs();
    let took = t.elapsed();
    let ok = r.passed() && oracle < 1e-10 && fixed < 1e-10;
    line(11, "functional equation < 1e-8, q ≤ 50, |t| ≤ 10; ζ(1/2) oracle < 1e-10", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_12_divisor_afe() {
    assert_eq!(suites::AFE_THRESHOLD, 1e-6);
    let t = Instant::now();
    let r = run(Suite::Afe, &defaults()).unwrap();
    let took = t.elapsed();
    line(12, "divisor AFE residual < 1e-6, n ≤ 50, q ∈ {3,5,9}, c_max = 50√n", r.passed(), summary(&r), took);
    assert!(r.passed(), "{:?}", r.failures.first());
}

#[test]
fn criterion_13_moments() {
    assert_eq!(suites::PARTITION_THRESHOLD, 1e-6);
    let t = Instant::now();
    let r = run(Suite::Moment, &defaults()).unwrap();
    let took = t.elapsed();
    let rows = r.table.as_ref().map_or(0, |t| t.rows.len());
    let fixtures = r.checks - r.failed;
    let ok = r.passed() && rows == 3 && r.checks == 9 && took < Duration::from_secs(600);
    line(13, "moment ratios pinned; coset partition < 1e-6 relative", ok, format!("{}; {fixtures} passing", summary(&r)), took);
    assert!(ok, "{:?}", r.failures.first());
}

#[test]
fn criterion_14_ramanujan_series() {
    let t = Instant::now();
    let r = run(Suite::Ramanujan, &defaults()).unwrap();
    let took = t.elapsed();
    let ok = r.passed() && r.checks == 8;
    line(14, "Ramanujan series below q·M^{1−s}/(s−1), M = 10⁵", ok, summary(&r), took);
    assert!(ok, "{:?}", r.failures.first());
}
