//! Named verification suites, seeded sampling, thread control and replay of
//! failure witnesses.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{factor, gcd, is_prime};
use crate::characters::{enumerate_characters, local_exponent_pb, postnikov_index, CharacterFilter, DirichletCharacter};
use crate::charsums::gauss::{check_bound, check_formula, check_vanishing, gauss_sum, GaussTable};
use crate::charsums::gsum::{check_methods, empirical_prime_constant, g_bound, GKernel, GMethod};
use crate::charsums::hhat::{hhat_params, HhatKernel};
use crate::charsums::kl3::{check_expansion, Kl3Expander};
use crate::charsums::quadform::{check_law, QuadraticFormModP};
use crate::charsums::ramanujan::ramanujan_series_check;
use crate::charsums::rho::{check_lemma_bound, rho, rho_histogram};
use crate::charsums::stationary::{self, stationary_reduction_sweep, Family};
use crate::charsums::tchi::{admissible, tchi_structural_check};
use crate::error::{Error, Result};
use crate::exponents::{exponent_inequality_check, m_empirical_check};
use crate::fixtures;
use crate::lfunc::afe::{default_c_max, divisor_afe_with, AfeKernel, Quadrature};
use crate::lfunc::diagnostics::{partial_sum_profile, weyl_ratio_with};
use crate::lfunc::dirichlet::{euler_factor_residual, functional_equation_residual, HurwitzTable};
use crate::lfunc::hurwitz::{zeta, zeta_borwein};
use crate::lfunc::moment::{default_alpha, fourth_moment_coset, partition_check};
use crate::padic::padic_log;
use crate::report::{Outcome, SweepReport, Table, Tally, Witness, MOMENT_CSV_HEADER};
use crate::sum::TOL_UNIT;

/// Pair counts up to this size are swept exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 100_000;
/// Tuples drawn when a sweep is too large to be exhaustive.
pub const DEFAULT_SAMPLE: usize = 200;
pub const DEFAULT_SEED: u64 = 0;
/// Quadratic forms in three variables drawn per prime.
pub const TERNARY_FORMS: usize = 500;

pub const LFE_THRESHOLD: f64 = 1e-8;
pub const ZETA_ORACLE_THRESHOLD: f64 = 1e-10;
pub const EULER_THRESHOLD: f64 = 1e-9;
pub const AFE_THRESHOLD: f64 = 1e-6;
pub const PARTITION_THRESHOLD: f64 = 1e-6;
pub const WEYL_RATIO_ENVELOPE: f64 = 5.0;
/// Relative agreement required of a recomputed moment ratio with its fixture.
pub const FIXTURE_RELATIVE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Postnikov,
    Gsum,
    Gauss,
    Kl3,
    Tchi,
    Hhat,
    Rho,
    Quadgauss,
    Stationary,
    Ramanujan,
    Exponents,
    Lfe,
    Moment,
    Afe,
    Partialsums,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::Postnikov,
        Suite::Gsum,
        Suite::Gauss,
        Suite::Kl3,
        Suite::Tchi,
        Suite::Hhat,
        Suite::Rho,
        Suite::Quadgauss,
        Suite::Stationary,
        Suite::Ramanujan,
        Suite::Exponents,
        Suite::Lfe,
        Suite::Moment,
        Suite::Afe,
        Suite::Partialsums,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Postnikov => "postnikov",
            Suite::Gsum => "gsum",
            Suite::Gauss => "gauss",
            Suite::Kl3 => "kl3",
            Suite::Tchi => "tchi",
            Suite::Hhat => "hhat",
            Suite::Rho => "rho",
            Suite::Quadgauss => "quadgauss",
            Suite::Stationary => "stationary",
            Suite::Ramanujan => "ramanujan",
            Suite::Exponents => "exponents",
            Suite::Lfe => "lfe",
            Suite::Moment => "moment",
            Suite::Afe => "afe",
            Suite::Partialsums => "partialsums",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Optional knobs shared by all suites; each suite documents which it reads.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub q_max: Option<u64>,
    pub p: Option<u64>,
    pub beta: Option<u32>,
    pub q: Option<u64>,
    pub d: Option<u64>,
    pub sample: Option<usize>,
    /// Precision unit for finite sums; residual threshold for analytic suites.
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    #[serde(rename = "T")]
    pub t_max: Option<f64>,
    pub step: Option<f64>,
    pub c_max: Option<u64>,
}

impl SuiteParams {
    fn tol_unit(&self) -> f64 {
        self.tol.unwrap_or(TOL_UNIT)
    }

    fn threshold(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn validate(&self) -> Result<()> {
        if let Some(p) = self.p {
            if !is_prime(p) {
                return Err(Error::Param(format!("--p {p} is not prime")));
            }
        }
        if matches!(self.tol, Some(t) if !(t >= 0.0 && t.is_finite())) {
            return Err(Error::Param("--tol must be a non-negative number".into()));
        }
        if self.sample == Some(0) {
            return Err(Error::Param("--sample must be positive".into()));
        }
        if self.q == Some(0) || self.d == Some(0) || self.q_max == Some(0) {
            return Err(Error::Param("moduli must be positive".into()));
        }
        Ok(())
    }

    /// Recorded in the report so a run can be repeated.
    fn record(&self, mut report: SweepReport) -> SweepReport {
        if let Value::Object(m) = serde_json::to_value(self).expect("serializable params") {
            for (k, v) in m {
                if !v.is_null() {
                    report.params.entry(k).or_insert(v);
                }
            }
        }
        report
    }
}

/// Threads from `NT_THREADS`, else rayon's default.
pub fn thread_count() -> usize {
    std::env::var("NT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` on a pool capped by [`thread_count`].
pub fn with_threads<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Indices to evaluate out of `total`: all of them when `total` is at most
/// [`EXHAUSTIVE_LIMIT`] and no sample size was requested, otherwise a seeded
/// uniform sample without replacement, in increasing order.
pub fn select(total: usize, params: &SuiteParams, stream: u64) -> (Vec<usize>, bool) {
    let n = match params.sample {
        None if total <= EXHAUSTIVE_LIMIT => return ((0..total).collect(), false),
        None => DEFAULT_SAMPLE,
        Some(n) if n >= total => return ((0..total).collect(), false),
        Some(n) => n,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed());
    rng.set_stream(stream);
    let mut idx = sample(&mut rng, total, n).into_vec();
    idx.sort_unstable();
    (idx, true)
}

fn merge_all(tallies: Vec<Tally>) -> Tally {
    tallies.into_iter().fold(Tally::default(), Tally::merge)
}

fn collect<T: Send>(units: Vec<Result<T>>) -> Result<Vec<T>> {
    units.into_iter().collect()
}

/// Prime powers `p^β` with `p` odd, `β ≥ beta_min`, `p^β ≤ limit`, filtered
/// by `--p` / `--beta`.
fn odd_prime_powers(limit: u64, beta_min: u32, params: &SuiteParams) -> Vec<(u64, u32)> {
    // an explicit p^β is honoured unless --q-max also caps it
    if let (Some(p), Some(b), None) = (params.p, params.beta, params.q_max) {
        return match p.checked_pow(b) {
            Some(q) if p != 2 && b >= beta_min => vec![(q, b)],
            _ => Vec::new(),
        };
    }
    let mut out = Vec::new();
    for p in (3..=limit).filter(|&p| is_prime(p)) {
        if params.p.is_some_and(|x| x != p) {
            continue;
        }
        let mut b = beta_min;
        while let Some(q) = p.checked_pow(b).filter(|&q| q <= limit) {
            if params.beta.is_none_or(|x| x == b) {
                out.push((q, b));
            }
            b += 1;
        }
    }
    out
}

fn two_powers(limit: u64, beta_min: u32, params: &SuiteParams) -> Vec<(u64, u32)> {
    if params.p.is_some_and(|p| p != 2) {
        return Vec::new();
    }
    if let (Some(2), Some(b), None) = (params.p, params.beta, params.q_max) {
        return if b >= beta_min { vec![(2u64.pow(b), b)] } else { Vec::new() };
    }
    (beta_min..)
        .map(|b| (2u64.pow(b), b))
        .take_while(|&(q, _)| q <= limit)
        .filter(|&(_, b)| params.beta.is_none_or(|x| x == b))
        .collect()
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SweepReport> {
    run(name.parse()?, params)
}

pub fn run(suite: Suite, params: &SuiteParams) -> Result<SweepReport> {
    params.validate()?;
    let report = with_threads(|| match suite {
        Suite::Postnikov => postnikov_suite(params),
        Suite::Gsum => gsum_suite(params),
        Suite::Gauss => gauss_suite(params),
        Suite::Kl3 => kl3_suite(params),
        Suite::Tchi => tchi_suite(params),
        Suite::Hhat => hhat_suite(params),
        Suite::Rho => rho_suite(params),
        Suite::Quadgauss => quadgauss_suite(params),
        Suite::Stationary => stationary_suite(params),
        Suite::Ramanujan => ramanujan_suite(params),
        Suite::Exponents => exponents_suite(params),
        Suite::Lfe => lfe_suite(params),
        Suite::Moment => moment_suite(params),
        Suite::Afe => afe_suite(params),
        Suite::Partialsums => partialsums_suite(params),
    })?;
    Ok(params.record(report))
}

fn finish(suite: Suite, tally: Tally) -> SweepReport {
    let mut r = SweepReport::new(suite.name());
    r.absorb(tally);
    r
}

// postnikov

/// `χ(1 + s t) = e_{p^β}(ℓ_χ log(1 + s t))` for every `t`, `s = p` (or 4).
pub fn postnikov_unit(chi: &DirichletCharacter) -> Result<Tally> {
    let q = chi.modulus();
    let f = factor(q);
    let &[(p, beta)] = f.parts() else {
        return Err(Error::NotPrimePower(q));
    };
    let s = if p == 2 { 4 } else { p };
    let ell = postnikov_index(chi, p)?;
    let mut tally = Tally::default();
    for t in 0..q / s {
        let x = 1 + s * t;
        let lhs = local_exponent_pb(chi, x);
        let rhs = (ell.value as u128 * padic_log(x, p, beta)? as u128 % q as u128) as u64;
        tally.record("postnikov.identity", Outcome::exact(lhs as i64, rhs as i64), || json!({"chi": chi, "t": t}));
    }
    Ok(tally)
}

fn postnikov_suite(params: &SuiteParams) -> Result<SweepReport> {
    let limit = params.q_max.unwrap_or(2401);
    let mut moduli = odd_prime_powers(limit, 2, params);
    moduli.extend(two_powers(limit.min(64), 3, params));
    let chars: Vec<DirichletCharacter> =
        moduli.iter().flat_map(|&(q, _)| enumerate_characters(q, CharacterFilter::All)).collect();
    let tallies = collect(chars.par_iter().map(postnikov_unit).collect())?;
    let mut r = finish(Suite::Postnikov, merge_all(tallies));
    r.measure("moduli", moduli.iter().map(|m| m.0).collect::<Vec<_>>());
    Ok(r)
}

// gsum

/// Direct against shifted evaluation, and `|g|` against its bound.
pub fn gsum_unit(chi: &DirichletCharacter, kernels: Option<(&GKernel, &GKernel)>, psi: &DirichletCharacter, tol: f64) -> Result<Tally> {
    let (direct, shifted) = match kernels {
        Some((d, s)) => (d.eval(psi), s.eval(psi)),
        None => (GKernel::new(chi, GMethod::Direct)?.eval(psi), GKernel::new(chi, GMethod::Shifted)?.eval(psi)),
    };
    let bound = g_bound(chi, psi)?;
    let inputs = || json!({"chi": chi, "psi": psi, "tol": tol});
    let mut tally = Tally::default();
    tally.record("gsum.methods", check_methods(&direct, &shifted, tol), inputs);
    tally.record("gsum.bound", Outcome::at_most(direct.abs(), bound.bound, direct.tol_with(tol)), inputs);
    Ok(tally)
}

fn gsum_suite(params: &SuiteParams) -> Result<SweepReport> {
    let tol = params.tol_unit();
    let moduli = odd_prime_powers(params.q_max.unwrap_or(343), 2, params);
    let mut tally = Tally::default();
    let mut sampled = Vec::new();
    for &(q, _) in &moduli {
        let prims = enumerate_characters(q, CharacterFilter::Primitive);
        let n = prims.len();
        let (idx, was_sampled) = select(n * n, params, q);
        if was_sampled {
            sampled.push(q);
        }
        // group the selected pairs by χ so each kernel is built once
        let mut by_chi: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in idx {
            let (c, s) = (i / n, i % n);
            match by_chi.last_mut() {
                Some((last, v)) if *last == c => v.push(s),
                _ => by_chi.push((c, vec![s])),
            }
        }
        let units: Vec<Result<Tally>> = by_chi
            .par_iter()
            .map(|(c, psis)| {
                let chi = &prims[*c];
                let d = GKernel::new(chi, GMethod::Direct)?;
                let s = GKernel::new(chi, GMethod::Shifted)?;
                let mut t = Tally::default();
                for &j in psis {
                    t = t.merge(gsum_unit(chi, Some((&d, &s)), &prims[j], tol)?);
                }
                Ok(t)
            })
            .collect();
        tally = tally.merge(merge_all(collect(units)?));
    }
    let mut r = finish(Suite::Gsum, tally);
    r.measure("moduli", moduli.iter().map(|m| m.0).collect::<Vec<_>>());
    r.measure("sampled_moduli", sampled);
    Ok(r)
}

// gauss

/// Structural formula and bound for every `n mod q`; the vanishing taxonomy
/// when `q` is a prime power.
pub fn gauss_unit(chi: &DirichletCharacter, tol: f64) -> Result<Tally> {
    let q = chi.modulus();
    let table = GaussTable::new(chi);
    let tau_prim = gauss_sum(&chi.primitive_inducing(), 1).value;
    let prime_power = factor(q).is_prime_power();
    let mut tally = Tally::default();
    for n in 0..q as i64 {
        let inputs = || json!({"chi": chi, "n": n, "tol": tol});
        tally.record("gauss.formula", check_formula(chi, &table, tau_prim, n, tol), inputs);
        tally.record("gauss.bound", check_bound(chi, &table, n, tol), inputs);
        if prime_power {
            tally.record("gauss.vanishing", check_vanishing(chi, &table, n, tol)?, inputs);
        }
    }
    Ok(tally)
}

fn gauss_suite(params: &SuiteParams) -> Result<SweepReport> {
    let tol = params.tol_unit();
    let q_max = params.q_max.unwrap_or(200);
    let chars: Vec<DirichletCharacter> = (2..=q_max)
        .filter(|&q| params.p.is_none_or(|p| q % p == 0))
        .flat_map(|q| enumerate_characters(q, CharacterFilter::All))
        .collect();
    let tallies = collect(chars.par_iter().map(|c| gauss_unit(c, tol)).collect())?;
    Ok(finish(Suite::Gauss, merge_all(tallies)))
}

// kl3

pub const KL3_MODULI: [u64; 5] = [5, 7, 9, 25, 27];

/// The expansion for `a` fixed and every `(b, c)` in `[1, q]²`.
pub fn kl3_unit(expander: &Kl3Expander, q: u64, a: i64, tol: f64) -> Tally {
    let mut tally = Tally::default();
    for b in 1..=q as i64 {
        for c in 1..=q as i64 {
            tally.record("kl3.expansion", check_expansion(expander, a, b, c, tol), || {
                json!({"q": q, "a": a, "b": b, "c": c, "tol": tol})
            });
        }
    }
    tally
}

fn moduli_or(params: &SuiteParams, default: &[u64]) -> Vec<u64> {
    match (params.q, params.p, params.beta) {
        (Some(q), _, _) => vec![q],
        (None, Some(p), Some(b)) => vec![p.pow(b)],
        (None, Some(p), None) => default.iter().copied().filter(|q| q % p == 0).collect(),
        _ => default.to_vec(),
    }
}

fn kl3_suite(params: &SuiteParams) -> Result<SweepReport> {
    let tol = params.tol_unit();
    let mut tally = Tally::default();
    for q in moduli_or(params, &KL3_MODULI) {
        let e = Kl3Expander::new(q);
        let units: Vec<Tally> = (1..=q as i64).into_par_iter().map(|a| kl3_unit(&e, q, a, tol)).collect();
        tally = tally.merge(merge_all(units));
    }
    Ok(finish(Suite::Kl3, tally))
}

// tchi

pub const TCHI_MODULI: [u64; 4] = [9, 25, 27, 45];

fn tchi_suite(params: &SuiteParams) -> Result<SweepReport> {
    let tol = params.tol_unit();
    let mut jobs = Vec::new();
    for q in moduli_or(params, &TCHI_MODULI) {
        for chi in enumerate_characters(q, CharacterFilter::Primitive) {
            for (d, h) in admissible(q) {
                jobs.push((chi.clone(), d, h));
            }
        }
    }
    let tallies = collect(jobs.par_iter().map(|(chi, d, h)| tchi_structural_check(chi, *d, *h, tol)).collect())?;
    let mut r = finish(Suite::Tchi, merge_all(tallies));
    r.measure("units", jobs.len());
    Ok(r)
}

// hhat

pub fn hhat_unit(chi: &DirichletCharacter, kernel: Option<&HhatKernel>, psi: &DirichletCharacter, tol: f64) -> Result<Tally> {
    let (p, _, beta) = hhat_params(chi, psi)?;
    let s = match kernel {
        Some(k) => k.eval(psi),
        None => HhatKernel::new(chi, beta)?.eval(psi),
    };
    let mut tally = Tally::default();
    tally.record("hhat.bound", Outcome::at_most(s.abs(), p.pow(beta) as f64, s.tol_with(tol)), || {
        json!({"chi": chi, "psi": psi, "tol": tol})
    });
    Ok(tally)
}

fn hhat_suite(params: &SuiteParams) -> Result<SweepReport> {
    let tol = params.tol_unit();
    let limit = params.q_max.unwrap_or(343);
    let mut moduli = odd_prime_powers(limit, 2, &SuiteParams { beta: None, ..params.clone() });
    moduli.extend(two_powers(limit.min(32), 2, &SuiteParams { beta: None, ..params.clone() }));
    let mut tally = Tally::default();
    for &(pg, gamma) in &moduli {
        let p = factor(pg).parts()[0].0;
        let chis = enumerate_characters(pg, CharacterFilter::Primitive);
        for beta in (1..gamma).filter(|&b| params.beta.is_none_or(|x| x == b)) {
            let psis = enumerate_characters(p.pow(beta), CharacterFilter::Primitive);
            if psis.is_empty() {
                continue;
            }
            let n = psis.len();
            let (idx, _) = select(chis.len() * n, params, pg * 64 + beta as u64);
            let mut by_chi: Vec<(usize, Vec<usize>)> = Vec::new();
            for i in idx {
                let (c, s) = (i / n, i % n);
                match by_chi.last_mut() {
                    Some((last, v)) if *last == c => v.push(s),
                    _ => by_chi.push((c, vec![s])),
                }
            }
            let units: Vec<Result<Tally>> = by_chi
                .par_iter()
                .map(|(c, js)| {
                    let k = HhatKernel::new(&chis[*c], beta)?;
                    let mut t = Tally::default();
                    for &j in js {
                        t = t.merge(hhat_unit(&chis[*c], Some(&k), &psis[j], tol)?);
                    }
                    Ok(t)
                })
                .collect();
            tally = tally.merge(merge_all(collect(units)?));
        }
    }
    let mut r = finish(Suite::Hhat, tally);
    r.measure("moduli", moduli.iter().map(|m| m.0).collect::<Vec<_>>());
    Ok(r)
}

// rho

pub const RHO_PRIMES: [u64; 4] = [3, 5, 7, 11];

/// The exact formula against the point count, and the lemma's bound, for
/// every `Δ mod p^β`.
pub fn rho_unit(p: u64, beta: u32) -> Result<Tally> {
    let hist = rho_histogram(p, beta);
    let mut tally = Tally::default();
    for (delta, &count) in hist.iter().enumerate() {
        let d = delta as i64;
        let inputs = || json!({"p": p, "beta": beta, "delta": d});
        tally.record("rho.exact", Outcome::exact(count as i64, rho(d, p, beta)? as i64), inputs);
        tally.record("rho.lemma_bound", check_lemma_bound(d, p, beta)?, inputs);
    }
    Ok(tally)
}

fn rho_suite(params: &SuiteParams) -> Result<SweepReport> {
    let primes: Vec<u64> = params.p.map_or(RHO_PRIMES.to_vec(), |p| vec![p]);
    let betas: Vec<u32> = params.beta.map_or((1..=4).collect(), |b| vec![b]);
    let jobs: Vec<(u64, u32)> = primes.iter().flat_map(|&p| betas.iter().map(move |&b| (p, b))).collect();
    let tallies = collect(jobs.par_iter().map(|&(p, b)| rho_unit(p, b)).collect())?;
    Ok(finish(Suite::Rho, merge_all(tallies)))
}

// quadgauss

pub const QUADGAUSS_PRIMES: [u64; 4] = [3, 5, 7, 11];
pub const TERNARY_PRIMES: [u64; 2] = [3, 5];

/// The form with the given entries of `2Q` (upper triangle, row-major) and `L`.
fn form_from(p: u64, n: usize, upper: &[i64], linear: &[i64]) -> Result<QuadraticFormModP> {
    let mut m = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[i][j] = upper[k];
            m[j][i] = upper[k];
            k += 1;
        }
    }
    QuadraticFormModP::new(p, m, linear.to_vec())
}

pub fn quadgauss_unit(form: &QuadraticFormModP, tol: f64) -> Result<Tally> {
    let mut tally = Tally::default();
    tally.record("quadgauss.law", check_law(form, tol)?, || json!({"form": form, "tol": tol}));
    Ok(tally)
}

fn all_forms(p: u64, n: usize) -> Result<Vec<QuadraticFormModP>> {
    let coeffs = n * (n + 1) / 2 + n;
    let total = p.pow(coeffs as u32);
    (0..total)
        .map(|mut idx| {
            let mut c = vec![0i64; coeffs];
            for x in c.iter_mut() {
                *x = (idx % p) as i64;
                idx /= p;
            }
            let split = n * (n + 1) / 2;
            form_from(p, n, &c[..split], &c[split..])
        })
        .collect()
}

fn quadgauss_suite(params: &SuiteParams) -> Result<SweepReport> {
    let tol = params.tol_unit();
    let primes: Vec<u64> = params.p.map_or(QUADGAUSS_PRIMES.to_vec(), |p| vec![p]);
    let mut forms = Vec::new();
    for &p in &primes {
        for n in [1usize, 2] {
            if params.beta.is_none_or(|b| b as usize == n) {
                forms.extend(all_forms(p, n)?);
            }
        }
    }
    let ternary: Vec<u64> = params.p.map_or(TERNARY_PRIMES.to_vec(), |p| vec![p]);
    let count = params.sample.unwrap_or(TERNARY_FORMS);
    if params.beta.is_none_or(|b| b == 3) {
        for &p in &ternary {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed());
            rng.set_stream(p);
            for _ in 0..count {
                let c: Vec<i64> = (0..9).map(|_| rng.random_range(0..p as i64)).collect();
                forms.push(form_from(p, 3, &c[..6], &c[6..])?);
            }
        }
    }
    let tallies = collect(forms.par_iter().map(|f| quadgauss_unit(f, tol)).collect())?;
    let mut r = finish(Suite::Quadgauss, merge_all(tallies));
    r.measure("forms", forms.len());
    Ok(r)
}

// stationary

/// `(family, p, β)` swept by default; hhat takes every `γ > β` with
/// `p^γ ≤ 243`.
pub const STATIONARY_CASES: [(Family, u64, u32); 9] = [
    (Family::Gsum, 3, 2),
    (Family::Gsum, 5, 2),
    (Family::Gsum, 7, 2),
    (Family::Gsum, 3, 3),
    (Family::Gsum, 5, 3),
    (Family::Gsum, 3, 4),
    (Family::Hhat, 3, 2),
    (Family::Hhat, 3, 3),
    (Family::Hhat, 5, 2),
];
pub const STATIONARY_GAMMA_MAX: u64 = 243;

fn stationary_suite(params: &SuiteParams) -> Result<SweepReport> {
    let tol = params.tol_unit();
    let gamma_max = params.q_max.unwrap_or(STATIONARY_GAMMA_MAX);
    let cases: Vec<(Family, u64, u32)> = STATIONARY_CASES
        .iter()
        .copied()
        .filter(|&(_, p, b)| params.p.is_none_or(|x| x == p) && params.beta.is_none_or(|x| x == b))
        .collect();
    let reports = collect(
        cases
            .par_iter()
            .map(|&(f, p, b)| stationary_reduction_sweep(f, p, b, gamma_max, true, tol))
            .collect(),
    )?;
    let mut r = SweepReport::new(Suite::Stationary.name());
    let mut empty = Vec::new();
    for sub in reports {
        empty.push(json!({"params": sub.params, "pairs_without_stationary_points": sub.measurements.get("pairs_without_stationary_points")}));
        r.absorb(Tally { checks: sub.checks, failed: sub.failed, max_deviation: sub.max_deviation, failures: sub.failures });
    }
    r.measure("cases", empty);
    Ok(r)
}

// ramanujan

pub const RAMANUJAN_MODULI: [u64; 4] = [4, 6, 9, 12];
pub const RAMANUJAN_EXPONENTS: [f64; 2] = [2.0, 3.0];
pub const RAMANUJAN_TRUNCATION: u64 = 100_000;

pub fn ramanujan_unit(q: u64, s: f64, m: u64) -> Result<Tally> {
    let (_, o) = ramanujan_series_check(q, s, m)?;
    let mut tally = Tally::default();
    tally.record("ramanujan.series", o, || json!({"q": q, "s": s, "M": m}));
    Ok(tally)
}

fn ramanujan_suite(params: &SuiteParams) -> Result<SweepReport> {
    let moduli: Vec<u64> = match params.q_max {
        Some(m) => (2..=m).collect(),
        None => moduli_or(params, &RAMANUJAN_MODULI),
    };
    let m = params.c_max.unwrap_or(RAMANUJAN_TRUNCATION);
    let jobs: Vec<(u64, f64)> =
        moduli.iter().flat_map(|&q| RAMANUJAN_EXPONENTS.iter().map(move |&s| (q, s))).collect();
    let tallies = collect(jobs.par_iter().map(|&(q, s)| ramanujan_unit(q, s, m)).collect())?;
    let mut r = finish(Suite::Ramanujan, merge_all(tallies));
    r.measure("truncation", m);
    Ok(r)
}

// exponents

/// `(p, β)` pairs of the empirical sweep: `p` odd, `2 ≤ β ≤ 4`, `p^β ≤ 343`.
/// Primes at which the `β = 1` constant is measured.
pub const PRIME_CONSTANT_PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 17];

pub fn empirical_cases(params: &SuiteParams) -> Vec<(u64, u32)> {
    odd_prime_powers(343, 2, params)
        .into_iter()
        .filter(|&(_, b)| b <= 4)
        .map(|(q, b)| (factor(q).parts()[0].0, b))
        .collect()
}

fn exponents_suite(params: &SuiteParams) -> Result<SweepReport> {
    let beta_max = params.beta.unwrap_or(200);
    let mut r = exponent_inequality_check(beta_max);
    let emp_params = SuiteParams { beta: None, ..params.clone() };
    let cases = empirical_cases(&emp_params);
    let subs = collect(cases.par_iter().map(|&(p, b)| m_empirical_check(p, b, params.tol_unit())).collect())?;
    for (sub, (p, b)) in subs.into_iter().zip(&cases) {
        r.measure(&format!("empirical_{p}^{b}"), &sub.measurements);
        r.absorb(Tally { checks: sub.checks, failed: sub.failed, max_deviation: sub.max_deviation, failures: sub.failures });
    }
    // β = 1: the constant in |g| ≤ Cp is measured, never asserted
    let primes: Vec<u64> = params.p.map_or(PRIME_CONSTANT_PRIMES.to_vec(), |p| vec![p]);
    let consts = collect(primes.par_iter().map(|&p| empirical_prime_constant(p)).collect())?;
    let c: serde_json::Map<String, Value> = primes.iter().zip(consts).map(|(p, c)| (p.to_string(), json!(c))).collect();
    r.measure("prime_constant", Value::Object(c));
    r.params.insert("beta_max".into(), json!(beta_max));
    Ok(r)
}

// lfe

fn t_grid(t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && (0.0..=40.0).contains(&t_max)) {
        return Err(Error::Param(format!("need step > 0 and 0 ≤ T ≤ 40 (T = {t_max}, step = {step})")));
    }
    let n = (2.0 * t_max / step).round() as i64;
    Ok((0..=n).map(|k| -t_max + k as f64 * step).collect())
}

/// Functional equation for primitive `χ` (Euler factors for imprimitive `χ`)
/// at every `t` of the grid; `threshold` is the one for the kind of check.
pub fn lfe_unit(chi: &DirichletCharacter, ts: &[f64], threshold: f64) -> Result<Tally> {
    let mut tally = Tally::default();
    for &t in ts {
        let s = Complex64::new(0.5, t);
        let inputs = || json!({"chi": chi, "t": t, "threshold": threshold});
        if chi.is_primitive() {
            let r = functional_equation_residual(chi, s)?;
            tally.record("lfe.functional_equation", Outcome::at_most(r, 0.0, threshold), inputs);
        } else {
            let r = euler_factor_residual(chi, s)?;
            tally.record("lfe.euler_factors", Outcome::at_most(r, 0.0, threshold), inputs);
        }
    }
    Ok(tally)
}

pub fn zeta_oracle_unit(threshold: f64) -> Result<Tally> {
    let half = Complex64::new(0.5, 0.0);
    let mut tally = Tally::default();
    let o = Outcome::close(zeta(half)?, zeta_borwein(half, 60)?, threshold);
    tally.record("lfe.zeta_half", o, || json!({"threshold": threshold}));
    Ok(tally)
}

fn lfe_suite(params: &SuiteParams) -> Result<SweepReport> {
    let fe = params.threshold(LFE_THRESHOLD);
    let euler = params.threshold(EULER_THRESHOLD);
    let q_max = params.q_max.unwrap_or(50);
    let ts = t_grid(params.t_max.unwrap_or(10.0), params.step.unwrap_or(0.5))?;
    let chars: Vec<DirichletCharacter> = (1..=q_max)
        .flat_map(|q| enumerate_characters(q, CharacterFilter::All))
        .filter(|c| c.is_primitive() || !c.is_trivial())
        .collect();
    let mut tallies =
        collect(chars.par_iter().map(|c| lfe_unit(c, &ts, if c.is_primitive() { fe } else { euler })).collect())?;
    tallies.push(zeta_oracle_unit(params.threshold(ZETA_ORACLE_THRESHOLD))?);
    Ok(finish(Suite::Lfe, merge_all(tallies)))
}

// moment

pub const MOMENT_CASES: [(u64, u64); 3] = [(27, 9), (25, 5), (125, 25)];
pub const MOMENT_T: f64 = 10.0;
pub const MOMENT_STEP: f64 = 0.25;

/// Full group against the partition into cosets of the characters mod `d`.
pub fn partition_unit(q: u64, d: u64, t_max: f64, step: f64, threshold: f64) -> Result<Tally> {
    let c = partition_check(q, d, t_max, step)?;
    let mut tally = Tally::default();
    tally.record("moment.partition", Outcome::at_most(c.relative, 0.0, threshold), || {
        json!({"q": q, "d": d, "T": t_max, "step": step, "threshold": threshold})
    });
    Ok(tally)
}

fn moment_suite(params: &SuiteParams) -> Result<SweepReport> {
    let cases: Vec<(u64, u64)> = match (params.q, params.d) {
        (Some(q), Some(d)) => vec![(q, d)],
        (Some(q), None) => MOMENT_CASES.iter().copied().filter(|c| c.0 == q).collect(),
        (None, Some(_)) => return Err(Error::Param("--d needs --q".into())),
        (None, None) => MOMENT_CASES.to_vec(),
    };
    if cases.is_empty() {
        return Err(Error::Param("no moment case selected; pass --q and --d".into()));
    }
    let t_max = params.t_max.unwrap_or(MOMENT_T);
    let step = params.step.unwrap_or(MOMENT_STEP);
    let threshold = params.threshold(PARTITION_THRESHOLD);
    let pinned = fixtures::builtin()?;
    let mut tally = Tally::default();
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &(q, d) in &cases {
        let alpha = default_alpha(q)?;
        let m = fourth_moment_coset(q, d, &alpha, t_max, step)?;
        tally.record("moment.positive", Outcome::flag(m.moment >= 0.0 && m.normalizer > 0.0, true), || {
            json!({"q": q, "d": d, "T": t_max, "step": step})
        });
        if let Some(f) = fixtures::find_moment(&pinned, q, d, t_max, step) {
            let rel = (m.ratio - f.value_re).abs() / f.value_re.abs();
            tally.record("moment.fixture", Outcome::at_most(rel, 0.0, FIXTURE_RELATIVE), || {
                json!({"q": q, "d": d, "T": t_max, "step": step})
            });
        }
        tally = tally.merge(partition_unit(q, d, t_max, step, threshold)?);
        rows.push(vec![json!(q), json!(d), json!(t_max), json!(step), json!(m.moment), json!(m.normalizer), json!(m.ratio)]);
        reports.push(m);
    }
    let mut r = finish(Suite::Moment, tally);
    r.table = Some(Table { columns: MOMENT_CSV_HEADER.map(String::from).to_vec(), rows });
    r.measure("reports", reports);
    Ok(r)
}

// afe

pub const AFE_MODULI: [u64; 3] = [3, 5, 9];
pub const AFE_N_MAX: u64 = 50;

pub fn afe_unit(chi: &DirichletCharacter, kernel: &AfeKernel, n: u64, c_max: u64, threshold: f64) -> Result<Tally> {
    let res = divisor_afe_with(chi, kernel, n, c_max)?;
    let mut tally = Tally::default();
    tally.record("afe.residual", Outcome::close(res.lhs, res.rhs, threshold), || {
        json!({"chi": chi, "n": n, "c_max": c_max, "threshold": threshold})
    });
    Ok(tally)
}

fn afe_suite(params: &SuiteParams) -> Result<SweepReport> {
    let threshold = params.threshold(AFE_THRESHOLD);
    let n_max = params.q_max.unwrap_or(AFE_N_MAX);
    let mut jobs = Vec::new();
    let mut decay = serde_json::Map::new();
    for q in moduli_or(params, &AFE_MODULI) {
        let kernel = AfeKernel::new(q, Quadrature::default())?;
        decay.insert(
            q.to_string(),
            json!([0.1, 1.0, 10.0].iter().map(|&x| json!({"x": x, "f": kernel.f(x).re})).collect::<Vec<_>>()),
        );
        let kernel = std::sync::Arc::new(kernel);
        for chi in enumerate_characters(q, CharacterFilter::Primitive) {
            for n in (1..=n_max).filter(|&n| gcd(n, q) == 1) {
                let c_max = params.c_max.unwrap_or_else(|| default_c_max(n));
                jobs.push((chi.clone(), kernel.clone(), n, c_max));
            }
        }
    }
    let tallies =
        collect(jobs.par_iter().map(|(chi, k, n, c)| afe_unit(chi, k, *n, *c, threshold)).collect())?;
    let mut r = finish(Suite::Afe, merge_all(tallies));
    r.measure("kernel", Value::Object(decay));
    Ok(r)
}

// partialsums

pub const WEYL_Q_MAX: u64 = 200;
pub const WEYL_TS: [f64; 3] = [0.0, 1.0, 10.0];

/// Pólya–Vinogradov envelope of the partial sums of primitive `χ`.
pub fn partial_sum_unit(chi: &DirichletCharacter) -> Result<Tally> {
    let p = partial_sum_profile(chi)?;
    let mut tally = Tally::default();
    tally.record("partialsums.polya_vinogradov", Outcome::at_most(p.max_abs, p.polya_vinogradov, 1e-9), || {
        json!({"chi": chi})
    });
    Ok(tally)
}

pub fn weyl_unit(chi: &DirichletCharacter, tables: &[HurwitzTable]) -> Result<Tally> {
    let mut tally = Tally::default();
    for t in tables {
        let r = weyl_ratio_with(t, chi)?;
        tally.record("partialsums.weyl_ratio", Outcome::at_most(r, WEYL_RATIO_ENVELOPE, 0.0), || {
            json!({"chi": chi, "t": t.s().im})
        });
    }
    Ok(tally)
}

fn partialsums_suite(params: &SuiteParams) -> Result<SweepReport> {
    let q_max = params.q_max.unwrap_or(1000);
    let weyl_max = q_max.min(WEYL_Q_MAX);
    let units: Vec<Result<(Tally, f64, f64)>> = (2..=q_max)
        .into_par_iter()
        .map(|q| {
            let tables = if q <= weyl_max {
                WEYL_TS.iter().map(|&t| HurwitzTable::new(q, Complex64::new(0.5, t))).collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            let mut tally = Tally::default();
            let (mut e1, mut e2) = (0.0f64, 0.0f64);
            for chi in enumerate_characters(q, CharacterFilter::Primitive) {
                tally = tally.merge(partial_sum_unit(&chi)?);
                let p = partial_sum_profile(&chi)?;
                e1 = e1.max(p.envelope_11_64);
                e2 = e2.max(p.envelope_8_15);
                if !tables.is_empty() {
                    tally = tally.merge(weyl_unit(&chi, &tables)?);
                }
            }
            Ok((tally, e1, e2))
        })
        .collect();
    let units = collect(units)?;
    let e1 = units.iter().map(|u| u.1).fold(0.0, f64::max);
    let e2 = units.iter().map(|u| u.2).fold(0.0, f64::max);
    let mut r = finish(Suite::Partialsums, merge_all(units.into_iter().map(|u| u.0).collect()));
    r.measure("max_ratio_x_half_q_11_64", e1);
    r.measure("max_ratio_x_8_15_q_7_45", e2);
    r.measure("weyl_q_max", weyl_max);
    Ok(r)
}

// replay

fn field<T: DeserializeOwned>(inputs: &Value, key: &str) -> Result<T> {
    let v = inputs.get(key).ok_or_else(|| Error::Param(format!("witness input `{key}` missing")))?;
    Ok(serde_json::from_value(v.clone())?)
}

/// Re-runs the unit of work a witness came from and returns the outcome of
/// the matching check.
pub fn replay(w: &Witness) -> Result<Outcome> {
    let i = &w.inputs;
    let tally = match w.check.split('.').next().unwrap_or("") {
        "postnikov" => postnikov_unit(&field(i, "chi")?)?,
        "gsum" => gsum_unit(&field(i, "chi")?, None, &field(i, "psi")?, field(i, "tol")?)?,
        "gauss" => gauss_unit(&field(i, "chi")?, field(i, "tol")?)?,
        "kl3" => {
            let q: u64 = field(i, "q")?;
            kl3_unit(&Kl3Expander::new(q), q, field(i, "a")?, field(i, "tol")?)
        }
        "tchi" => tchi_structural_check(&field(i, "chi")?, field(i, "d")?, field(i, "h")?, field(i, "tol")?)?,
        "hhat" => hhat_unit(&field(i, "chi")?, None, &field(i, "psi")?, field(i, "tol")?)?,
        "rho" => rho_unit(field(i, "p")?, field(i, "beta")?)?,
        "quadgauss" => quadgauss_unit(&field(i, "form")?, field(i, "tol")?)?,
        "stationary" => {
            let o = stationary::check_pair(
                field(i, "family")?,
                &field(i, "chi")?,
                &field(i, "psi")?,
                field(i, "cubic_correction")?,
                field(i, "tol")?,
            )?;
            return Ok(o);
        }
        "ramanujan" => ramanujan_unit(field(i, "q")?, field(i, "s")?, field(i, "M")?)?,
        "exponents" if w.check == "exponents.empirical" => {
            let chi: DirichletCharacter = field(i, "chi")?;
            let f = factor(chi.modulus());
            let (p, b) = f.parts()[0];
            let sub = m_empirical_check(p, b, TOL_UNIT)?;
            Tally { checks: sub.checks, failed: sub.failed, max_deviation: sub.max_deviation, failures: sub.failures }
        }
        "exponents" => {
            let beta: u32 = field(i, "beta")?;
            let sub = exponent_inequality_check(beta);
            Tally { checks: sub.checks, failed: sub.failed, max_deviation: sub.max_deviation, failures: sub.failures }
        }
        "lfe" if w.check == "lfe.zeta_half" => zeta_oracle_unit(field(i, "threshold")?)?,
        "lfe" => lfe_unit(&field(i, "chi")?, &[field(i, "t")?], field(i, "threshold")?)?,
        "moment" if w.check == "moment.partition" => {
            partition_unit(field(i, "q")?, field(i, "d")?, field(i, "T")?, field(i, "step")?, field(i, "threshold")?)?
        }
        "moment" => {
            let p = SuiteParams {
                q: Some(field(i, "q")?),
                d: Some(field(i, "d")?),
                t_max: Some(field(i, "T")?),
                step: Some(field(i, "step")?),
                ..Default::default()
            };
            let sub = moment_suite(&p)?;
            Tally { checks: sub.checks, failed: sub.failed, max_deviation: sub.max_deviation, failures: sub.failures }
        }
        "afe" => {
            let chi: DirichletCharacter = field(i, "chi")?;
            let k = AfeKernel::new(chi.modulus(), Quadrature::default())?;
            afe_unit(&chi, &k, field(i, "n")?, field(i, "c_max")?, field(i, "threshold")?)?
        }
        "partialsums" if w.check == "partialsums.weyl_ratio" => {
            let chi: DirichletCharacter = field(i, "chi")?;
            let t: f64 = field(i, "t")?;
            weyl_unit(&chi, &[HurwitzTable::new(chi.modulus(), Complex64::new(0.5, t))?])?
        }
        "partialsums" => partial_sum_unit(&field(i, "chi")?)?,
        _ => return Err(Error::Param(format!("unknown check `{}`", w.check))),
    };
    tally
        .failures
        .into_iter()
        .find(|f| f.check == w.check && f.inputs == w.inputs)
        .map(|f| Outcome { lhs: f.lhs, rhs: f.rhs, deviation: f.deviation, tol: f.tol, pass: false })
        .ok_or_else(|| Error::Param(format!("check `{}` passes on replay", w.check)))
}
