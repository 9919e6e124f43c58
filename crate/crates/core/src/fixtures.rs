//! Pinned regression values, stored as JSON `{params, value_re, value_im, terms}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::characters::{enumerate_characters, CharacterFilter, DirichletCharacter};
use crate::charsums::gsum::{g_sum, GMethod};
use crate::charsums::kl3::kl3;
use crate::charsums::tchi::tchi;
use crate::error::{Error, Result};
use crate::lfunc::moment::{default_alpha, fourth_moment_coset};
use crate::report::{to_canonical_json, Outcome, SweepReport, Tally};
use crate::sum::CharSumValue;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub params: Value,
    pub value_re: f64,
    pub value_im: f64,
    pub terms: u64,
}

/// Relative agreement demanded when a fixture is recomputed; the files keep
/// thirteen significant digits.
pub const RELATIVE_TOL: f64 = 1e-9;

pub const NAMES: [&str; 7] = ["gsum_9", "gsum_25", "tchi_25", "kl3_5", "moment_27_9", "moment_25_5", "moment_125_25"];

const BUILTIN: [(&str, &str); 7] = [
    ("gsum_9", include_str!("../fixtures/gsum_9.json")),
    ("gsum_25", include_str!("../fixtures/gsum_25.json")),
    ("tchi_25", include_str!("../fixtures/tchi_25.json")),
    ("kl3_5", include_str!("../fixtures/kl3_5.json")),
    ("moment_27_9", include_str!("../fixtures/moment_27_9.json")),
    ("moment_25_5", include_str!("../fixtures/moment_25_5.json")),
    ("moment_125_25", include_str!("../fixtures/moment_125_25.json")),
];

fn first_primitive(q: u64) -> DirichletCharacter {
    enumerate_characters(q, CharacterFilter::Primitive).remove(0)
}

fn from_sum(params: Value, v: CharSumValue) -> Fixture {
    Fixture { params, value_re: v.value.re, value_im: v.value.im, terms: v.terms }
}

fn moment(q: u64, d: u64) -> Result<Fixture> {
    let alpha = default_alpha(q)?;
    let (t, step) = (10.0, 0.25);
    let r = fourth_moment_coset(q, d, &alpha, t, step)?;
    let nodes = (2.0 * t / step) as u64 + 1;
    Ok(Fixture {
        params: json!({"kind": "moment", "q": q, "d": d, "T": t, "step": step, "alpha": alpha}),
        value_re: r.ratio,
        value_im: 0.0,
        terms: nodes * crate::arith::phi(d),
    })
}

/// Recomputes the named fixture from scratch.
pub fn compute(name: &str) -> Result<Fixture> {
    match name {
        "gsum_9" => {
            let prims = enumerate_characters(9, CharacterFilter::Primitive);
            let (chi, psi) = (&prims[0], &prims[1]);
            Ok(from_sum(json!({"kind": "gsum", "chi": chi, "psi": psi}), g_sum(chi, psi, GMethod::Direct)?))
        }
        "gsum_25" => {
            // every primitive pair mod 3^k gives g = 0, so also pin a nonzero value
            let prims = enumerate_characters(25, CharacterFilter::Primitive);
            for chi in &prims {
                for psi in &prims {
                    let g = g_sum(chi, psi, GMethod::Direct)?;
                    if g.abs() > 1e-6 {
                        return Ok(from_sum(json!({"kind": "gsum", "chi": chi, "psi": psi}), g));
                    }
                }
            }
            Err(Error::Precondition("every g vanishes modulo 25".into()))
        }
        "tchi_25" => {
            let chi = first_primitive(25);
            Ok(from_sum(json!({"kind": "tchi", "chi": chi, "h": 5, "m": 5, "n": 5}), tchi(&chi, 5, 5, 5)))
        }
        "kl3_5" => Ok(from_sum(json!({"kind": "kl3", "q": 5, "a": 1, "b": 1, "c": 1}), kl3(1, 1, 1, 5))),
        "moment_27_9" => moment(27, 9),
        "moment_25_5" => moment(25, 5),
        "moment_125_25" => moment(125, 25),
        other => Err(Error::Param(format!("unknown fixture `{other}`"))),
    }
}

/// The fixtures compiled into the library.
pub fn builtin() -> Result<Vec<(String, Fixture)>> {
    BUILTIN.iter().map(|(n, s)| Ok((n.to_string(), serde_json::from_str(s)?))).collect()
}

pub fn find_moment(fixtures: &[(String, Fixture)], q: u64, d: u64, t: f64, step: f64) -> Option<&Fixture> {
    fixtures.iter().map(|(_, f)| f).find(|f| {
        let p = &f.params;
        p["kind"] == "moment"
            && p["q"].as_u64() == Some(q)
            && p["d"].as_u64() == Some(d)
            && p["T"].as_f64() == Some(t)
            && p["step"].as_f64() == Some(step)
    })
}

/// Recomputed value against the pinned one.
pub fn check(name: &str, pinned: &Fixture) -> Result<Outcome> {
    let now = compute(name)?;
    let a = num_complex::Complex64::new(now.value_re, now.value_im);
    let b = num_complex::Complex64::new(pinned.value_re, pinned.value_im);
    Ok(Outcome::close(a, b, RELATIVE_TOL * b.norm().max(1.0)))
}

/// Every builtin fixture against a fresh computation.
pub fn verify_builtin() -> Result<SweepReport> {
    let mut tally = Tally::default();
    for (name, f) in builtin()? {
        tally.record("fixtures.value", check(&name, &f)?, || json!({"name": name}));
    }
    let mut r = SweepReport::new("fixtures");
    r.absorb(tally);
    Ok(r)
}

/// Writes every fixture to `dir/<name>.json` and returns the paths.
pub fn refresh(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    NAMES
        .iter()
        .map(|name| {
            let path = dir.join(format!("{name}.json"));
            std::fs::write(&path, to_canonical_json(&compute(name)?)?)?;
            Ok(path)
        })
        .collect()
}
