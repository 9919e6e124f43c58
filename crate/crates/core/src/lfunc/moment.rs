//! Fourth moment of `L(1/2 + it, ψα)` over the coset `{ψα : ψ mod d}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{factor, lcm, q_star};
use crate::characters::{coset, coset_unchecked, enumerate_characters, CharacterFilter, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfunc::dirichlet::HurwitzTable;
use crate::report::MomentReport;

/// Nodes `−T, −T + step, …, T`; the count of intervals must be even so the
/// coarse grid used for the error estimate lands on nodes.
fn grid(t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(1.0..=40.0).contains(&t_max) {
        return Err(Error::Param(format!("T = {t_max} must lie in [1, 40]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Param(format!("step = {step} must be positive")));
    }
    let n = (2.0 * t_max / step).round();
    if (n * step - 2.0 * t_max).abs() > 1e-9 * t_max || n as u64 % 2 != 0 {
        return Err(Error::Param(format!("2T/step must be an even integer (T = {t_max}, step = {step})")));
    }
    Ok((0..=n as u64).map(|k| -t_max + k as f64 * step).collect())
}

/// `Σ_χ |L(1/2 + it, χ)|⁴` at every node, for each family in `families`.
fn integrands(q: u64, families: &[Vec<DirichletCharacter>], nodes: &[f64]) -> Result<Vec<Vec<f64>>> {
    nodes
        .par_iter()
        .map(|&t| {
            let table = HurwitzTable::new(q, Complex64::new(0.5, t))?;
            families
                .iter()
                .map(|fam| {
                    fam.iter().try_fold(0.0, |acc, chi| Ok(acc + table.l_value(chi)?.value.norm_sqr().powi(2)))
                })
                .collect()
        })
        .collect()
}

/// Trapezoid values on the full grid and on every other node.
fn trapezoid(values: &[f64], step: f64) -> (f64, f64) {
    let n = values.len() - 1;
    let fine = step * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n]));
    let coarse_sum: f64 = values.iter().step_by(2).sum();
    let coarse = 2.0 * step * (coarse_sum - 0.5 * (values[0] + values[n]));
    (fine, coarse)
}

fn moments(q: u64, families: &[Vec<DirichletCharacter>], t_max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    let nodes = grid(t_max, step)?;
    let rows = integrands(q, families, &nodes)?;
    Ok((0..families.len())
        .map(|i| {
            let col: Vec<f64> = rows.iter().map(|r| r[i]).collect();
            trapezoid(&col, step)
        })
        .collect())
}

pub fn fourth_moment_coset(q: u64, d: u64, alpha: &DirichletCharacter, t_max: f64, step: f64) -> Result<MomentReport> {
    if alpha.modulus() != q {
        return Err(Error::ModulusMismatch(alpha.modulus(), q));
    }
    let members = coset(alpha, d)?;
    let (moment, coarse) = moments(q, &[members], t_max, step)?[0];
    let normalizer = t_max * lcm(d, q_star(&factor(q))) as f64;
    Ok(MomentReport {
        q,
        d,
        alpha: alpha.clone(),
        t_max,
        step,
        moment,
        normalizer,
        ratio: moment / normalizer,
        quadrature_error: (moment - coarse).abs() / 3.0,
    })
}

/// First primitive character modulo `q` in enumeration order; the moment
/// fixtures use it as `α`.
pub fn default_alpha(q: u64) -> Result<DirichletCharacter> {
    enumerate_characters(q, CharacterFilter::Primitive)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Param(format!("no primitive character modulo {q}")))
}

/// Greedy partition of the characters mod `q` into cosets of the characters mod `d`.
pub fn coset_partition(q: u64, d: u64) -> Result<Vec<Vec<DirichletCharacter>>> {
    let mut left = enumerate_characters(q, CharacterFilter::All);
    let mut parts = Vec::new();
    while let Some(rep) = left.first().cloned() {
        let part = coset_unchecked(&rep, d)?;
        left.retain(|c| !part.contains(c));
        parts.push(part);
    }
    Ok(parts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionCheck {
    pub full: f64,
    pub partitioned: f64,
    pub cosets: usize,
    pub relative: f64,
}

/// The full-group moment (`d = q`) against the sum over a partition into
/// cosets of the characters mod `d_prime`. Each coset gets its own L-value
/// tables.
pub fn partition_check(q: u64, d_prime: u64, t_max: f64, step: f64) -> Result<PartitionCheck> {
    let alpha = default_alpha(q)?;
    let full = fourth_moment_coset(q, q, &alpha, t_max, step)?.moment;
    let parts = coset_partition(q, d_prime)?;
    let mut partitioned = 0.0;
    for part in &parts {
        partitioned += moments(q, std::slice::from_ref(part), t_max, step)?[0].0;
    }
    Ok(PartitionCheck { full, partitioned, cosets: parts.len(), relative: (full - partitioned).abs() / full })
}
