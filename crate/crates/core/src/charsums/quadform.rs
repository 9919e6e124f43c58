//! Quadratic Gauss sums `G_p(Q, L) = Σ_{t ∈ F_p^n} e_p(Q[t] + L·t)`.

use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime, rem_i};
use crate::error::{Error, Result};
use crate::report::Outcome;
use crate::sum::{CharSumValue, RootHistogram, Roots};

/// A quadratic form over `F_p` given by the symmetric matrix of `2Q`, with a
/// linear form `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticFormModP {
    pub p: u64,
    /// Symmetric matrix of `2Q`, entries reduced mod `p`.
    pub matrix: Vec<Vec<u64>>,
    pub linear: Vec<u64>,
}

impl QuadraticFormModP {
    pub fn new(p: u64, matrix: Vec<Vec<i64>>, linear: Vec<i64>) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(p) {
            return Err(Error::Param(format!("{p} is not prime")));
        }
        let n = linear.len();
        if n > 3 || matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Param("need an n×n matrix and n-vector with n ≤ 3".into()));
        }
        let matrix: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&a| rem_i(a, p)).collect()).collect();
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Param("matrix of 2Q must be symmetric".into()));
                }
            }
        }
        let linear = linear.iter().map(|&a| rem_i(a, p)).collect();
        Ok(Self { p, matrix, linear })
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    /// `Q[t] + L·t mod p`.
    pub fn phase(&self, t: &[u64]) -> u64 {
        let p = self.p;
        let half = inv_mod(2, p).unwrap();
        let n = self.dim();
        let mut quad = 0;
        for i in 0..n {
            for j in 0..n {
                quad = (quad + self.matrix[i][j] * t[i] % p * t[j]) % p;
            }
        }
        let lin = (0..n).fold(0, |acc, i| (acc + self.linear[i] * t[i]) % p);
        (quad * half + lin) % p
    }

    /// Rank of the matrix over `F_p`.
    pub fn rank(&self) -> usize {
        rank_mod_p(self.matrix.clone(), self.p)
    }

    /// Whether `L` vanishes on the radical `ker(2Q)`, i.e. lies in the row
    /// space of the (symmetric) matrix.
    pub fn linear_vanishes_on_radical(&self) -> bool {
        let mut ext = self.matrix.clone();
        ext.push(self.linear.clone());
        rank_mod_p(ext, self.p) == self.rank()
    }

    /// `|G|` predicted by the rank/radical dichotomy.
    pub fn predicted_abs(&self) -> f64 {
        if !self.linear_vanishes_on_radical() {
            return 0.0;
        }
        let r = self.rank() as i32;
        let n = self.dim() as i32;
        (self.p as f64).powf(r as f64 / 2.0) * (self.p as f64).powi(n - r)
    }
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p).unwrap();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col] * inv % p;
                for c in 0..ncols {
                    rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `G_p(Q, L)` by summing over all of `F_p^n`.
pub fn quadratic_gauss(qf: &QuadraticFormModP) -> Result<CharSumValue> {
    let p = qf.p;
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let n = qf.dim();
    let total = p.pow(n as u32);
    let mut hist = RootHistogram::new(p);
    let mut t = vec![0u64; n];
    for idx in 0..total {
        let mut k = idx;
        for slot in t.iter_mut() {
            *slot = k % p;
            k /= p;
        }
        hist.add(qf.phase(&t), 1);
    }
    Ok(CharSumValue::new(hist.evaluate(&Roots::new(p)), total))
}

/// `|G_p(Q, L)|` against the rank/radical law.
pub fn check_law(qf: &QuadraticFormModP, tol_unit: f64) -> Result<Outcome> {
    let g = quadratic_gauss(qf)?;
    Ok(Outcome::close_real(g.abs(), qf.predicted_abs(), g.tol_with(tol_unit)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let q = QuadraticFormModP::new(5, vec![vec![2]], vec![0]).unwrap();
        let g = quadratic_gauss(&q).unwrap();
        assert!((g.value.re - 5f64.sqrt()).abs() < 1e-12 && g.value.im.abs() < 1e-12);
        let z = QuadraticFormModP::new(7, vec![vec![0, 0], vec![0, 0]], vec![1, 0]).unwrap();
        assert!(quadratic_gauss(&z).unwrap().abs() < 1e-12);
        let s = QuadraticFormModP::new(3, vec![vec![2, 0], vec![0, 2]], vec![0, 0]).unwrap();
        assert!((quadratic_gauss(&s).unwrap().abs() - 3.0).abs() < 1e-12);
        assert!(matches!(QuadraticFormModP::new(2, vec![vec![1]], vec![0]), Err(Error::EvenPrime)));
        assert!(QuadraticFormModP::new(5, vec![vec![1, 2], vec![3, 1]], vec![0, 0]).is_err());
    }

    #[test]
    fn rank_and_radical() {
        let q = QuadraticFormModP::new(5, vec![vec![1, 1], vec![1, 1]], vec![1, 1]).unwrap();
        assert_eq!(q.rank(), 1);
        assert!(q.linear_vanishes_on_radical());
        let q = QuadraticFormModP::new(5, vec![vec![1, 1], vec![1, 1]], vec![1, 0]).unwrap();
        assert!(!q.linear_vanishes_on_radical());
        assert_eq!(q.predicted_abs(), 0.0);
    }

    #[test]
    fn law_exhaustive_p3_dim2() {
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for l0 in 0..3 {
                        for l1 in 0..3 {
                            let q = QuadraticFormModP::new(3, vec![vec![a, b], vec![b, c]], vec![l0, l1]).unwrap();
                            assert!(check_law(&q, 1e-9).unwrap().pass);
                        }
                    }
                }
            }
        }
    }
}
