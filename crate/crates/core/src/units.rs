//! Fixed generators and discrete-log tables for `(ℤ/p^βℤ)^×`.

use crate::arith::{factor, pow_mod};

const NOT_UNIT: u32 = u32::MAX;

/// Generators of the unit group modulo a prime power, with an eager
/// discrete-log table.
///
/// Odd `p` uses the smallest primitive root. `2^β` with `β ≥ 3` uses
/// `(-1, 5)`, `4` uses `-1` alone and `2` has no generators.
#[derive(Clone, Debug)]
pub struct UnitGroupBasis {
    p: u64,
    beta: u32,
    modulus: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
    // row-major, `generators.len()` entries per residue
    dlog: Vec<u32>,
}

impl UnitGroupBasis {
    pub fn new(p: u64, beta: u32) -> Self {
        assert!(beta >= 1);
        let modulus = p.pow(beta);
        let (generators, orders) = match (p, beta) {
            (2, 1) => (vec![], vec![]),
            (2, 2) => (vec![3], vec![2]),
            (2, _) => (vec![modulus - 1, 5], vec![2, 1 << (beta - 2)]),
            _ => (vec![smallest_primitive_root(p, beta)], vec![(p - 1) * p.pow(beta - 1)]),
        };
        let width = generators.len();
        let mut dlog = vec![NOT_UNIT; modulus as usize * width.max(1)];
        if width == 0 {
            // modulus 2: the only unit is 1, with the empty exponent vector
            dlog[1] = 0;
        } else if width == 1 {
            let g = generators[0];
            let mut x = 1u64;
            for k in 0..orders[0] {
                dlog[x as usize] = k as u32;
                x = x * g % modulus;
            }
        } else {
            let mut sign = 1u64;
            for e in 0..2u32 {
                let mut x = sign;
                for k in 0..orders[1] {
                    let i = x as usize * 2;
                    dlog[i] = e;
                    dlog[i + 1] = k as u32;
                    x = x * 5 % modulus;
                }
                sign = modulus - 1;
            }
        }
        Self { p, beta, modulus, generators, orders, dlog }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Exponent vector of `x` with respect to the generators, or `None` for
    /// non-units.
    pub fn dlog(&self, x: u64) -> Option<&[u32]> {
        let x = (x % self.modulus) as usize;
        let w = self.rank();
        if w == 0 {
            return (x % 2 == 1).then_some(&[][..]);
        }
        let row = &self.dlog[x * w..x * w + w];
        (row[0] != NOT_UNIT).then_some(row)
    }

    /// Evaluates `∏ g_i^{e_i}` modulo `p^β`.
    pub fn eval(&self, exps: &[u64]) -> u64 {
        self.generators
            .iter()
            .zip(exps)
            .fold(1 % self.modulus, |acc, (&g, &e)| acc * pow_mod(g, e, self.modulus) % self.modulus)
    }
}

fn is_primitive_root_mod_p(g: u64, p: u64) -> bool {
    if g % p == 0 {
        return false;
    }
    factor(p - 1)
        .parts()
        .iter()
        .all(|&(r, _)| pow_mod(g, (p - 1) / r, p) != 1)
}

/// Smallest primitive root modulo the odd prime power `p^β`.
pub fn smallest_primitive_root(p: u64, beta: u32) -> u64 {
    assert!(p > 2);
    let p2 = p * p;
    (2..)
        .find(|&g| is_primitive_root_mod_p(g, p) && (beta == 1 || pow_mod(g, p - 1, p2) != 1))
        .expect("a primitive root exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(7, 1), 3);
        assert_eq!(smallest_primitive_root(3, 3), 2);
        assert_eq!(smallest_primitive_root(5, 4), 2);
    }

    #[test]
    fn dlog_round_trips() {
        for &(p, b) in &[(2u64, 1u32), (2, 2), (2, 3), (2, 6), (3, 4), (5, 3), (7, 2), (11, 1)] {
            let basis = UnitGroupBasis::new(p, b);
            let q = basis.modulus();
            let mut units = 0;
            for x in 0..q {
                match basis.dlog(x) {
                    Some(e) => {
                        units += 1;
                        let e: Vec<u64> = e.iter().map(|&v| v as u64).collect();
                        assert_eq!(basis.eval(&e), x % q, "p^b={q} x={x}");
                    }
                    None => assert_eq!(x % p, 0),
                }
            }
            assert_eq!(units, basis.orders().iter().product::<u64>().max(1));
        }
    }
}
