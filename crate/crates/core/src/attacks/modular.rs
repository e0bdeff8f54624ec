use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::cvp::embedding_attack;
use super::{AttackReport, AttackStatus};
use crate::matrix_core::{IntMatrix, LatticeError};

/// Most residue candidates tried against the reduced instance.
pub const CANDIDATE_CAP: usize = 256;

/// Solutions of `x·A ≡ t (mod M)` in echelon form.
///
/// `rows[u]` is the pivot row for unknown `u`, if any: coefficients on
/// unknowns `u..n` (the pivot a divisor of `M`) and the right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSolution {
    modulus: u64,
    rows: Vec<Option<(Vec<u64>, u64)>>,
}

impl ModSolution {
    /// Per-unknown value when it is the same in every solution.
    pub fn determined(&self) -> Vec<Option<u64>> {
        let n = self.rows.len();
        let mut out: Vec<Option<u64>> = vec![None; n];
        for u in (0..n).rev() {
            let Some((coef, rhs)) = &self.rows[u] else { continue };
            if coef[u] != 1 {
                continue;
            }
            let mut acc = *rhs;
            let mut known = true;
            for v in u + 1..n {
                if coef[v] == 0 {
                    continue;
                }
                match out[v] {
                    Some(x) => acc = sub_mod(acc, mul_mod(coef[v], x, self.modulus), self.modulus),
                    None => {
                        known = false;
                        break;
                    }
                }
            }
            if known {
                out[u] = Some(acc);
            }
        }
        out
    }

    /// Every solution in lexicographic order, or `None` when there may be more than `cap`.
    pub fn enumerate(&self, cap: usize) -> Option<Vec<Vec<u64>>> {
        let bound = (0..self.rows.len()).fold(1u128, |acc, u| {
            let choices = self.rows[u].as_ref().map_or(self.modulus, |(c, _)| c[u]);
            acc.saturating_mul(u128::from(choices))
        });
        if bound > cap as u128 {
            return None;
        }
        let n = self.rows.len();
        let mut out = Vec::new();
        let mut x = vec![0u64; n];
        self.fill(n, &mut x, &mut out);
        out.sort();
        Some(out)
    }

    fn fill(&self, u: usize, x: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if u == 0 {
            out.push(x.clone());
            return;
        }
        let u = u - 1;
        let m = self.modulus;
        match &self.rows[u] {
            None => {
                for v in 0..m {
                    x[u] = v;
                    self.fill(u, x, out);
                }
            }
            Some((coef, rhs)) => {
                let mut r = *rhs;
                for v in u + 1..x.len() {
                    r = sub_mod(r, mul_mod(coef[v], x[v], m), m);
                }
                let g = coef[u];
                if r % g != 0 {
                    return;
                }
                for k in 0..g {
                    x[u] = r / g + k * (m / g);
                    self.fill(u, x, out);
                }
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    (a + m - b % m) % m
}

fn to_residue(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus")
}

/// Solves `x·A ≡ t (mod M)`; `None` when the system is inconsistent.
///
/// Echelon form over `ℤ/Mℤ` with gcd pivoting. Each pivot `g` is scaled to a
/// divisor of `M`, and `(M/g)` times the pivot row is returned to the pool so
/// the constraints it implies on later unknowns are kept.
pub fn solve_mod(a: &IntMatrix, t: &[BigInt], modulus: u64) -> Result<Option<ModSolution>, LatticeError> {
    let n = a.rows();
    if t.len() != a.cols() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.cols(),
            found: t.len(),
        });
    }
    if modulus < 2 || modulus > 1 << 40 {
        return Err(LatticeError::InvalidParameter(format!("modulus {modulus} out of range")));
    }
    let m = modulus;
    // one equation per column of A: Σ_i x_i·A[i][j] ≡ t_j
    let mut pool: Vec<(Vec<u64>, u64)> = (0..a.cols())
        .map(|j| ((0..n).map(|i| to_residue(&a[(i, j)], m)).collect(), to_residue(&t[j], m)))
        .collect();
    let mut rows = vec![None; n];
    for u in 0..n {
        let mut pivot: Option<(Vec<u64>, u64)> = None;
        let mut rest = Vec::with_capacity(pool.len());
        for eq in pool.drain(..) {
            if eq.0[u] == 0 {
                rest.push(eq);
                continue;
            }
            pivot = Some(match pivot {
                None => eq,
                Some(p) => {
                    let (p, other) = combine(p, eq, u, m);
                    if other.0.iter().any(|&c| c != 0) || other.1 != 0 {
                        rest.push(other);
                    }
                    p
                }
            });
        }
        pool = rest;
        let Some((mut coef, mut rhs)) = pivot else { continue };
        // scale by a unit so the pivot divides M
        let g = gcd(coef[u], m);
        let unit = unit_for(coef[u] / g, m / g, m);
        coef.iter_mut().for_each(|c| *c = mul_mod(*c, unit, m));
        rhs = mul_mod(rhs, unit, m);
        if g > 1 {
            let k = m / g;
            let extra: Vec<u64> = coef.iter().map(|&c| mul_mod(c, k, m)).collect();
            let extra_rhs = mul_mod(rhs, k, m);
            if extra.iter().any(|&c| c != 0) || extra_rhs != 0 {
                pool.push((extra, extra_rhs));
            }
        }
        rows[u] = Some((coef, rhs));
    }
    if pool.iter().any(|(_, r)| *r != 0) {
        return Ok(None);
    }
    Ok(Some(ModSolution { modulus: m, rows }))
}

/// 2×2 unimodular step: returns `(gcd row, eliminated row)` at column `u`.
fn combine(p: (Vec<u64>, u64), q: (Vec<u64>, u64), u: usize, m: u64) -> ((Vec<u64>, u64), (Vec<u64>, u64)) {
    let (a, b) = (p.0[u] as i128, q.0[u] as i128);
    let e = a.extended_gcd(&b);
    let (g, x, y) = (e.gcd, e.x, e.y);
    let (pa, qb) = (a / g, b / g);
    let mi = m as i128;
    let lin = |s: i128, r: u64, t: i128, w: u64| -> u64 { (s * r as i128 + t * w as i128).rem_euclid(mi) as u64 };
    let first: Vec<u64> = p.0.iter().zip(&q.0).map(|(&r, &w)| lin(x, r, y, w)).collect();
    let second: Vec<u64> = p.0.iter().zip(&q.0).map(|(&r, &w)| lin(-qb, r, pa, w)).collect();
    ((first, lin(x, p.1, y, q.1)), (second, lin(-qb, p.1, pa, q.1)))
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// A unit `w` modulo `m` with `w·a ≡ 1 (mod m')`, where `gcd(a, m') = 1` and `m' | m`.
fn unit_for(a: u64, m_prime: u64, m: u64) -> u64 {
    let inv = if m_prime == 1 {
        1
    } else {
        let e = (a as i128).extended_gcd(&(m_prime as i128));
        e.x.rem_euclid(m_prime as i128) as u64
    };
    // lift to a unit mod m by adding multiples of m'
    (0..m.max(1))
        .map(|k| inv + k * m_prime)
        .take_while(|&w| w < m.max(2))
        .find(|&w| gcd(w, m) == 1)
        .unwrap_or(1)
}

/// Outcome of the mod-2β reduction step.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularReduction {
    /// `(β, …, β)`.
    pub s: Vec<BigInt>,
    pub modulus: BigInt,
    /// `m mod 2β` per coordinate, `None` where undetermined.
    pub m_mod: Vec<Option<BigInt>>,
    /// `(c − m_{2β}·B)/2β` for the accepted residue vector.
    pub reduced_target: Option<Vec<BigRational>>,
}

/// The mod-2β attack on `{±β}ⁿ` noise.
///
/// `c + s ≡ m_{2β}·B (mod 2β)` is solved first; an inconsistent system means
/// the noise is not of the `±β` form. Each residue candidate leaves the
/// instance `(c − m_{2β}·B)/β = m'·(2B) + e/β` with `e/β ∈ {±1}ⁿ`, handed to
/// the embedding attack. If no candidate yields a `±β` noise vector the
/// precondition is taken to fail and the report is `Inapplicable`. So is a
/// basis whose reduction modulo 2β leaves more than [`CANDIDATE_CAP`] residue
/// vectors, since the step then reveals nothing about `m`.
pub fn nguyen_modular_attack(
    pub_basis: &IntMatrix,
    c: &[BigInt],
    beta: i64,
) -> Result<(ModularReduction, AttackReport), LatticeError> {
    let start = Instant::now();
    const NAME: &str = "nguyen-modular";
    let n = pub_basis.require_square()?;
    if beta < 1 || beta > 1 << 20 {
        return Err(LatticeError::InvalidParameter(format!("beta = {beta} must lie in 1..=2^20")));
    }
    if c.len() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let m = 2 * beta as u64;
    let beta_big = BigInt::from(beta);
    let s = vec![beta_big.clone(); n];
    let target: Vec<BigInt> = c.iter().map(|x| x + &beta_big).collect();
    let mut reduction = ModularReduction {
        s,
        modulus: BigInt::from(m),
        m_mod: vec![None; n],
        reduced_target: None,
    };
    let Some(sol) = solve_mod(pub_basis, &target, m)? else {
        let r = AttackReport::new(
            NAME,
            AttackStatus::Inapplicable,
            None,
            "c + s is not congruent to a lattice point modulo 2β",
        );
        return Ok((reduction, r.timed(start)));
    };
    reduction.m_mod = sol.determined().into_iter().map(|v| v.map(BigInt::from)).collect();
    let Some(candidates) = sol.enumerate(CANDIDATE_CAP) else {
        // the basis is too degenerate modulo 2β to pin down m mod 2β
        let undetermined = reduction.m_mod.iter().filter(|x| x.is_none()).count();
        let r = AttackReport::new(
            NAME,
            AttackStatus::Inapplicable,
            None,
            format!("basis is singular modulo 2β: {undetermined} coordinates of m mod 2β undetermined, more than {CANDIDATE_CAP} candidates"),
        );
        return Ok((reduction, r.timed(start)));
    };
    let doubled = pub_basis.scale(&BigInt::from(2));
    let one = BigInt::one();
    for cand in &candidates {
        let m2: Vec<BigInt> = cand.iter().map(|&v| BigInt::from(v)).collect();
        let x = pub_basis.left_mul_vec(&m2)?;
        let diff: Vec<BigInt> = c.iter().zip(&x).map(|(a, b)| a - b).collect();
        if diff.iter().any(|d| !d.is_multiple_of(&beta_big)) {
            continue;
        }
        let z: Vec<BigInt> = diff.iter().map(|d| d / &beta_big).collect();
        let sub = embedding_attack(&doubled, &z, &one)?;
        let Some(m_prime) = sub.recovered else { continue };
        let m_full: Vec<BigInt> = m2.iter().zip(&m_prime).map(|(a, b)| a + b * BigInt::from(m)).collect();
        let e: Vec<BigInt> = c.iter().zip(pub_basis.left_mul_vec(&m_full)?).map(|(a, b)| a - b).collect();
        if e.iter().any(|x| x != &beta_big && x != &-&beta_big) {
            continue;
        }
        let two_beta = BigInt::from(m);
        reduction.m_mod = m2.iter().map(|v| Some(v.clone())).collect();
        reduction.reduced_target = Some(diff.iter().map(|d| BigRational::new(d.clone(), two_beta.clone())).collect());
        let r = AttackReport::new(
            NAME,
            AttackStatus::Recovered,
            Some(m_full),
            format!("{} residue candidate(s); reduced error ±1/2", candidates.len()),
        );
        return Ok((reduction, r.timed(start)));
    }
    let r = AttackReport::new(
        NAME,
        AttackStatus::Inapplicable,
        None,
        format!("none of {} residue candidate(s) yields noise in {{±β}}ⁿ", candidates.len()),
    );
    Ok((reduction, r.timed(start)))
}
