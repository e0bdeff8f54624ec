use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::cvp::NearestPlaneAttack;
use super::{AttackReport, AttackStatus};
use crate::matrix_core::{inverse_rational, lattice_intersect, lll, svp_exhaustive, IntMatrix, LatticeError, DEFAULT_DELTA};

/// Largest embedding dimension `n + 1` searched exhaustively.
pub const BROADCAST_EXACT_DIM: usize = 12;

/// One recipient's public basis and ciphertext of the shared plaintext.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BroadcastInstance {
    pub pub_basis: IntMatrix,
    pub c: Vec<BigInt>,
}

fn check_instances(instances: &[BroadcastInstance]) -> Result<usize, LatticeError> {
    let first = instances
        .first()
        .ok_or_else(|| LatticeError::InvalidParameter("at least one instance is required".into()))?;
    let n = first.pub_basis.require_square()?;
    for inst in instances {
        let m = inst.pub_basis.require_square()?;
        if m != n || inst.c.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: if m != n { m } else { inst.c.len() },
            });
        }
    }
    Ok(n)
}

fn embedding_basis(inst: &BroadcastInstance) -> Result<IntMatrix, LatticeError> {
    let mut rows: Vec<Vec<BigInt>> = inst
        .pub_basis
        .row_vecs()
        .into_iter()
        .map(|mut r| {
            r.push(BigInt::zero());
            r
        })
        .collect();
    let mut last = inst.c.clone();
    last.push(BigInt::one());
    rows.push(last);
    IntMatrix::from_rows(rows)
}

/// Intersects the embedding lattices `[[G'_i, 0], [c_i, 1]]` and looks for a
/// short vector `±(e, 1)` common to all of them, i.e. a noise vector shared
/// by every ciphertext. `m` is then `(c_1 − e)·G'_1⁻¹`, and must agree across
/// all instances.
///
/// Up to dimension [`BROADCAST_EXACT_DIM`] the shortest vector is searched
/// exhaustively around the LLL basis; above it only the LLL rows are scanned.
pub fn broadcast_intersection(instances: &[BroadcastInstance], bound: &BigInt) -> Result<AttackReport, LatticeError> {
    const NAME: &str = "broadcast-intersection";
    let start = Instant::now();
    let n = check_instances(instances)?;
    let mut lattice = embedding_basis(&instances[0])?;
    for inst in &instances[1..] {
        lattice = lattice_intersect(&lattice, &embedding_basis(inst)?)?;
    }
    let reduced = lll(&lattice, DEFAULT_DELTA)?;
    let mut candidates: Vec<Vec<BigInt>> = Vec::new();
    let mut note = "LLL rows only";
    if n < BROADCAST_EXACT_DIM {
        let svp = svp_exhaustive(&reduced, 1)?;
        note = if svp.certified {
            "certified shortest vector"
        } else {
            "uncertified box search"
        };
        candidates.push(svp.vector);
    }
    candidates.extend(reduced.row_vecs());

    let inverses = instances
        .iter()
        .map(|i| inverse_rational(&i.pub_basis))
        .collect::<Result<Vec<_>, _>>()?;
    for v in &candidates {
        let sign = if v[n].is_one() {
            BigInt::one()
        } else if (-&v[n]).is_one() {
            -BigInt::one()
        } else {
            continue;
        };
        let e: Vec<BigInt> = v[..n].iter().map(|x| x * &sign).collect();
        if e.iter().any(|x| x.abs() > *bound) {
            continue;
        }
        let mut recovered: Option<Vec<BigInt>> = None;
        let mut consistent = true;
        for (inst, inv) in instances.iter().zip(&inverses) {
            let x: Vec<BigInt> = inst.c.iter().zip(&e).map(|(a, b)| a - b).collect();
            let m = inv.left_mul_vec(&x)?;
            if !m.iter().all(|q| q.is_integer()) {
                consistent = false;
                break;
            }
            let m: Vec<BigInt> = m.into_iter().map(|q| q.to_integer()).collect();
            match &recovered {
                None => recovered = Some(m),
                Some(r) if *r == m => {}
                Some(_) => {
                    consistent = false;
                    break;
                }
            }
        }
        if consistent {
            return Ok(AttackReport::new(
                NAME,
                AttackStatus::Recovered,
                recovered,
                format!("common noise found ({note}); {} instance(s)", instances.len()),
            )
            .timed(start));
        }
    }
    Ok(AttackReport::new(
        NAME,
        AttackStatus::Failed,
        None,
        format!("no common short (e, 1) vector ({note})"),
    )
    .timed(start))
}

/// `m = v·(Σ G'_i)⁻¹` with `v` the nearest-plane point to `Σ c_i`.
///
/// Correct when all recipients share the noise vector, in which case the
/// summed instance has noise `k·e`; `bound` is per instance.
pub fn broadcast_sum(instances: &[BroadcastInstance], bound: &BigInt) -> Result<AttackReport, LatticeError> {
    let start = Instant::now();
    let n = check_instances(instances)?;
    let mut sum = IntMatrix::zeros(n, n);
    let mut c = vec![BigInt::zero(); n];
    for inst in instances {
        sum = sum.add(&inst.pub_basis)?;
        c.iter_mut().zip(&inst.c).for_each(|(a, b)| *a += b);
    }
    let k = BigInt::from(instances.len());
    let mut r = NearestPlaneAttack::new(&sum)?.attack(&c, &(bound * k))?;
    r.attack = "broadcast-sum";
    Ok(r.timed(start))
}
