use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ldlc_pkc::attacks::mix;
use ldlc_pkc::matrix_core::{det, hnf, hnf_with_modulus, is_hnf, same_lattice, IntMatrix};

fn random_basis(n: usize, rng: &mut ChaCha20Rng) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_i64(&rows);
        if !det(&a).unwrap().is_zero() {
            return a;
        }
    }
}

fn structure_holds(h: &IntMatrix) -> bool {
    let n = h.rows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let x = &h[(i, j)];
            if j > i {
                x.is_zero()
            } else if j == i {
                x.is_positive()
            } else {
                !x.is_negative() && x < &h[(j, j)]
            }
        })
    })
}

fn check_laws(a: &IntMatrix, rng: &mut ChaCha20Rng) {
    let r = hnf(a).unwrap();
    assert!(structure_holds(&r.matrix));
    assert!(is_hnf(&r.matrix));
    assert_eq!(r.transform.mul(a).unwrap(), r.matrix);
    assert_eq!(det(&r.transform).unwrap().abs(), BigInt::one());
    // another basis of the same lattice has the same HNF
    let b = mix(a, 2, rng);
    assert!(same_lattice(a, &b));
    assert_eq!(hnf(&b).unwrap().matrix, r.matrix);
}

#[test]
fn two_hundred_random_bases() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x4e4f);
    let start = std::time::Instant::now();
    for _ in 0..200 {
        let n = rng.gen_range(1..=32);
        let a = random_basis(n, &mut rng);
        check_laws(&a, &mut rng);
    }
    assert!(start.elapsed().as_secs() < 60, "{:?}", start.elapsed());
}

#[test]
fn modulus_variant_agrees_with_extra_generators() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for n in [3, 7, 12] {
        let a = random_basis(n, &mut rng);
        let d = det(&a).unwrap().abs();
        let h = hnf(&a).unwrap().matrix;
        // any multiple of det works as a modulus
        assert_eq!(hnf_with_modulus(&a, &(&d * 3)).unwrap(), h);
        let mut rows = a.row_vecs();
        rows.extend(mix(&a, 1, &mut rng).row_vecs());
        assert_eq!(hnf_with_modulus(&IntMatrix::from_rows(rows).unwrap(), &d).unwrap(), h);
    }
}

fn small_basis() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6)
        .prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-20i64..=20, n), n))
        .prop_map(|rows| IntMatrix::from_i64(&rows))
        .prop_filter("nonsingular", |a| !det(a).unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_is_canonical(a in small_basis(), seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let r = hnf(&a).unwrap();
        prop_assert!(structure_holds(&r.matrix));
        prop_assert_eq!(r.transform.mul(&a).unwrap(), r.matrix.clone());
        prop_assert_eq!(det(&r.transform).unwrap().abs(), BigInt::one());
        prop_assert_eq!(hnf(&r.matrix).unwrap().matrix, r.matrix.clone());
        prop_assert_eq!(hnf(&mix(&a, 3, &mut rng)).unwrap().matrix, r.matrix.clone());
        let diag: BigInt = (0..a.rows()).map(|i| r.matrix[(i, i)].clone()).product();
        prop_assert_eq!(diag, det(&a).unwrap().abs());
    }
}
