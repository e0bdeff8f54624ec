//! Mutated fuzz seeds through every text parser: no panics, and anything
//! accepted re-serializes to an equal value.

use proptest::prelude::*;

use ldlc_pkc::cca2::FoCiphertext;
use ldlc_pkc::ldlc::SparseParityMatrix;
use ldlc_pkc::matrix_core::text::{format_matrix, parse_matrix};
use ldlc_pkc::pkc::{Ciphertext, PublicKey, SecretKey};

const SEEDS: &[&str] = &[
    include_str!("../../../fuzz/corpus/public_key/key8"),
    include_str!("../../../fuzz/corpus/secret_key/key8"),
    include_str!("../../../fuzz/corpus/ciphertext/ct8"),
    include_str!("../../../fuzz/corpus/fo_ciphertext/fo8"),
    include_str!("../../../fuzz/corpus/matrix_text/hnf8"),
    include_str!("../../../fuzz/corpus/sparse_text/h8"),
];

fn check_all(text: &str) {
    if let Ok(m) = parse_matrix(text) {
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }
    if let Ok(h) = SparseParityMatrix::parse(text) {
        assert_eq!(SparseParityMatrix::parse(&h.to_text()).unwrap(), h);
    }
    if let Ok(pk) = PublicKey::parse(text) {
        assert_eq!(PublicKey::parse(&pk.to_text()).unwrap(), pk);
    }
    if let Ok(sk) = SecretKey::parse(text) {
        assert_eq!(SecretKey::parse(&sk.to_text()).unwrap(), sk);
    }
    if let Ok((p, ct)) = Ciphertext::parse(text) {
        assert_eq!(Ciphertext::parse(&ct.to_text(&p)).unwrap(), (p, ct));
    }
    if let Ok((p, ct)) = FoCiphertext::parse(text) {
        assert_eq!(FoCiphertext::parse(&ct.to_text(&p)).unwrap(), (p, ct));
    }
}

#[test]
fn seeds_parse_as_their_own_kind() {
    assert!(PublicKey::parse(SEEDS[0]).is_ok());
    assert!(SecretKey::parse(SEEDS[1]).is_ok());
    assert!(Ciphertext::parse(SEEDS[2]).is_ok());
    assert!(FoCiphertext::parse(SEEDS[3]).is_ok());
    assert!(parse_matrix(SEEDS[4]).is_ok());
    assert!(SparseParityMatrix::parse(SEEDS[5]).is_ok());
    for s in SEEDS {
        check_all(s);
    }
}

#[derive(Debug, Clone)]
enum Edit {
    Delete(usize),
    Insert(usize, char),
    Replace(usize, char),
}

fn edit() -> impl Strategy<Value = Edit> {
    let ch = prop::sample::select(vec!['0', '1', '9', '-', ' ', '\n', '/', '=', 'a', 'x', '\r', '\u{e9}']);
    prop_oneof![
        any::<usize>().prop_map(Edit::Delete),
        (any::<usize>(), ch.clone()).prop_map(|(i, c)| Edit::Insert(i, c)),
        (any::<usize>(), ch).prop_map(|(i, c)| Edit::Replace(i, c)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn mutated_seeds_never_panic(seed in 0..SEEDS.len(), edits in prop::collection::vec(edit(), 1..6)) {
        let mut chars: Vec<char> = SEEDS[seed].chars().collect();
        for e in edits {
            let len = chars.len().max(1);
            match e {
                Edit::Delete(i) if !chars.is_empty() => {
                    chars.remove(i % chars.len());
                }
                Edit::Delete(_) => {}
                Edit::Insert(i, c) => chars.insert(i % (len + 1).min(chars.len() + 1), c),
                Edit::Replace(i, c) if !chars.is_empty() => {
                    let at = i % chars.len();
                    chars[at] = c;
                }
                Edit::Replace(..) => {}
            }
        }
        let text: String = chars.into_iter().collect();
        check_all(&text);
    }
}
