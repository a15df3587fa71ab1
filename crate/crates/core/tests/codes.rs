use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use roundlab_core::codes::{
    exact_distance, local_test, relaxed_decode, relaxed_decode_with, LinearCode, Word,
};
use roundlab_core::query::{par_trials, CountingOracle};
use roundlab_core::seed::strategy_rng;
use roundlab_core::{FieldVector, SimRng, Verdict};

fn message(p: u64, e: &[u64]) -> FieldVector {
    FieldVector::new(p, e.to_vec()).unwrap()
}

#[test]
fn distinct_codewords_are_far_apart() {
    let code = LinearCode::hadamard(3, 2).unwrap();
    let words: Vec<Word> = FieldVector::enumerate(3, 2)
        .unwrap()
        .map(|x| code.encode(&x).unwrap())
        .collect();
    let min = (0..9)
        .flat_map(|i| (i + 1..9).map(move |j| (i, j)))
        .map(|(i, j)| words[i].hamming(&words[j]))
        .min()
        .unwrap();
    assert!((min as f64 / 9.0 - code.relative_distance()).abs() < 1e-12);
}

#[test]
fn nearest_codeword_recovers_messages() {
    let code = LinearCode::hadamard(3, 3).unwrap();
    for x in FieldVector::enumerate(3, 3).unwrap() {
        let near = exact_distance(&code, &code.encode(&x).unwrap()).unwrap();
        assert_eq!((near.message, near.mismatches), (x, 0));
    }
}

#[test]
fn local_test_is_one_sided() {
    let code = LinearCode::hadamard(5, 2).unwrap();
    let w = code.encode(&message(5, &[1, 2])).unwrap();
    let rejections: usize = par_trials(20_000, 1, |t, _, seed| {
        Ok((local_test(&code, &w, 1 + t as usize % 3, seed)? == Verdict::Reject) as usize)
    })
    .unwrap()
    .into_iter()
    .sum();
    assert_eq!(rejections, 0);
}

#[test]
fn single_corruption_is_sometimes_caught() {
    let code = LinearCode::hadamard(5, 2).unwrap();
    let mut w = code.encode(&message(5, &[1, 2])).unwrap();
    let v = w.entries()[6];
    w.set(7, (v + 1) % 5).unwrap();
    let rejected = (0..100)
        .filter(|&s| local_test(&code, &w, 200, s).unwrap() == Verdict::Reject)
        .count();
    assert!(rejected > 0);
}

#[test]
fn random_words_are_rejected() {
    let code = LinearCode::hadamard(5, 2).unwrap();
    let outcomes = par_trials(1000, 2, |_, rng, seed| {
        let w = Word::random(5, 25, rng)?;
        Ok(local_test(&code, &w, 50, seed)? == Verdict::Reject)
    })
    .unwrap();
    let freq = outcomes.iter().filter(|&&r| r).count() as f64 / 1000.0;
    assert!(freq >= 0.99, "{freq}");
}

#[test]
fn decoder_is_exact_on_codewords_and_reads_two_symbols() {
    let code = LinearCode::hadamard(5, 2).unwrap();
    let x = message(5, &[1, 2]);
    let w = code.encode(&x).unwrap();
    for seed in 0..1000 {
        let i = 1 + seed as usize % 2;
        assert_eq!(relaxed_decode(&code, &w, i, seed).unwrap(), Some(x.get(i)));
        let mut counting = CountingOracle::new(w.oracle());
        let mut rng = strategy_rng(seed);
        relaxed_decode_with(&code, &mut counting, i, &mut rng, false).unwrap();
        assert_eq!(counting.queries, 2);
    }
}

#[test]
fn spot_checked_decoder_never_errs_on_codewords() {
    let code = LinearCode::hadamard(3, 3).unwrap();
    let x = message(3, &[2, 0, 1]);
    let w = code.encode(&x).unwrap();
    let mut rng = SimRng::seed_from_u64(4);
    for _ in 0..500 {
        let i = rng.gen_range(1..=3);
        assert_eq!(
            relaxed_decode_with(&code, &mut w.oracle(), i, &mut rng, true).unwrap(),
            Some(x.get(i))
        );
    }
}

#[test]
fn decoder_tolerates_five_percent_corruption() {
    let code = LinearCode::hadamard(5, 2).unwrap();
    let x = message(5, &[3, 1]);
    let mut w = code.encode(&x).unwrap();
    // round(0.05 * 25) = 1 corrupted entry
    let v = w.entries()[12];
    w.set(13, (v + 2) % 5).unwrap();
    let correct = par_trials(10_000, 3, |_, _, seed| {
        Ok(relaxed_decode(&code, &w, 1, seed)? == Some(3))
    })
    .unwrap()
    .into_iter()
    .filter(|&c| c)
    .count();
    assert!(correct as f64 / 10_000.0 >= 1.0 - 2.0 * 0.05);
}

proptest! {
    #[test]
    fn encoding_is_linear(
        a in prop::collection::vec(0u64..5, 2),
        b in prop::collection::vec(0u64..5, 2),
        alpha in 0u64..5,
        beta in 0u64..5,
    ) {
        let code = LinearCode::hadamard(5, 2).unwrap();
        let (x, y) = (message(5, &a), message(5, &b));
        let combo = x.scale(alpha).add(&y.scale(beta)).unwrap();
        let lhs = code.encode(&combo).unwrap();
        let rhs = code.encode(&x).unwrap().scale(alpha).add(&code.encode(&y).unwrap().scale(beta)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn row_support_is_stable(i in 1usize..=27) {
        let code = LinearCode::hadamard(3, 3).unwrap();
        prop_assert_eq!(code.row_support(i).unwrap(), code.row_support(i).unwrap());
        prop_assert_eq!(code.hadamard_row(code.row_support(i).unwrap()).unwrap(), i);
    }
}
