use proptest::prelude::*;
use roundlab_core::address::{
    brute_force_min_queries, dt_tester_fk, dt_tester_fprime, f_k, f_prime_k, f_table, g_iter,
};
use roundlab_core::query::PointOracle;
use roundlab_core::{run, FieldVector, FunctionTable, Strategy, Verdict};

#[test]
fn fk_tester_is_exact_for_small_primes() {
    for p in [3u64, 5, 7] {
        for k in 0..=4 {
            let dt = dt_tester_fk(k);
            let budget = dt.budget();
            for x in FieldVector::enumerate(p, p as usize).unwrap() {
                let tr = run(&dt, &mut PointOracle::new(x.entries()), &budget, 0).unwrap();
                assert_eq!(tr.verdict, Verdict::from_bit(f_k(&x, k).unwrap() == 1));
                assert_eq!((tr.total_queries, tr.rounds_used), (k + 1, k + 1));
            }
        }
    }
}

#[test]
fn fprime_tester_is_exact() {
    for p in [3u64, 5] {
        for k in 1..=3 {
            let dt = dt_tester_fprime(k, p as usize).unwrap();
            for x in FieldVector::enumerate(p, p as usize).unwrap() {
                let tr = run(&dt, &mut PointOracle::new(x.entries()), &dt.budget(), 0).unwrap();
                assert_eq!(
                    tr.verdict,
                    Verdict::from_bit(f_prime_k(&x, k).unwrap() == 1)
                );
                assert_eq!((tr.total_queries, tr.rounds_used), (k + 2, k + 1));
            }
        }
    }
}

/// Whether `f` is determined by the coordinates in `set` (1-based).
fn determined_by(f: &FunctionTable, set: &[usize]) -> bool {
    let mut seen = std::collections::HashMap::new();
    FieldVector::enumerate(f.p, f.n).unwrap().all(|x| {
        let key: Vec<u64> = set.iter().map(|&i| x.get(i)).collect();
        *seen.entry(key).or_insert(f.eval(&x)) == f.eval(&x)
    })
}

/// Whether some 1-round strategy reading one coordinate `i` and then one
/// coordinate chosen from `x_i` computes `f`.
fn two_queries_one_round_suffice(f: &FunctionTable) -> bool {
    let n = f.n;
    (1..=n).any(|i| {
        (0..f.p).all(|a| {
            (1..=n).any(|j| {
                let mut seen = std::collections::HashMap::new();
                FieldVector::enumerate(f.p, n)
                    .unwrap()
                    .filter(|x| x.get(i) == a)
                    .all(|x| *seen.entry(x.get(j)).or_insert(f.eval(&x)) == f.eval(&x))
            })
        })
    })
}

#[test]
fn brute_force_agrees_with_naive_enumeration() {
    for p in [3u64, 5] {
        let f1 = f_table(p, 1).unwrap();
        let n = p as usize;
        // no proper subset of coordinates determines f_1
        for i in 1..=n {
            let others: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
            assert!(!determined_by(&f1, &others));
        }
        assert!(!(1..=n).any(|i| determined_by(&f1, &[i])));
        assert!(two_queries_one_round_suffice(&f1));
        assert_eq!(brute_force_min_queries(&f1, 0, true).unwrap(), n);
        assert_eq!(brute_force_min_queries(&f1, 1, true).unwrap(), 2);
    }
    assert_eq!(
        brute_force_min_queries(&f_table(3, 0).unwrap(), 0, true).unwrap(),
        1
    );
}

#[test]
fn higher_rounds_help_f2() {
    let f2 = f_table(3, 2).unwrap();
    let r0 = brute_force_min_queries(&f2, 0, true).unwrap();
    let r1 = brute_force_min_queries(&f2, 1, true).unwrap();
    let r2 = brute_force_min_queries(&f2, 2, true).unwrap();
    assert!(r0 >= r1 && r1 >= r2);
    assert!(r2 <= 3);
}

proptest! {
    #[test]
    fn pointer_chase_recurrence(entries in prop::collection::vec(0u64..7, 7), k in 1usize..20) {
        let x = FieldVector::new(7, entries).unwrap();
        let prev = g_iter(&x, k - 1).unwrap().last();
        let chain = g_iter(&x, k).unwrap();
        prop_assert_eq!(chain.last(), x.get(prev as usize + 1));
        prop_assert_eq!(chain.coordinates[0], 1);
        for j in 0..k {
            prop_assert_eq!(chain.coordinates[j + 1], chain.values[j] as usize + 1);
            prop_assert_eq!(chain.values[j], x.get(chain.coordinates[j]));
        }
    }

    #[test]
    fn fk_tester_stays_in_budget(entries in prop::collection::vec(0u64..11, 11), k in 0usize..12) {
        let x = FieldVector::new(11, entries).unwrap();
        let dt = dt_tester_fk(k);
        let tr = run(&dt, &mut PointOracle::new(x.entries()), &dt.budget(), 0).unwrap();
        prop_assert!(tr.total_queries <= k + 1 && tr.rounds_used <= k + 1);
        prop_assert_eq!(tr.verdict, Verdict::from_bit(f_k(&x, k).unwrap() == 1));
    }
}
