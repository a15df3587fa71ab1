//! Experiment bodies shared by the subcommands and the acceptance suite.
//! Each returns plain records; nothing here prints.

use anyhow::{ensure, Result};
use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use roundlab_core::address::{
    brute_force_min_queries, dt_tester_fk, dt_tester_fprime, f_k, f_prime_k, f_table,
};
use roundlab_core::codes::{exact_distance, local_test, relaxed_decode, LinearCode, Word};
use roundlab_core::comm::{
    disj_parity_map, element_bits, embed_instance, label, ldt_to_protocol, pi_k, PointerInstance,
    BIT_CONSTANT,
};
use roundlab_core::field::{checked_pow, is_prime};
use roundlab_core::graph::{
    estimate_gap, gen_no, gen_yes, has_cycle_leq, simulated_acceptance, BfsCycleTester,
    CycleCoverSpec, LazyCycleCover,
};
use roundlab_core::query::{par_trials, LinearOracle, PointOracle};
use roundlab_core::rounds::{
    contract_one_round, expand_nonadaptive, random_tree, strategy_to_tree, TreeNode,
};
use roundlab_core::seed::{derive, stream, tags};
use roundlab_core::transference::{dt_to_pt, lifted_distance, pt_to_ldt, LiftedProperty};
use roundlab_core::{estimate_acceptance, run, FieldVector, SimRng, Strategy, Verdict};

use crate::report::Record;

/// Inputs beyond this count are sampled instead of enumerated.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;
/// BLR triples per local-test run on codewords.
pub const LOCAL_TEST_REPS: usize = 4;
/// Corrupted fraction for the decoder experiment.
pub const CORRUPTION: f64 = 0.05;

fn count(flags: impl IntoIterator<Item = bool>) -> usize {
    flags.into_iter().filter(|&f| f).count()
}

/// Runs the `f_k` tree (and the `f'_k` tree for `k >= 1`) on every input of
/// `F_p^p`, or on `samples` random inputs when there are too many.
pub fn address_trees(p: u64, k: usize, samples: usize, seed: u64) -> Result<Record> {
    ensure!(is_prime(p), "p = {p} is not prime");
    let total = checked_pow(p, p as usize).filter(|&t| t <= EXHAUSTIVE_LIMIT);
    let inputs = total.unwrap_or(samples as u64);
    let fk = dt_tester_fk(k);
    let fprime = if k >= 1 {
        Some(dt_tester_fprime(k, p as usize)?)
    } else {
        None
    };
    let budget = fk.budget();
    let outcomes = par_trials(
        inputs as usize,
        derive(seed, tags::ADDRESS, 0),
        |t, rng, _| {
            let x = match total {
                Some(_) => FieldVector::from_index(p, p as usize, t)?,
                None => FieldVector::random(p, p as usize, rng)?,
            };
            let tr = run(&fk, &mut PointOracle::new(x.entries()), &budget, 0)?;
            let wrong = tr.verdict != Verdict::Value(f_k(&x, k)? as u64);
            let shape = tr.total_queries != k + 1 || tr.rounds_used != k + 1;
            let wrong_prime = match &fprime {
                Some(s) => {
                    let tr = run(s, &mut PointOracle::new(x.entries()), &s.budget(), 0)?;
                    tr.verdict != Verdict::Value(f_prime_k(&x, k)? as u64)
                        || tr.total_queries > k + 2
                        || tr.rounds_used != k + 1
                }
                None => false,
            };
            Ok((wrong, shape, wrong_prime))
        },
    )?;
    Ok(Record::new("address_trees")
        .with("p", p)
        .with("k", k)
        .with("inputs", inputs)
        .with("exhaustive", total.is_some())
        .with("errors", count(outcomes.iter().map(|o| o.0)))
        .with("shape_errors", count(outcomes.iter().map(|o| o.1)))
        .with("fprime_errors", count(outcomes.iter().map(|o| o.2))))
}

/// Exact minimum worst-case query count of `f_k` over `F_p^p` within
/// `rounds` adaptive rounds.
pub fn address_min_queries(p: u64, k: usize, rounds: usize) -> Result<Record> {
    let table = f_table(p, k)?;
    Ok(Record::new("address")
        .with("p", p)
        .with("k", k)
        .with("rounds", rounds)
        .with(
            "min_queries",
            brute_force_min_queries(&table, rounds, true)?,
        ))
}

/// Local test and local decoder on the Hadamard code of `F_p^n`.
pub fn codes(p: u64, n: usize, trials: usize, seed: u64) -> Result<Record> {
    ensure!(trials > 0, "trials must be positive");
    let code = LinearCode::hadamard(p, n)?;
    let m = code.block_len();
    let mut rng = stream(seed, tags::CODES, 0);
    let x = FieldVector::random(p, n, &mut rng)?;
    let w = code.encode(&x)?;

    let rows_ok = (1..=m).all(|i| {
        let row = code.row_support(i).expect("row in range");
        let value = row
            .iter()
            .zip(x.entries())
            .map(|(a, b)| a * b % p)
            .sum::<u64>()
            % p;
        value == w.entries()[i - 1]
    });

    let local = par_trials(trials, derive(seed, tags::CODES, 1), |_, _, s| {
        Ok(local_test(&code, &w, LOCAL_TEST_REPS, s)? == Verdict::Reject)
    })?;
    let random_trials = trials.min(1000);
    let random = par_trials(random_trials, derive(seed, tags::CODES, 2), |_, rng, s| {
        let noise = Word::random(p, m, rng)?;
        Ok(local_test(&code, &noise, 50, s)? == Verdict::Reject)
    })?;

    let exact = par_trials(trials, derive(seed, tags::CODES, 3), |t, _, s| {
        let i = 1 + t as usize % n;
        Ok(relaxed_decode(&code, &w, i, s)? != Some(x.get(i)))
    })?;

    let corrupted_entries = ((CORRUPTION * m as f64).floor() as usize).max(1);
    let mut corrupted = w.clone();
    for j in sample(&mut rng, m, corrupted_entries) {
        let shift = rng.gen_range(1..p);
        corrupted.set(j + 1, (w.entries()[j] + shift) % p)?;
    }
    let noisy = par_trials(trials, derive(seed, tags::CODES, 4), |t, _, s| {
        let i = 1 + t as usize % n;
        Ok(relaxed_decode(&code, &corrupted, i, s)? == Some(x.get(i)))
    })?;
    let nearest = exact_distance(&code, &corrupted)
        .map(|near| near.message == x)
        .ok();

    Ok(Record::new("codes")
        .with("p", p)
        .with("n", n)
        .with("block_len", m)
        .with("trials", trials)
        .with("rows_ok", rows_ok)
        .with("local_test_failures", count(local))
        .with(
            "random_word_rejection",
            count(random) as f64 / random_trials as f64,
        )
        .with("decode_errors", count(exact))
        .with("corrupted_entries", corrupted_entries)
        .with("decode_accuracy", count(noisy) as f64 / trials as f64)
        .with(
            "union_bound",
            1.0 - 2.0 * corrupted_entries as f64 / m as f64,
        )
        .with("nearest_recovered", nearest))
}

/// The tester for `C_{f_k}` built from the `f_k` tree, run on every
/// codeword of the Hadamard code of `F_p^p`, plus its linear lift.
pub fn transfer(p: u64, k: usize, trials: usize, eps: f64, seed: u64) -> Result<Record> {
    ensure!(trials > 0, "trials must be positive");
    let code = LinearCode::hadamard(p, p as usize)?;
    let f = f_table(p, k)?;
    let prop = LiftedProperty::new(code.clone(), f.clone())?;
    let tester = dt_to_pt(dt_tester_fk(k), &code, eps, true)?;
    let budget = tester.budget();
    let lifted = dt_to_pt(dt_tester_fk(k), &code, code.relative_distance(), true)?;
    let ldt = pt_to_ldt(|_| lifted, &code);
    let ldt_budget = ldt.budget();

    let (mut members, mut member_rejections, mut round_mismatches) = (0usize, 0usize, 0usize);
    let (mut min_rejection, mut min_agreement, mut min_far) = (1.0f64, 1.0f64, f64::INFINITY);
    for x in FieldVector::enumerate(p, p as usize)? {
        let word = code.encode(&x)?;
        let member = f.eval(&x) == 1;
        let source = run(
            &dt_tester_fk(k),
            &mut PointOracle::new(x.entries()),
            &dt_tester_fk(k).budget(),
            0,
        )?;
        let index = x.index();
        let runs = par_trials(trials, derive(seed, tags::TRANSFER, index), |_, _, s| {
            let tr = run(&tester, &mut word.oracle(), &budget, s)?;
            let lin = run(&ldt, &mut LinearOracle::new(p, x.entries()), &ldt_budget, s)?;
            Ok((
                tr.verdict.accepts(),
                tr.rounds_used == source.rounds_used,
                lin.verdict.accepts() == member && lin.rounds_used == source.rounds_used,
            ))
        })?;
        let rejections = count(runs.iter().map(|r| !r.0));
        round_mismatches += count(runs.iter().map(|r| !r.1));
        min_agreement = min_agreement.min(count(runs.iter().map(|r| r.2)) as f64 / trials as f64);
        if member {
            members += 1;
            member_rejections += rejections;
        } else {
            min_rejection = min_rejection.min(rejections as f64 / trials as f64);
            min_far = min_far.min(lifted_distance(&word, &prop)?);
        }
    }
    Ok(Record::new("transfer")
        .with("p", p)
        .with("k", k)
        .with("trials", trials)
        .with("delta_star", tester.inner().delta_star())
        .with("max_queries", budget.max_queries)
        .with("members", members)
        .with("member_rejections", member_rejections)
        .with("min_nonmember_rejection", min_rejection)
        .with("round_mismatches", round_mismatches)
        .with("min_linear_agreement", min_agreement)
        .with(
            "min_nonmember_distance",
            if min_far.is_finite() { min_far } else { 0.0 },
        ))
}

/// Default source count of the restricted tester: `floor(sqrt(n) / 10)`.
pub fn default_sources(n: usize) -> usize {
    (((n as f64).sqrt() / 10.0).floor() as usize).max(1)
}

/// Acceptance gap of the `rounds`-round BFS tester for `(2 rounds + 3)`-cycles
/// with `sources` sources, between `(2 rounds + 4)`- and
/// `(2 rounds + 3)`-cycle covers, and its acceptance against the simulator.
pub fn graph_gap(
    n: usize,
    rounds: usize,
    sources: usize,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<Record> {
    let tester = BfsCycleTester::with_sources(n, rounds, 2 * rounds + 3, sources, d)?;
    let gap = estimate_gap(&tester, n, rounds, d, trials, seed)?;
    let sim = simulated_acceptance(&tester, n, trials, seed)?;
    Ok(Record::new("graphs")
        .with("n", n)
        .with("rounds", rounds)
        .with("sources", sources)
        .with("trials", trials)
        .with("acc_yes", gap.acc_yes.probability)
        .with("acc_no", gap.acc_no.probability)
        .with("gap", gap.gap)
        .with("ci", gap.ci)
        .with("hw_yes", gap.acc_yes.half_width)
        .with("hw_no", gap.acc_no.half_width)
        .with("acc_sim", sim.probability)
        .with("hw_sim", sim.half_width))
}

/// The full `k`-round tester for `(2k+1)`-cycle-freeness on yes-instances
/// and on `(2k+1)`-cycle covers, with `eps` the certified distance of the
/// latter unless given.
pub fn bfs_detection(
    n: usize,
    k: usize,
    d: usize,
    eps: Option<f64>,
    yes_trials: usize,
    far_trials: usize,
    seed: u64,
) -> Result<Record> {
    ensure!(k >= 1, "the full tester needs k >= 1");
    let far = CycleCoverSpec::no(n, k - 1)?;
    let eps = eps.unwrap_or(far.distance_lower_bound(d));
    let tester = BfsCycleTester::new(n, k, 2 * k + 1, eps, d)?;
    let lazy = |spec: CycleCoverSpec| {
        move |rng: &mut SimRng| {
            LazyCycleCover::new(spec, SimRng::from_rng(rng).expect("infallible"))
        }
    };
    let yes = estimate_acceptance(
        &tester,
        lazy(CycleCoverSpec::yes(n, k)?),
        yes_trials,
        derive(seed, tags::YES, 1),
    )?;
    let no = estimate_acceptance(&tester, lazy(far), far_trials, derive(seed, tags::NO, 1))?;
    Ok(Record::new("bfs")
        .with("n", n)
        .with("k", k)
        .with("t", 2 * k + 1)
        .with("eps", eps)
        .with("sources", tester.sources())
        .with("yes_trials", yes_trials)
        .with("yes_rejections", yes.trials - yes.accepts)
        .with("far_trials", far_trials)
        .with("far_rejection", 1.0 - no.probability)
        .with("hw_far", no.half_width))
}

/// One explicit yes- and no-instance, checked for short cycles.
pub fn graph_instances(n: usize, k: usize, seed: u64) -> Result<Record> {
    let yes = gen_yes(n, k, seed)?;
    let no = gen_no(n, k, seed)?;
    Ok(Record::new("instances")
        .with("n", n)
        .with("k", k)
        .with("yes_edges", yes.edge_count())
        .with("yes_cycle_free", !has_cycle_leq(&yes, 2 * k + 3))
        .with("no_has_cycle", has_cycle_leq(&no, 2 * k + 3)))
}

fn path_batches(node: &TreeNode, depth: usize, out: &mut Vec<usize>) {
    match node {
        TreeNode::Leaf(_) => out.push(depth),
        TreeNode::Query { children, .. } => children
            .iter()
            .for_each(|c| path_batches(c, depth + 1, out)),
    }
}

/// Round surgery on `trees` random Boolean trees with up to `max_vars`
/// variables, 2 to `max_depth` batches and batches of up to `max_batch`.
pub fn round_surgery(
    max_vars: usize,
    max_depth: usize,
    max_batch: usize,
    trees: usize,
    seed: u64,
) -> Result<Record> {
    ensure!(
        max_vars <= 16,
        "exhaustive checks need at most 16 variables"
    );
    ensure!(
        max_depth >= 2,
        "contraction needs trees with at least 2 batches"
    );
    ensure!(
        max_batch >= 1 && max_batch <= max_vars,
        "batch size must be in 1..={max_vars}"
    );
    let outcomes = par_trials(trees, derive(seed, tags::ROUNDS, 0), |_, rng, _| {
        let vars = rng.gen_range(max_batch..=max_vars);
        let depth = rng.gen_range(2..=max_depth);
        let tree = random_tree(vars, depth, max_batch, rng)?;
        let q = tree.worst_case_queries();
        let k = depth - 1;
        let flat = expand_nonadaptive(&tree)?;
        let short = contract_one_round(&tree)?;
        let mut mismatches = 0usize;
        for j in 0..1u32 << vars {
            let x: Vec<u64> = (0..vars).map(|i| (j >> i & 1) as u64).collect();
            let v = tree.evaluate(&x)?;
            mismatches += (flat.evaluate(&x)? != v) as usize + (short.evaluate(&x)? != v) as usize;
        }
        let mut lengths = Vec::new();
        path_batches(short.root(), 0, &mut lengths);
        Ok((
            mismatches,
            flat.worst_case_queries() > (1usize << q) - 1,
            short.worst_case_queries() as f64 > q as f64 * (1.0 + (q as f64 / k as f64).exp2()),
            lengths.iter().any(|&l| l != depth - 1),
            strategy_to_tree(&tree.strategy(), vars, 2, 0)? != tree,
        ))
    })?;
    Ok(Record::new("rounds")
        .with("trees", trees)
        .with("max_vars", max_vars)
        .with("max_depth", max_depth)
        .with(
            "verdict_mismatches",
            outcomes.iter().map(|o| o.0).sum::<usize>(),
        )
        .with(
            "expand_bound_violations",
            count(outcomes.iter().map(|o| o.1)),
        )
        .with(
            "contract_bound_violations",
            count(outcomes.iter().map(|o| o.2)),
        )
        .with("batch_count_errors", count(outcomes.iter().map(|o| o.3)))
        .with(
            "materialize_mismatches",
            count(outcomes.iter().map(|o| o.4)),
        ))
}

/// The linear lift of the `f_{k+1}` tree compiled into a two-party protocol
/// on random pointer instances with `h = floor(n / 2)`.
pub fn pointer_protocol(n: u64, k: usize, trials: usize, seed: u64) -> Result<Record> {
    ensure!(is_prime(n), "n = {n} is not prime");
    let h = n as usize / 2;
    let code = LinearCode::identity(n, n as usize)?;
    let ldt = pt_to_ldt(|_| dt_tester_fk(k + 1), &code);
    let budget = ldt.budget();
    let allowance = |q: usize| BIT_CONSTANT * q * element_bits(n);
    let runs = par_trials(trials, derive(seed, tags::COMM, 0), |_, rng, s| {
        let inst = PointerInstance::random(h, rng)?;
        let x = embed_instance(&inst, n)?;
        let direct = run(&ldt, &mut LinearOracle::new(n, x.entries()), &budget, s)?;
        let proto = ldt_to_protocol(&ldt, &inst, n, s)?;
        let expected = Verdict::from_bit(label(pi_k(&inst, k + 2)?, h) % 2 == 0);
        Ok((
            proto.rounds != budget.rounds + 2,
            proto.outputs != [expected; 2] || direct.verdict != expected,
            proto.total_bits(),
            proto.total_bits() > allowance(direct.total_queries),
        ))
    })?;
    Ok(Record::new("comm")
        .with("n", n)
        .with("k", k)
        .with("instances", trials)
        .with("ldt_rounds", budget.rounds)
        .with("round_errors", count(runs.iter().map(|r| r.0)))
        .with("output_errors", count(runs.iter().map(|r| r.1)))
        .with("max_bits", runs.iter().map(|r| r.2).max().unwrap_or(0))
        .with("bit_allowance", allowance(budget.max_queries))
        .with("bit_violations", count(runs.iter().map(|r| r.3))))
}

/// The disjointness-to-parity map on `pairs` random promise pairs over a
/// universe of `4m`, with each parity table checked on every input.
pub fn disjointness(m: usize, pairs: usize, seed: u64) -> Result<Record> {
    let n = 4 * m;
    ensure!(m >= 1 && n <= 20, "exhaustive tables need 1 <= m <= 5");
    let outcomes = par_trials(pairs, derive(seed, tags::COMM, 1), |_, rng, _| {
        let mut draw = || {
            let mut s = FixedBitSet::with_capacity(n);
            sample(&mut *rng, n, m)
                .into_iter()
                .for_each(|i| s.insert(i));
            s
        };
        let (x, y) = (draw(), draw());
        let oracle = disj_parity_map(&x, &y, m)?;
        let common = x.intersection(&y).count();
        let size_error = oracle.parity_size() != 2 * m - 2 * common;
        let mask: u32 = x.symmetric_difference(&y).map(|i| 1 << i).sum();
        let mut z = FixedBitSet::with_capacity(n);
        let mut table_errors = 0usize;
        let mut protocol_errors = 0usize;
        for bits in 0..1u32 << n {
            z.clear();
            (0..n)
                .filter(|&i| bits >> i & 1 == 1)
                .for_each(|i| z.insert(i));
            let truth = ((mask & bits).count_ones() % 2) as u8;
            table_errors += (oracle.eval(&z)? != truth) as usize;
            protocol_errors += (oracle.answer_by_protocol(&z)? != (truth, 1)) as usize;
        }
        Ok((size_error, table_errors, protocol_errors, common == 0))
    })?;
    Ok(Record::new("disjointness")
        .with("n", n)
        .with("m", m)
        .with("pairs", pairs)
        .with("disjoint_pairs", count(outcomes.iter().map(|o| o.3)))
        .with("size_errors", count(outcomes.iter().map(|o| o.0)))
        .with("table_errors", outcomes.iter().map(|o| o.1).sum::<usize>())
        .with(
            "protocol_errors",
            outcomes.iter().map(|o| o.2).sum::<usize>(),
        ))
}
