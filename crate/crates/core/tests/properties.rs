use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use statrs::distribution::{Beta, ContinuousCDF};

use nfl_core::combinatorics::stars_and_bars_count;
use nfl_core::cost::{compile_permutation, transposition_gate_bound};
use nfl_core::equivalence::{count_classes, distribution_class_partition, multiplicity_key, BlockGroupSpec, GroupKind, ScanMode};
use nfl_core::haar::{is_distinct, FastVerdict, HaarMethod, HaarSampler, StrongDistinctness};
use nfl_core::model::{
    build_input_state, deferred_equivalence_check, output_distribution, OutcomeSampler, Permutation, RegisterShape, ResourceState,
};

fn shape_strategy(n: u32) -> impl Strategy<Value = RegisterShape> {
    (0..=n, 1..=n)
        .prop_flat_map(move |(nq, ny)| (Just(nq), 0..=n - nq, Just(ny)))
        .prop_map(move |(nq, nplus, ny)| RegisterShape::new(n - nq - nplus, nplus, nq, ny).unwrap())
}

fn rational_state(nq: u32) -> impl Strategy<Value = ResourceState> {
    weighted_state(nq, 60)
}

fn weighted_state(nq: u32, max_weight: i64) -> impl Strategy<Value = ResourceState> {
    prop::collection::vec(1i64..=max_weight, 1usize << nq).prop_map(|w| {
        let total: i64 = w.iter().sum();
        ResourceState::from_ratios(&w.iter().map(|&x| (x, total)).collect::<Vec<_>>()).unwrap()
    })
}

fn shape_and_state(n: u32) -> impl Strategy<Value = (RegisterShape, ResourceState)> {
    shape_strategy(n).prop_flat_map(|shape| (Just(shape), rational_state(shape.nq)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measuring_first_changes_nothing((shape, state) in shape_and_state(3), seed in any::<u64>()) {
        let input = build_input_state(&shape, &state).unwrap();
        let p = Permutation::random(shape.size(), &mut ChaCha20Rng::seed_from_u64(seed));
        prop_assert!(deferred_equivalence_check(&input, &p).unwrap());
    }

    #[test]
    fn equal_keys_give_equal_distributions((shape, state) in shape_and_state(3), seed in any::<u64>()) {
        // any state at all, degenerate ones included
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let p = Permutation::random(shape.size(), &mut rng);
        let w = BlockGroupSpec::new(GroupKind::W, &shape).random_element(&mut rng);
        let v = BlockGroupSpec::new(GroupKind::V, &shape).random_element(&mut rng);
        let s = w.compose(&p).unwrap().compose(&v).unwrap();
        prop_assert_eq!(multiplicity_key(&p, &shape).unwrap(), multiplicity_key(&s, &shape).unwrap());
        let input = build_input_state(&shape, &state).unwrap();
        prop_assert_eq!(output_distribution(&input, &p).unwrap(), output_distribution(&input, &s).unwrap());
    }

    #[test]
    fn unequal_keys_give_unequal_distributions(state in rational_state(1), seed in any::<u64>()) {
        let shape = RegisterShape::new(1, 1, 1, 1).unwrap();
        let checker = StrongDistinctness::default();
        prop_assume!(is_distinct(&state, 0.0) && checker.oracle(&state, &shape).unwrap());
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (p, s) = (Permutation::random(8, &mut rng), Permutation::random(8, &mut rng));
        let input = build_input_state(&shape, &state).unwrap();
        let same_key = multiplicity_key(&p, &shape).unwrap() == multiplicity_key(&s, &shape).unwrap();
        let same_dist = output_distribution(&input, &p).unwrap() == output_distribution(&input, &s).unwrap();
        prop_assert_eq!(same_key, same_dist);
    }

    #[test]
    fn compiled_circuits_realize_their_permutation(n in 1usize..=6, seed in any::<u64>()) {
        let p = Permutation::random(1 << n, &mut ChaCha20Rng::seed_from_u64(seed));
        let circuit = compile_permutation(&p, n).unwrap();
        prop_assert!(circuit.realizes(&p));
        let transpositions = p.len() - p.cycle_count();
        prop_assert!(circuit.len() <= transpositions * transposition_gate_bound(n));
    }
}

#[test]
fn fast_path_is_sound() {
    let shapes = [(1, 1, 1, 1), (0, 0, 3, 1), (0, 1, 2, 1), (1, 0, 2, 2), (0, 0, 2, 1), (2, 0, 1, 2)];
    let checker = StrongDistinctness::default();
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for (n0, nplus, nq, ny) in shapes {
        let shape = RegisterShape::new(n0, nplus, nq, ny).unwrap();
        // small weights exercise the inconclusive branch, large ones the fast path
        let (small, large) = (weighted_state(nq, 60), weighted_state(nq, 1_000_000));
        let mut yes = 0;
        for i in 0..200 {
            let strategy = if i % 2 == 0 { &small } else { &large };
            let state = strategy.new_tree(&mut runner).unwrap().current();
            if checker.fast(&state, &shape).unwrap() == FastVerdict::Yes {
                yes += 1;
                assert!(checker.oracle(&state, &shape).unwrap(), "fast path accepted a failing state at {shape}");
            }
        }
        assert!(yes > 0, "fast path never applied at {shape}");
    }
}

#[test]
fn class_sizes_cover_the_group() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for (n0, nplus, nq, ny) in [(1, 1, 1, 1), (0, 0, 3, 1), (1, 0, 2, 2), (0, 2, 1, 2)] {
        let shape = RegisterShape::new(n0, nplus, nq, ny).unwrap();
        let state = rational_state(nq).new_tree(&mut runner).unwrap().current();
        let report = distribution_class_partition(&state, &shape, ScanMode::Exhaustive, 0.0).unwrap();
        assert_eq!(report.classes.iter().map(|c| c.count).sum::<u64>(), 40_320);
        assert!(report.classes.iter().all(|c| c.count > 0));
        assert!(report.m() <= count_classes(&shape).unwrap());
    }
}

#[test]
fn stars_and_bars_shapes_match_formula() {
    for t in 1..=2 {
        let shape = RegisterShape::stars_and_bars(t, t).unwrap();
        assert_eq!(count_classes(&shape).unwrap().to_string(), stars_and_bars_count(t).unwrap().to_string());
    }
}

#[test]
fn sampled_outcomes_match_distribution() {
    let shape = RegisterShape::new(1, 0, 2, 2).unwrap();
    let state = ResourceState::from_ratios(&[(1, 10), (2, 10), (3, 10), (4, 10)]).unwrap();
    let input = build_input_state(&shape, &state).unwrap();
    let p = Permutation::random(8, &mut ChaCha20Rng::seed_from_u64(4));
    let dist = output_distribution(&input, &p).unwrap().masses().to_f64();
    let sampler = OutcomeSampler::new(&input, &p).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let draws = 40_000;
    let mut counts = vec![0usize; dist.len()];
    for _ in 0..draws {
        counts[sampler.sample(&mut rng)] += 1;
    }
    let tv: f64 = counts.iter().zip(&dist).map(|(&c, &q)| (c as f64 / draws as f64 - q).abs()).sum::<f64>() / 2.0;
    // E[TV] <= sqrt(k / draws) / 2 for k outcomes; allow a wide margin
    assert!(tv < 0.02, "total variation {tv}");
}

fn ks_one_sample(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn squared_magnitudes_follow_beta() {
    // one squared amplitude of a Haar state in dimension d is Beta(1, d - 1)
    let beta = Beta::new(1.0, 3.0).unwrap();
    for method in [HaarMethod::Qr, HaarMethod::Rayleigh] {
        let xs: Vec<f64> = (0..3000).map(|s| HaarSampler::new(method, s).sample(2).unwrap().masses().to_f64()[1]).collect();
        let d = ks_one_sample(xs, |x| beta.cdf(x));
        // 1.95 / sqrt(n) is the 0.1% critical value
        assert!(d < 1.95 / 3000f64.sqrt(), "{method:?}: D = {d}");
    }
}
