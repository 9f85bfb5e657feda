use d2d_core::allocators::Instance;
use d2d_core::metrics::mean_and_std_err;
use d2d_core::netmodel::{build_gain_table, generate_topology, Node};
use d2d_core::*;
use proptest::prelude::*;

fn instance(c: usize, d: usize, seed: u64) -> Instance {
    let cfg = ScenarioConfig {
        num_cellular: c,
        num_d2d: d,
        ..Default::default()
    };
    Instance::generate(&cfg, seed).unwrap()
}

/// Per-link rates summed one by one, reading gains through the public table.
fn per_link_total(inst: &Instance, alloc: &Allocation) -> f64 {
    let mut total = 0.0;
    for ue in 0..inst.num_cellular() {
        total += (1.0 + sinr_cellular(ue, alloc, &inst.gains, &inst.powers).unwrap()).log2();
    }
    for d in 0..inst.num_d2d() {
        if alloc.is_assigned(d) {
            total += (1.0 + sinr_d2d(d, alloc, &inst.gains, &inst.powers).unwrap()).log2();
        }
    }
    total
}

/// Cellular SINR with interferers found by scanning the raw assignment vector.
fn cellular_sinr_by_scan(inst: &Instance, alloc: &Allocation, ue: usize) -> f64 {
    let p = &inst.powers;
    let mut interference = 0.0;
    for (d, r) in alloc.assignments().iter().enumerate() {
        if *r == Some(ue) {
            interference +=
                p.d2d_power_w * inst.gains.get(Node::Cellular(ue), Node::D2dTx(d)).unwrap();
        }
    }
    p.bs_power_w
        * inst
            .gains
            .get(Node::Cellular(ue), Node::BaseStation)
            .unwrap()
        / (p.noise_w + interference)
}

fn d2d_sinr_by_scan(inst: &Instance, alloc: &Allocation, pair: usize) -> f64 {
    let p = &inst.powers;
    let mine = alloc.resource_of(pair).unwrap();
    let mut denom = p.noise_w
        + p.bs_power_w
            * inst
                .gains
                .get(Node::D2dRx(pair), Node::BaseStation)
                .unwrap();
    for (d, r) in alloc.assignments().iter().enumerate() {
        if d != pair && *r == Some(mine) {
            denom += p.d2d_power_w * inst.gains.get(Node::D2dRx(pair), Node::D2dTx(d)).unwrap();
        }
    }
    p.d2d_power_w
        * inst
            .gains
            .get(Node::D2dRx(pair), Node::D2dTx(pair))
            .unwrap()
        / denom
}

fn partial_allocation(inst: &Instance, seed: u64, keep_mask: u32) -> Allocation {
    let mut a = allocate_random(inst, seed).unwrap();
    for d in 0..inst.num_d2d() {
        if keep_mask & (1 << d) == 0 {
            a.unassign(d);
        }
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sinr_and_rates_are_positive(c in 1usize..6, d in 0usize..12, seed in any::<u64>()) {
        let inst = instance(c, d, seed);
        let a = allocate_random(&inst, seed).unwrap();
        for ue in 0..c {
            let s = sinr_cellular(ue, &a, &inst.gains, &inst.powers).unwrap();
            prop_assert!(s.is_finite() && s > 0.0);
        }
        for pair in 0..d {
            let s = sinr_d2d(pair, &a, &inst.gains, &inst.powers).unwrap();
            prop_assert!(s.is_finite() && s > 0.0);
        }
        prop_assert!(inst.sum_rate(&a) >= 0.0);
    }

    #[test]
    fn sinr_matches_interferer_scan(c in 1usize..5, d in 1usize..10, seed in any::<u64>()) {
        let inst = instance(c, d, seed);
        let a = allocate_random(&inst, seed ^ 0x5a5a).unwrap();
        for ue in 0..c {
            let got = sinr_cellular(ue, &a, &inst.gains, &inst.powers).unwrap();
            let want = cellular_sinr_by_scan(&inst, &a, ue);
            prop_assert!((got - want).abs() <= 1e-12 * want);
        }
        for pair in 0..d {
            let got = sinr_d2d(pair, &a, &inst.gains, &inst.powers).unwrap();
            let want = d2d_sinr_by_scan(&inst, &a, pair);
            prop_assert!((got - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn sum_rate_is_additive(c in 1usize..5, d in 0usize..10, seed in any::<u64>(), mask in any::<u32>()) {
        let inst = instance(c, d, seed);
        let a = partial_allocation(&inst, seed, mask);
        let total = inst.sum_rate(&a);
        let by_link = per_link_total(&inst, &a);
        prop_assert!((total - by_link).abs() <= 1e-9 * by_link);
    }

    #[test]
    fn marginal_gain_is_a_two_evaluation_difference(c in 1usize..5, d in 1usize..10, seed in any::<u64>(), mask in any::<u32>()) {
        let inst = instance(c, d, seed);
        let a = partial_allocation(&inst, seed, mask);
        for pair in a.unassigned().collect::<Vec<_>>() {
            for r in 0..c {
                let mg = marginal_gain(pair, r, &a, &inst.gains, &inst.powers).unwrap();
                let mut with = a.clone();
                with.assign(pair, r).unwrap();
                let (before, after) = (inst.sum_rate(&a), inst.sum_rate(&with));
                prop_assert!((mg - (after - before)).abs() <= 1e-12 * before.max(after));
            }
        }
    }

    #[test]
    fn removing_a_sharer_never_hurts(c in 1usize..4, d in 2usize..10, seed in any::<u64>(), pick in any::<usize>()) {
        let inst = instance(c, d, seed);
        let a = allocate_random(&inst, seed).unwrap();
        let victim = pick % d;
        let resource = a.resource_of(victim).unwrap();
        let mut without = a.clone();
        without.unassign(victim);
        let ue_before = sinr_cellular(resource, &a, &inst.gains, &inst.powers).unwrap();
        let ue_after = sinr_cellular(resource, &without, &inst.gains, &inst.powers).unwrap();
        prop_assert!(ue_after >= ue_before);
        for other in a.pairs_on(resource).filter(|&o| o != victim) {
            let before = sinr_d2d(other, &a, &inst.gains, &inst.powers).unwrap();
            let after = sinr_d2d(other, &without, &inst.gains, &inst.powers).unwrap();
            prop_assert!(after >= before);
        }
    }

    #[test]
    fn drops_are_deterministic(c in 0usize..5, d in 0usize..8, seed in any::<u64>()) {
        let cfg = ScenarioConfig { num_cellular: c.max(usize::from(d > 0)), num_d2d: d, fading_enabled: seed % 2 == 0, ..Default::default() };
        let t1 = generate_topology(&cfg, seed).unwrap();
        let t2 = generate_topology(&cfg, seed).unwrap();
        prop_assert_eq!(&t1, &t2);
        prop_assert_eq!(build_gain_table(&t1, &cfg, seed).unwrap(), build_gain_table(&t2, &cfg, seed).unwrap());
    }

    #[test]
    fn allocators_are_complete_and_below_the_optimum(c in 1usize..4, d in 0usize..6, seed in any::<u64>()) {
        let inst = instance(c, d, seed);
        let params = RicaParams::default();
        let best = inst.sum_rate(&allocate_exhaustive(&inst).unwrap());
        let outcomes = [
            allocate_random(&inst, seed).unwrap(),
            allocate_rica(&inst, &params).unwrap().allocation,
            allocate_new_auction(&inst, &params).unwrap().allocation,
        ];
        for a in &outcomes {
            prop_assert!(a.is_complete());
            prop_assert!(inst.sum_rate(a) <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn auction_round_bounds(c in 1usize..5, d in 0usize..9, seed in any::<u64>(), step in 0.01f64..1.0) {
        let inst = instance(c, d, seed);
        let params = RicaParams { price_step: step, ..Default::default() };
        let start = params.resolve_price_start(&inst).unwrap();
        let rica = allocate_rica(&inst, &params).unwrap();
        prop_assert!(rica.rounds.len() <= (start / step).ceil() as usize + d);
        let prices: Vec<f64> = rica.prices().collect();
        prop_assert!(prices.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(rica.final_sum_rate, inst.sum_rate(&rica.allocation));

        let new = allocate_new_auction(&inst, &params).unwrap();
        prop_assert_eq!(new.rounds.len(), d);
        prop_assert_eq!(new.final_sum_rate, inst.sum_rate(&new.allocation));
        prop_assert_eq!(&new, &allocate_new_auction(&inst, &params).unwrap());
    }

    #[test]
    fn new_auction_ignores_prices(c in 1usize..5, d in 0usize..8, seed in any::<u64>(), factor in 1e-3f64..1e3) {
        let inst = instance(c, d, seed);
        let params = RicaParams::default();
        let base = allocate_new_auction(&inst, &params).unwrap();
        let scaled = allocate_new_auction(&inst, &params.scaled(&inst, factor).unwrap()).unwrap();
        prop_assert_eq!(base.allocation, scaled.allocation);
    }

    #[test]
    fn pdf_integrates_to_one(samples in prop::collection::vec(-80.0f64..80.0, 2..300), bins in 1usize..60) {
        let pdf = sinr_pdf(&samples, bins).unwrap();
        prop_assert!((pdf.integral() - 1.0).abs() <= 1e-9);
        prop_assert!(pdf.bin_edges.windows(2).all(|e| e[1] > e[0]));
        prop_assert!(pdf.densities.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn skewness_follows_affine_maps(samples in prop::collection::vec(-50.0f64..50.0, 3..200), a in 0.1f64..10.0, b in -100.0f64..100.0) {
        prop_assume!(samples.iter().any(|&x| (x - samples[0]).abs() > 1e-3));
        let s = skewness(&samples).unwrap();
        let up: Vec<f64> = samples.iter().map(|x| a * x + b).collect();
        let down: Vec<f64> = samples.iter().map(|x| -a * x + b).collect();
        prop_assert!((skewness(&up).unwrap() - s).abs() <= 1e-8 * (1.0 + s.abs()));
        prop_assert!((skewness(&down).unwrap() + s).abs() <= 1e-8 * (1.0 + s.abs()));
    }

    #[test]
    fn pooled_curve_mean(xs in prop::collection::vec(0.0f64..60.0, 1..40), ys in prop::collection::vec(0.0f64..60.0, 1..40)) {
        let n = xs.len().min(ys.len());
        let mk = |v: &[f64], offset: u64| -> Vec<TrialResult> {
            v.iter().enumerate().map(|(i, &r)| TrialResult {
                seed: offset + i as u64, allocator: AllocatorKind::Random, num_cellular: 4, num_d2d: 3,
                sum_rate: r, ue1_sinr_db: 0.0, revenue: 0.0, runtime_ms: 0.0,
            }).collect()
        };
        let a = mk(&xs[..n], 0);
        let b = mk(&ys[..n], 1_000);
        let ma = curve_from_trials(&a).unwrap()[0].mean_sum_rate;
        let mb = curve_from_trials(&b).unwrap()[0].mean_sum_rate;
        let pooled: Vec<TrialResult> = a.iter().chain(&b).cloned().collect();
        let mp = curve_from_trials(&pooled).unwrap()[0].mean_sum_rate;
        prop_assert!((mp - (ma + mb) / 2.0).abs() <= 1e-12 * (1.0 + mp));
    }
}

#[test]
fn symmetric_law_has_small_skew() {
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let normal = Normal::new(3.0, 2.0).unwrap();
    let v: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
    assert!(skewness(&v).unwrap().abs() < 0.1);
}

#[test]
fn curve_mean_matches_streaming_recomputation() {
    let cfg = ScenarioConfig {
        num_cellular: 4,
        num_d2d: 5,
        ..Default::default()
    };
    let res = compare_allocators(
        &cfg,
        &[AllocatorKind::Random],
        &RicaParams::default(),
        100,
        9,
    )
    .unwrap();
    let curve = aggregate_curve(&res, AllocatorKind::Random).unwrap();
    // Welford running mean, a different summation path.
    let mut mean = 0.0;
    for (k, t) in res.series[0].trials.iter().enumerate() {
        mean += (t.sum_rate - mean) / (k as f64 + 1.0);
    }
    assert_eq!(curve.len(), 1);
    assert!((curve[0].mean_sum_rate - mean).abs() <= 1e-12 * mean);
    let rates: Vec<f64> = res.series[0].trials.iter().map(|t| t.sum_rate).collect();
    assert_eq!(mean_and_std_err(&rates).1, curve[0].std_err);
    assert!(aggregate_curve(&res, AllocatorKind::Rica).is_err());
}

#[test]
fn sweep_trend_is_non_decreasing() {
    let cfg = ScenarioConfig::default();
    let res = sweep_d2d_count(
        &cfg,
        AllocatorKind::NewAuction,
        &RicaParams::default(),
        &[2, 4],
        50,
        1,
    )
    .unwrap();
    let curve = curve_from_trials(&res.series[0].trials).unwrap();
    let (two, four) = (curve[0], curve[1]);
    assert!(four.mean_sum_rate >= two.mean_sum_rate - 3.0 * four.std_err.max(two.std_err));
}

#[test]
fn auctions_beat_random_on_average() {
    let cfg = ScenarioConfig {
        num_cellular: 4,
        num_d2d: 8,
        ..Default::default()
    };
    let res = compare_allocators(
        &cfg,
        &[AllocatorKind::Random, AllocatorKind::NewAuction],
        &RicaParams::default(),
        100,
        1,
    )
    .unwrap();
    let mean = |i: usize| res.series[i].trials.iter().map(|t| t.sum_rate).sum::<f64>() / 100.0;
    assert!(mean(1) > mean(0));
}
