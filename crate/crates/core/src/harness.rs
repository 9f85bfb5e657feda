//! Seeded Monte Carlo experiments over network drops.
//!
//! Trial `k` of every grid point uses seed `base_seed + k`, and every
//! allocator in an experiment runs on the same drop for that seed, so
//! comparisons between allocators are paired.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::allocators::{AllocatorKind, AuctionOutcome, Instance, RicaParams};
use crate::error::{Error, Result};
use crate::netmodel::{linear_to_db, sinr_cellular, ScenarioConfig};

/// Result of one allocator on one drop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub seed: u64,
    pub allocator: AllocatorKind,
    pub num_cellular: usize,
    pub num_d2d: usize,
    pub sum_rate: f64,
    /// SINR of cellular UE 0 after allocation, in dB.
    pub ue1_sinr_db: f64,
    pub revenue: f64,
    pub runtime_ms: f64,
}

impl TrialResult {
    /// Equality ignoring the wall-clock runtime.
    pub fn same_outcome(&self, other: &TrialResult) -> bool {
        TrialResult {
            runtime_ms: 0.0,
            ..self.clone()
        } == TrialResult {
            runtime_ms: 0.0,
            ..other.clone()
        }
    }
}

/// Trials of one allocator, ordered by (C, D, trial index).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub allocator: AllocatorKind,
    pub trials: Vec<TrialResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ScenarioConfig,
    pub params: RicaParams,
    /// One series per requested allocator, in request order.
    pub series: Vec<Series>,
}

impl ExperimentResult {
    pub fn series_for(&self, kind: AllocatorKind) -> Option<&Series> {
        self.series.iter().find(|s| s.allocator == kind)
    }

    pub fn num_trials(&self) -> usize {
        self.series.iter().map(|s| s.trials.len()).sum()
    }
}

/// A grid of drops and the allocators to run on each.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub config: ScenarioConfig,
    pub allocators: Vec<AllocatorKind>,
    pub cellular: Vec<usize>,
    pub d2d: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub params: RicaParams,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Experiment {
    /// Single grid point taken from `config`.
    pub fn new(config: ScenarioConfig, allocators: Vec<AllocatorKind>, trials: usize) -> Self {
        Self {
            cellular: vec![config.num_cellular],
            d2d: vec![config.num_d2d],
            base_seed: config.seed,
            config,
            allocators,
            trials,
            params: RicaParams::default(),
            threads: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.allocators.is_empty() {
            return Err(Error::Usage("no allocators requested".into()));
        }
        if self.cellular.is_empty() || self.d2d.is_empty() {
            return Err(Error::Usage("empty sweep grid".into()));
        }
        if self.trials == 0 {
            return Err(Error::Usage("trials must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Usage("thread count must be at least 1".into()));
        }
        self.params.validate()
    }
}

fn trial_from_outcome(
    inst: &Instance,
    kind: AllocatorKind,
    seed: u64,
    outcome: &AuctionOutcome,
    runtime_ms: f64,
) -> Result<TrialResult> {
    let ue1 = sinr_cellular(0, &outcome.allocation, &inst.gains, &inst.powers)?;
    Ok(TrialResult {
        seed,
        allocator: kind,
        num_cellular: inst.num_cellular(),
        num_d2d: inst.num_d2d(),
        sum_rate: outcome.final_sum_rate,
        ue1_sinr_db: linear_to_db(ue1),
        revenue: outcome.revenue,
        runtime_ms,
    })
}

fn run_on_instance(
    inst: &Instance,
    kind: AllocatorKind,
    params: &RicaParams,
    seed: u64,
) -> Result<TrialResult> {
    if inst.num_cellular() == 0 {
        return Err(Error::Usage("trials need at least one cellular UE".into()));
    }
    let started = Instant::now();
    let outcome = kind.run(inst, params, seed)?;
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    trial_from_outcome(inst, kind, seed, &outcome, runtime_ms)
}

/// Draws the drop for `(config, seed)` and runs one allocator on it.
pub fn run_trial(
    config: &ScenarioConfig,
    kind: AllocatorKind,
    params: &RicaParams,
    seed: u64,
) -> Result<TrialResult> {
    let inst = Instance::generate(config, seed)?;
    run_on_instance(&inst, kind, params, seed)
}

/// Runs every allocator on every drop of the experiment grid.
pub fn run_experiment(exp: &Experiment) -> Result<ExperimentResult> {
    exp.validate()?;
    let mut tasks = Vec::with_capacity(exp.cellular.len() * exp.d2d.len() * exp.trials);
    for &c in &exp.cellular {
        for &d in &exp.d2d {
            let config = ScenarioConfig {
                num_cellular: c,
                num_d2d: d,
                ..exp.config.clone()
            };
            config.validate()?;
            for k in 0..exp.trials {
                tasks.push((config.clone(), exp.base_seed.wrapping_add(k as u64)));
            }
        }
    }

    let work = || -> Result<Vec<Vec<TrialResult>>> {
        tasks
            .par_iter()
            .map(|(config, seed)| {
                let inst = Instance::generate(config, *seed)?;
                exp.allocators
                    .iter()
                    .map(|&kind| run_on_instance(&inst, kind, &exp.params, *seed))
                    .collect()
            })
            .collect()
    };
    let per_drop = match exp.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let mut series: Vec<Series> = exp
        .allocators
        .iter()
        .map(|&allocator| Series {
            allocator,
            trials: Vec::with_capacity(per_drop.len()),
        })
        .collect();
    for drop_results in per_drop {
        for (s, trial) in series.iter_mut().zip(drop_results) {
            s.trials.push(trial);
        }
    }

    Ok(ExperimentResult {
        config: exp.config.clone(),
        params: exp.params,
        series,
    })
}

/// One allocator over a list of D2D counts at the configured cell size.
pub fn sweep_d2d_count(
    config: &ScenarioConfig,
    kind: AllocatorKind,
    params: &RicaParams,
    d_values: &[usize],
    trials: usize,
    base_seed: u64,
) -> Result<ExperimentResult> {
    if d_values.is_empty() {
        return Err(Error::Usage("d_values must not be empty".into()));
    }
    run_experiment(&Experiment {
        d2d: d_values.to_vec(),
        base_seed,
        params: *params,
        ..Experiment::new(config.clone(), vec![kind], trials)
    })
}

/// Several allocators on the same drops at the configured C and D.
pub fn compare_allocators(
    config: &ScenarioConfig,
    kinds: &[AllocatorKind],
    params: &RicaParams,
    trials: usize,
    base_seed: u64,
) -> Result<ExperimentResult> {
    run_experiment(&Experiment {
        base_seed,
        params: *params,
        ..Experiment::new(config.clone(), kinds.to_vec(), trials)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(c: usize, d: usize) -> ScenarioConfig {
        ScenarioConfig {
            num_cellular: c,
            num_d2d: d,
            ..Default::default()
        }
    }

    #[test]
    fn no_pairs_gives_the_cellular_baseline() {
        let config = cfg(4, 0);
        let inst = Instance::generate(&config, 17).unwrap();
        let baseline = inst.sum_rate(&inst.empty_allocation());
        for kind in AllocatorKind::ALL {
            let t = run_trial(&config, kind, &RicaParams::default(), 17).unwrap();
            assert_eq!(t.sum_rate, baseline, "{kind}");
            assert!(t.ue1_sinr_db.is_finite());
        }
    }

    #[test]
    fn trial_sum_rate_matches_recomputation() {
        let config = cfg(4, 6);
        let params = RicaParams::default();
        let t = run_trial(&config, AllocatorKind::NewAuction, &params, 5).unwrap();
        let inst = Instance::generate(&config, 5).unwrap();
        let out = crate::allocators::allocate_new_auction(&inst, &params).unwrap();
        let recomputed = crate::netmodel::sum_rate(&out.allocation, &inst.gains, &inst.powers);
        assert_eq!(t.sum_rate, recomputed);
        let ue1 = sinr_cellular(0, &out.allocation, &inst.gains, &inst.powers).unwrap();
        assert_eq!(t.ue1_sinr_db, 10.0 * ue1.log10());
    }

    #[test]
    fn exhaustive_guard_propagates() {
        let err = run_trial(
            &cfg(4, 12),
            AllocatorKind::Exhaustive,
            &RicaParams::default(),
            1,
        );
        assert!(matches!(err, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn sweep_counts_and_pairing() {
        let res = sweep_d2d_count(
            &cfg(4, 0),
            AllocatorKind::NewAuction,
            &RicaParams::default(),
            &[2, 4],
            5,
            100,
        )
        .unwrap();
        assert_eq!(res.num_trials(), 10);
        let seeds: Vec<u64> = res.series[0].trials.iter().map(|t| t.seed).collect();
        assert_eq!(
            seeds,
            vec![100, 101, 102, 103, 104, 100, 101, 102, 103, 104]
        );
        assert!(res.series[0].trials[..5].iter().all(|t| t.num_d2d == 2));
    }

    #[test]
    fn duplicate_allocators_produce_identical_series() {
        let res = compare_allocators(
            &cfg(3, 5),
            &[AllocatorKind::Random, AllocatorKind::Random],
            &RicaParams::default(),
            8,
            3,
        )
        .unwrap();
        for (a, b) in res.series[0].trials.iter().zip(&res.series[1].trials) {
            assert!(a.same_outcome(b));
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut exp = Experiment::new(
            cfg(4, 5),
            vec![
                AllocatorKind::Rica,
                AllocatorKind::NewAuction,
                AllocatorKind::Random,
            ],
            12,
        );
        exp.d2d = vec![1, 5];
        exp.cellular = vec![3, 4];
        let parallel = run_experiment(&exp).unwrap();
        exp.threads = Some(1);
        let serial = run_experiment(&exp).unwrap();
        for (p, s) in parallel.series.iter().zip(&serial.series) {
            assert_eq!(p.trials.len(), 48);
            for (a, b) in p.trials.iter().zip(&s.trials) {
                assert!(a.same_outcome(b));
            }
        }
    }

    #[test]
    fn rejects_bad_experiments() {
        let base = Experiment::new(cfg(4, 2), vec![AllocatorKind::Random], 1);
        let empty_alloc = Experiment {
            allocators: vec![],
            ..base.clone()
        };
        assert!(run_experiment(&empty_alloc).is_err());
        let no_trials = Experiment {
            trials: 0,
            ..base.clone()
        };
        assert!(run_experiment(&no_trials).is_err());
        let no_cells = Experiment {
            cellular: vec![0],
            ..base
        };
        assert!(matches!(
            run_experiment(&no_cells),
            Err(Error::Config { .. })
        ));
    }
}
