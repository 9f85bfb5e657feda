use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use d2d_core::allocators::Instance;
use d2d_core::metrics::{mean_and_std_err, paired_differences};
use d2d_core::{
    curve_from_trials, run_experiment, sinr_pdf, skewness, AllocatorKind, Experiment,
    ExperimentResult, GainTable, Node, RicaParams, ScenarioConfig,
};
use serde::Serialize;

use crate::args::{CommonArgs, SinrArgs};
use crate::config::parse_config;
use crate::output::{write_atomic, Csv, RunManifest};

pub const THREADS_ENV: &str = "D2DSIM_THREADS";

const DEFAULT_TRIALS: usize = 100;
const DEFAULT_SINR_TRIALS: usize = 2000;

/// Parses `N`, `a..b` (inclusive) or a comma-separated mix of both.
pub fn parse_counts(flag: &str, text: &str) -> anyhow::Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        let bad =
            || anyhow::anyhow!("--{flag}: cannot parse `{item}` (expected N, a..b or a list)");
        if let Some((a, b)) = item.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                bail!("--{flag}: empty range `{item}`");
            }
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

pub fn parse_allocators(text: &str) -> anyhow::Result<Vec<AllocatorKind>> {
    text.split(',')
        .map(|s| s.parse::<AllocatorKind>().map_err(anyhow::Error::from))
        .collect()
}

fn threads_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => bail!("{THREADS_ENV} must be a positive integer, got `{v}`"),
        },
    }
}

/// Flags and scenario file merged into a runnable experiment.
pub struct Resolved {
    pub experiment: Experiment,
    pub out: PathBuf,
    pub dump_raw: bool,
}

pub fn resolve(
    args: &CommonArgs,
    default_allocators: &[AllocatorKind],
    default_trials: usize,
) -> anyhow::Result<Resolved> {
    let cellular = args
        .cellular
        .as_deref()
        .map(|s| parse_counts("cellular", s))
        .transpose()?;
    let d2d = args
        .d2d
        .as_deref()
        .map(|s| parse_counts("d2d", s))
        .transpose()?;

    let mut overrides = Vec::new();
    if let Some(seed) = args.seed {
        overrides.push(("seed", seed.to_string()));
    }
    if let Some(c) = cellular.as_ref().and_then(|v| v.first()) {
        overrides.push(("num_cellular", c.to_string()));
    }
    if let Some(d) = d2d.as_ref().and_then(|v| v.first()) {
        overrides.push(("num_d2d", d.to_string()));
    }
    let config = parse_config(args.config.as_deref(), &overrides)?;

    let allocators = match &args.allocators {
        Some(list) => parse_allocators(list)?,
        None => default_allocators.to_vec(),
    };
    let mut params = RicaParams::default();
    if let Some(step) = args.price_step {
        params.price_step = step;
    }
    if let Some(cap) = args.package_cap {
        params.package_cap = cap;
    }
    params.validate()?;

    let experiment = Experiment {
        cellular: cellular.unwrap_or_else(|| vec![config.num_cellular]),
        d2d: d2d.unwrap_or_else(|| vec![config.num_d2d]),
        trials: args.trials.unwrap_or(default_trials),
        base_seed: config.seed,
        params,
        threads: threads_from_env()?,
        allocators,
        config,
    };
    for &c in &experiment.cellular {
        for &d in &experiment.d2d {
            ScenarioConfig {
                num_cellular: c,
                num_d2d: d,
                ..experiment.config.clone()
            }
            .validate()?;
        }
    }
    Ok(Resolved {
        experiment,
        out: args.out.clone(),
        dump_raw: args.dump_raw,
    })
}

fn prepare_out(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn num(x: f64) -> String {
    x.to_string()
}

pub fn sweep_csv(result: &ExperimentResult) -> anyhow::Result<Csv> {
    let mut csv = Csv::new(&[
        "allocator",
        "num_cellular",
        "num_d2d",
        "mean_sum_rate",
        "std_err",
        "n_trials",
    ]);
    for series in &result.series {
        for p in curve_from_trials(&series.trials)? {
            csv.row(&[
                series.allocator.to_string(),
                p.num_cellular.to_string(),
                p.x.to_string(),
                num(p.mean_sum_rate),
                num(p.std_err),
                p.n_trials.to_string(),
            ]);
        }
    }
    Ok(csv)
}

/// Paired `a - b` differences for every allocator pair `a` listed before `b`.
pub fn compare_summary_csv(result: &ExperimentResult) -> anyhow::Result<Csv> {
    let mut csv = Csv::new(&[
        "num_cellular",
        "num_d2d",
        "allocator_a",
        "allocator_b",
        "mean_diff",
        "std_err",
        "n_trials",
    ]);
    for (i, a) in result.series.iter().enumerate() {
        for b in &result.series[i + 1..] {
            for p in paired_differences(&a.trials, &b.trials)? {
                csv.row(&[
                    p.num_cellular.to_string(),
                    p.num_d2d.to_string(),
                    a.allocator.to_string(),
                    b.allocator.to_string(),
                    num(p.mean_diff),
                    num(p.std_err),
                    p.n_trials.to_string(),
                ]);
            }
        }
    }
    Ok(csv)
}

fn raw_csv(result: &ExperimentResult) -> Csv {
    let mut csv = Csv::new(&[
        "allocator",
        "num_cellular",
        "num_d2d",
        "seed",
        "sum_rate",
        "ue1_sinr_db",
        "revenue",
    ]);
    for s in &result.series {
        for t in &s.trials {
            csv.row(&[
                t.allocator.to_string(),
                t.num_cellular.to_string(),
                t.num_d2d.to_string(),
                t.seed.to_string(),
                num(t.sum_rate),
                num(t.ue1_sinr_db),
                num(t.revenue),
            ]);
        }
    }
    csv
}

fn finish(
    dir: &Path,
    files: Vec<(&str, String)>,
    config: &ScenarioConfig,
    subcommand: &str,
    argv: &[String],
) -> anyhow::Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(files.len() + 1);
    for (name, body) in files {
        let path = dir.join(name);
        write_atomic(&path, &body)?;
        written.push(path);
    }
    let manifest = RunManifest {
        config,
        subcommand,
        command_line: argv,
        outputs: &written,
    };
    let path = dir.join("manifest.conf");
    write_atomic(&path, &manifest.render())?;
    written.push(path);
    Ok(written)
}

pub fn cmd_sweep(args: &CommonArgs, argv: &[String]) -> anyhow::Result<Vec<PathBuf>> {
    let r = resolve(args, &[AllocatorKind::NewAuction], DEFAULT_TRIALS)?;
    let result = run_experiment(&r.experiment)?;
    prepare_out(&r.out)?;
    let mut files = vec![("sweep.csv", sweep_csv(&result)?.as_str().to_owned())];
    if r.dump_raw {
        files.push(("trials_raw.csv", raw_csv(&result).as_str().to_owned()));
    }
    finish(&r.out, files, &r.experiment.config, "sweep", argv)
}

pub fn cmd_compare(args: &CommonArgs, argv: &[String]) -> anyhow::Result<Vec<PathBuf>> {
    let r = resolve(
        args,
        &[AllocatorKind::NewAuction, AllocatorKind::Rica],
        DEFAULT_TRIALS,
    )?;
    let result = run_experiment(&r.experiment)?;
    prepare_out(&r.out)?;
    let mut files = vec![
        ("sweep.csv", sweep_csv(&result)?.as_str().to_owned()),
        (
            "compare_summary.csv",
            compare_summary_csv(&result)?.as_str().to_owned(),
        ),
    ];
    if r.dump_raw {
        files.push(("trials_raw.csv", raw_csv(&result).as_str().to_owned()));
    }
    finish(&r.out, files, &r.experiment.config, "compare", argv)
}

pub fn cmd_sinr_stats(args: &SinrArgs, argv: &[String]) -> anyhow::Result<Vec<PathBuf>> {
    let r = resolve(
        &args.common,
        &[AllocatorKind::NewAuction],
        DEFAULT_SINR_TRIALS,
    )?;
    let exp = &r.experiment;
    if exp.allocators.len() != 1 || exp.cellular.len() != 1 || exp.d2d.len() != 1 {
        bail!("sinr-stats takes exactly one allocator, one --cellular and one --d2d value");
    }
    if exp.trials < 2 {
        bail!("sinr-stats needs at least 2 trials");
    }
    let result = run_experiment(exp)?;
    let samples: Vec<f64> = result.series[0]
        .trials
        .iter()
        .map(|t| t.ue1_sinr_db)
        .collect();

    let pdf = sinr_pdf(&samples, args.bins)?;
    let mut pdf_csv = Csv::new(&["bin_left_db", "bin_right_db", "density"]);
    for (edge, density) in pdf.bin_edges.windows(2).zip(&pdf.densities) {
        pdf_csv.row(&[num(edge[0]), num(edge[1]), num(*density)]);
    }

    let (mean, std_err) = mean_and_std_err(&samples);
    let std = std_err * (samples.len() as f64).sqrt();
    let mut summary = Csv::new(&["n", "mean_db", "std_db", "skewness"]);
    summary.row(&[
        samples.len().to_string(),
        num(mean),
        num(std),
        num(skewness(&samples)?),
    ]);

    prepare_out(&r.out)?;
    let mut files = vec![
        ("ue1_sinr_pdf.csv", pdf_csv.as_str().to_owned()),
        ("ue1_sinr_summary.csv", summary.as_str().to_owned()),
    ];
    if r.dump_raw {
        let mut raw = Csv::new(&["seed", "ue1_sinr_db"]);
        for t in &result.series[0].trials {
            raw.row(&[t.seed.to_string(), num(t.ue1_sinr_db)]);
        }
        files.push(("ue1_sinr_raw.csv", raw.as_str().to_owned()));
    }
    finish(&r.out, files, &exp.config, "sinr-stats", argv)
}

#[derive(Serialize)]
struct LinkGain {
    from: Node,
    to: Node,
    gain: f64,
}

#[derive(Serialize)]
struct TrialDump<'a> {
    config: &'a ScenarioConfig,
    seed: u64,
    params: &'a RicaParams,
    topology: &'a Option<d2d_core::Topology>,
    gains: Vec<LinkGain>,
    outcomes: Vec<NamedOutcome>,
}

#[derive(Serialize)]
struct NamedOutcome {
    allocator: AllocatorKind,
    #[serde(flatten)]
    outcome: d2d_core::AuctionOutcome,
}

fn link_gains(gains: &GainTable) -> Vec<LinkGain> {
    gains
        .links()
        .into_iter()
        .map(|(from, to)| LinkGain {
            from,
            to,
            gain: gains.get(from, to).expect("listed link is stored"),
        })
        .collect()
}

pub fn cmd_trial(args: &CommonArgs, argv: &[String]) -> anyhow::Result<Vec<PathBuf>> {
    let r = resolve(
        args,
        &[
            AllocatorKind::Random,
            AllocatorKind::Rica,
            AllocatorKind::NewAuction,
        ],
        1,
    )?;
    let exp = &r.experiment;
    if exp.cellular.len() != 1 || exp.d2d.len() != 1 {
        bail!("trial takes a single --cellular and --d2d value");
    }
    let seed = exp.base_seed;
    let inst = Instance::generate(&exp.config, seed)?;
    let outcomes = exp
        .allocators
        .iter()
        .map(|&kind| {
            Ok(NamedOutcome {
                allocator: kind,
                outcome: kind.run(&inst, &exp.params, seed)?,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let dump = TrialDump {
        config: &exp.config,
        seed,
        params: &exp.params,
        topology: &inst.topology,
        gains: link_gains(&inst.gains),
        outcomes,
    };
    let mut json = serde_json::to_string_pretty(&dump)?;
    json.push('\n');
    prepare_out(&r.out)?;
    finish(
        &r.out,
        vec![("trial.json", json)],
        &exp.config,
        "trial",
        argv,
    )
}
