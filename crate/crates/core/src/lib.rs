//! Spectrum allocation for device-to-device (D2D) pairs underlaying a
//! downlink cellular cell.
//!
//! The crate is organised bottom-up:
//!
//! - [`netmodel`] drops nodes, draws the channel and evaluates SINR and
//!   Shannon sum rate for a given [`Allocation`].
//! - [`allocators`] assigns D2D pairs to cellular resources: uniformly at
//!   random, by a reverse iterative combinatorial auction with a descending
//!   price clock, by a sum-rate-driven auction that ignores bid prices, and
//!   by exhaustive search.
//! - [`harness`] runs seeded, paired Monte Carlo experiments over many drops.
//! - [`metrics`] reduces trial results to curves, histograms and skewness.

pub mod allocation;
pub mod allocators;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod netmodel;

pub use allocation::Allocation;
pub use allocators::{
    allocate_exhaustive, allocate_new_auction, allocate_random, allocate_rica, rica_value,
    AllocatorKind, AuctionOutcome, Bid, Instance, RicaParams, Round, RoundKind,
};
pub use error::{Error, Result};
pub use harness::{
    compare_allocators, run_experiment, run_trial, sweep_d2d_count, Experiment, ExperimentResult,
    Series, TrialResult,
};
pub use metrics::{
    aggregate_curve, curve_from_trials, sinr_pdf, skewness, CurvePoint, PdfEstimate,
};
pub use netmodel::{
    build_gain_table, generate_topology, marginal_gain, sinr_cellular, sinr_d2d, sum_rate,
    GainTable, Node, Point, PowerProfile, ScenarioConfig, Topology,
};
