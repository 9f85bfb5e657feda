//! D2D-to-resource allocation mechanisms evaluated against a shared
//! [`Instance`].

mod exhaustive;
mod new_auction;
mod random;
mod rica;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::allocation::Allocation;
use crate::error::{Error, Result};
use crate::netmodel::{
    build_gain_table, generate_topology, package_gain, sum_rate, GainTable, PowerProfile,
    ScenarioConfig, Topology,
};

pub use exhaustive::{allocate_exhaustive, EXHAUSTIVE_LIMIT};
pub use new_auction::allocate_new_auction;
pub use random::allocate_random;
pub use rica::{allocate_rica, rica_value};

/// One network drop: everything an allocator needs to score an allocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    /// Absent for hand-built channel tables.
    pub topology: Option<Topology>,
    pub gains: GainTable,
    pub powers: PowerProfile,
}

impl Instance {
    pub fn new(gains: GainTable, powers: PowerProfile) -> Self {
        Self {
            topology: None,
            gains,
            powers,
        }
    }

    /// Drops nodes and draws the channel from `(config, seed)`.
    pub fn generate(config: &ScenarioConfig, seed: u64) -> Result<Self> {
        let topology = generate_topology(config, seed)?;
        let gains = build_gain_table(&topology, config, seed)?;
        Ok(Self {
            topology: Some(topology),
            gains,
            powers: config.powers(),
        })
    }

    pub fn num_cellular(&self) -> usize {
        self.gains.num_cellular()
    }

    pub fn num_d2d(&self) -> usize {
        self.gains.num_d2d()
    }

    pub fn empty_allocation(&self) -> Allocation {
        Allocation::empty(self.num_d2d(), self.num_cellular())
    }

    pub fn sum_rate(&self, alloc: &Allocation) -> f64 {
        sum_rate(alloc, &self.gains, &self.powers)
    }

    pub fn marginal_gain(&self, pair: usize, resource: usize, alloc: &Allocation) -> Result<f64> {
        package_gain(&[pair], resource, alloc, &self.gains, &self.powers)
    }

    pub(crate) fn check_feasible(&self) -> Result<()> {
        if self.num_cellular() == 0 && self.num_d2d() > 0 {
            Err(Error::Infeasible {
                num_d2d: self.num_d2d(),
            })
        } else {
            Ok(())
        }
    }
}

/// Clock parameters shared by both auctions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicaParams {
    /// Opening clock price; `0` opens at the best single-pair value.
    pub price_start: f64,
    /// Clock decrement per round without a bid.
    pub price_step: f64,
    /// Largest package a resource may bid for in one round.
    pub package_cap: usize,
    /// Stop the sum-rate auction instead of placing a pair that lowers the
    /// sum rate. Leaves such pairs unassigned.
    pub skip_negative: bool,
}

impl Default for RicaParams {
    fn default() -> Self {
        Self {
            price_start: 0.0,
            price_step: 0.05,
            package_cap: 2,
            skip_negative: false,
        }
    }
}

impl RicaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.price_step.is_finite() && self.price_step > 0.0) {
            return Err(Error::Config {
                field: "price_step",
                constraint: "price_step > 0",
            });
        }
        if self.package_cap < 1 {
            return Err(Error::Config {
                field: "package_cap",
                constraint: "package_cap >= 1",
            });
        }
        if !(self.price_start.is_finite() && self.price_start >= 0.0) {
            return Err(Error::Config {
                field: "price_start",
                constraint: "price_start >= 0",
            });
        }
        Ok(())
    }

    /// Opening price: the configured value, or the largest single-pair value
    /// on the empty allocation (never below zero).
    pub fn resolve_price_start(&self, inst: &Instance) -> Result<f64> {
        if self.price_start > 0.0 {
            return Ok(self.price_start);
        }
        let empty = inst.empty_allocation();
        let mut best = 0.0f64;
        for d in 0..inst.num_d2d() {
            for c in 0..inst.num_cellular() {
                best = best.max(inst.marginal_gain(d, c, &empty)?);
            }
        }
        Ok(best)
    }

    /// Same clock with every price multiplied by `factor`.
    pub fn scaled(&self, inst: &Instance, factor: f64) -> Result<Self> {
        Ok(Self {
            price_start: self.resolve_price_start(inst)? * factor,
            price_step: self.price_step * factor,
            ..*self
        })
    }
}

/// A bidder's offer of `price` for one D2D link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bid {
    pub link: usize,
    pub price: f64,
    pub bidder: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundKind {
    /// A package was awarded at the current price.
    Assign,
    /// No acceptable bid; the clock moved down.
    Decrement,
    /// The clock hit zero with pairs left; one pair placed by marginal gain.
    Fallback,
}

/// One step of an auction trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub kind: RoundKind,
    pub price: f64,
    pub bids: Vec<Bid>,
    pub winner: Option<usize>,
    pub package: Vec<usize>,
    /// Sum-rate change caused by the award.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuctionOutcome {
    pub allocation: Allocation,
    pub rounds: Vec<Round>,
    pub revenue: f64,
    pub final_sum_rate: f64,
}

impl AuctionOutcome {
    /// Outcome of a mechanism that has no price trace.
    pub fn without_trace(inst: &Instance, allocation: Allocation) -> Self {
        let final_sum_rate = inst.sum_rate(&allocation);
        Self {
            allocation,
            rounds: Vec::new(),
            revenue: 0.0,
            final_sum_rate,
        }
    }

    pub fn prices(&self) -> impl Iterator<Item = f64> + '_ {
        self.rounds.iter().map(|r| r.price)
    }
}

/// Named allocation mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocatorKind {
    Random,
    Rica,
    NewAuction,
    Exhaustive,
}

impl AllocatorKind {
    pub const ALL: [AllocatorKind; 4] = [
        AllocatorKind::Random,
        AllocatorKind::Rica,
        AllocatorKind::NewAuction,
        AllocatorKind::Exhaustive,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AllocatorKind::Random => "random",
            AllocatorKind::Rica => "rica",
            AllocatorKind::NewAuction => "new-auction",
            AllocatorKind::Exhaustive => "exhaustive",
        }
    }

    /// Runs this mechanism. `seed` only affects [`AllocatorKind::Random`].
    pub fn run(&self, inst: &Instance, params: &RicaParams, seed: u64) -> Result<AuctionOutcome> {
        match self {
            AllocatorKind::Random => Ok(AuctionOutcome::without_trace(
                inst,
                allocate_random(inst, seed)?,
            )),
            AllocatorKind::Rica => allocate_rica(inst, params),
            AllocatorKind::NewAuction => allocate_new_auction(inst, params),
            AllocatorKind::Exhaustive => Ok(AuctionOutcome::without_trace(
                inst,
                allocate_exhaustive(inst)?,
            )),
        }
    }
}

impl fmt::Display for AllocatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AllocatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AllocatorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown allocator `{s}` (expected random, rica, new-auction or exhaustive)"
                ))
            })
    }
}

/// Clock price after `decrements` steps down from `start`, floored at zero.
pub(crate) fn clock_price(start: f64, step: f64, decrements: usize) -> f64 {
    let p = start - step * decrements as f64;
    // Snap rounding residue to the floor.
    if p <= step * 1e-9 {
        0.0
    } else {
        p
    }
}
