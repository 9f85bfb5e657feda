use rand_distr::{Distribution, Exp1, Normal};
use serde::{Deserialize, Serialize};

use super::config::{db_to_linear, ScenarioConfig};
use super::rng_stream;
use super::topology::{Point, Topology};
use crate::error::{Error, Result};

const SHADOWING_STREAM: u64 = 1;

/// Radio endpoint in a single cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Node {
    BaseStation,
    Cellular(usize),
    D2dTx(usize),
    D2dRx(usize),
}

/// Linear power gains for every link the SINR formulas read.
///
/// Gains are reciprocal: a lookup for `(a, b)` and `(b, a)` returns the same
/// stored value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainTable {
    num_cellular: usize,
    num_d2d: usize,
    bs_to_ue: Vec<f64>,
    bs_to_rx: Vec<f64>,
    /// Row-major `[d2d tx][cellular UE]`.
    tx_to_ue: Vec<f64>,
    /// Row-major `[d2d tx][d2d rx]`.
    tx_to_rx: Vec<f64>,
}

impl GainTable {
    /// A table with every link set to `gain`.
    pub fn uniform(num_cellular: usize, num_d2d: usize, gain: f64) -> Result<Self> {
        check_gain(gain)?;
        Ok(Self {
            num_cellular,
            num_d2d,
            bs_to_ue: vec![gain; num_cellular],
            bs_to_rx: vec![gain; num_d2d],
            tx_to_ue: vec![gain; num_d2d * num_cellular],
            tx_to_rx: vec![gain; num_d2d * num_d2d],
        })
    }

    /// Builds a table by evaluating `f` once per stored link.
    pub fn from_fn(
        num_cellular: usize,
        num_d2d: usize,
        mut f: impl FnMut(Node, Node) -> f64,
    ) -> Result<Self> {
        let mut table = Self::uniform(num_cellular, num_d2d, 1.0)?;
        for (a, b) in table.links() {
            table.set(a, b, f(a, b))?;
        }
        Ok(table)
    }

    pub fn num_cellular(&self) -> usize {
        self.num_cellular
    }

    pub fn num_d2d(&self) -> usize {
        self.num_d2d
    }

    /// Every stored link, transmitter-side node first, in a fixed order.
    pub fn links(&self) -> Vec<(Node, Node)> {
        let (c, d) = (self.num_cellular, self.num_d2d);
        let mut out = Vec::with_capacity(c + d + d * c + d * d);
        out.extend((0..c).map(|i| (Node::BaseStation, Node::Cellular(i))));
        out.extend((0..d).map(|k| (Node::BaseStation, Node::D2dRx(k))));
        for tx in 0..d {
            out.extend((0..c).map(|i| (Node::D2dTx(tx), Node::Cellular(i))));
        }
        for tx in 0..d {
            out.extend((0..d).map(|rx| (Node::D2dTx(tx), Node::D2dRx(rx))));
        }
        out
    }

    fn slot(&self, a: Node, b: Node) -> Option<(usize, usize)> {
        use Node::*;
        let (c, d) = (self.num_cellular, self.num_d2d);
        let (a, b) = match (a, b) {
            (Cellular(_) | D2dRx(_), BaseStation | D2dTx(_)) => (b, a),
            _ => (a, b),
        };
        match (a, b) {
            (BaseStation, Cellular(i)) if i < c => Some((0, i)),
            (BaseStation, D2dRx(k)) if k < d => Some((1, k)),
            (D2dTx(t), Cellular(i)) if t < d && i < c => Some((2, t * c + i)),
            (D2dTx(t), D2dRx(r)) if t < d && r < d => Some((3, t * d + r)),
            _ => None,
        }
    }

    fn bank(&self, which: usize) -> &[f64] {
        match which {
            0 => &self.bs_to_ue,
            1 => &self.bs_to_rx,
            2 => &self.tx_to_ue,
            _ => &self.tx_to_rx,
        }
    }

    /// Gain of the link between `a` and `b`, in either direction.
    pub fn get(&self, a: Node, b: Node) -> Option<f64> {
        self.slot(a, b).map(|(bank, i)| self.bank(bank)[i])
    }

    pub fn set(&mut self, a: Node, b: Node, gain: f64) -> Result<()> {
        check_gain(gain)?;
        let (bank, i) = self
            .slot(a, b)
            .ok_or_else(|| Error::Usage(format!("no stored link between {a:?} and {b:?}")))?;
        let bank = match bank {
            0 => &mut self.bs_to_ue,
            1 => &mut self.bs_to_rx,
            2 => &mut self.tx_to_ue,
            _ => &mut self.tx_to_rx,
        };
        bank[i] = gain;
        Ok(())
    }

    #[inline]
    pub(crate) fn bs_ue(&self, ue: usize) -> f64 {
        self.bs_to_ue[ue]
    }

    #[inline]
    pub(crate) fn bs_rx(&self, rx: usize) -> f64 {
        self.bs_to_rx[rx]
    }

    #[inline]
    pub(crate) fn tx_ue(&self, tx: usize, ue: usize) -> f64 {
        self.tx_to_ue[tx * self.num_cellular + ue]
    }

    #[inline]
    pub(crate) fn tx_rx(&self, tx: usize, rx: usize) -> f64 {
        self.tx_to_rx[tx * self.num_d2d + rx]
    }
}

fn check_gain(gain: f64) -> Result<()> {
    if gain.is_finite() && gain > 0.0 {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "gain must be finite and positive, got {gain}"
        )))
    }
}

/// Distance-dependent path gain without shadowing or fading.
pub fn path_gain(distance_m: f64, config: &ScenarioConfig) -> f64 {
    let d = distance_m.max(config.min_dist_m);
    db_to_linear(config.pathloss_const_db) * d.powf(-config.pathloss_exp)
}

fn position(topology: &Topology, node: Node) -> Point {
    match node {
        Node::BaseStation => topology.bs_pos,
        Node::Cellular(i) => topology.cellular_pos[i],
        Node::D2dTx(k) => topology.d2d_tx_pos[k],
        Node::D2dRx(k) => topology.d2d_rx_pos[k],
    }
}

/// Draws the channel for one drop: log-distance path loss, one log-normal
/// shadowing term per link and optional Rayleigh power fading.
pub fn build_gain_table(
    topology: &Topology,
    config: &ScenarioConfig,
    seed: u64,
) -> Result<GainTable> {
    config.validate()?;
    let mut rng = rng_stream(seed, SHADOWING_STREAM);
    let shadowing = Normal::new(0.0, config.shadowing_sigma_db).map_err(|_| Error::Config {
        field: "shadowing_sigma_db",
        constraint: "shadowing_sigma_db >= 0",
    })?;

    let mut table = GainTable::uniform(topology.num_cellular(), topology.num_d2d(), 1.0)?;
    for (a, b) in table.links() {
        let d = position(topology, a).distance(&position(topology, b));
        let s_db: f64 = shadowing.sample(&mut rng);
        let mut g = path_gain(d, config) * db_to_linear(s_db);
        if config.fading_enabled {
            let h: f64 = Exp1.sample(&mut rng);
            g *= h;
        }
        // Keep extreme draws representable.
        let g = g.clamp(f64::MIN_POSITIVE, f64::MAX);
        table.set(a, b, g)?;
    }
    Ok(table)
}
