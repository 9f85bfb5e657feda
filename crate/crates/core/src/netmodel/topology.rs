use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::rng_stream;
use crate::error::Result;

const TOPOLOGY_STREAM: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Node positions of one network drop. The base station sits at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub bs_pos: Point,
    pub cellular_pos: Vec<Point>,
    pub d2d_tx_pos: Vec<Point>,
    pub d2d_rx_pos: Vec<Point>,
}

impl Topology {
    pub fn num_cellular(&self) -> usize {
        self.cellular_pos.len()
    }

    pub fn num_d2d(&self) -> usize {
        self.d2d_tx_pos.len()
    }
}

fn uniform_in_disc(rng: &mut ChaCha8Rng, center: Point, radius: f64) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Point::new(center.x + r * theta.cos(), center.y + r * theta.sin())
}

/// Drops cellular UEs and D2D transmitters uniformly in the cell, and each D2D
/// receiver uniformly within `d2d_max_dist_m` of its transmitter, rejecting
/// receivers that land outside the cell.
pub fn generate_topology(config: &ScenarioConfig, seed: u64) -> Result<Topology> {
    config.validate()?;
    let mut rng = rng_stream(seed, TOPOLOGY_STREAM);
    let radius = config.cell_radius_m;

    let cellular_pos = (0..config.num_cellular)
        .map(|_| uniform_in_disc(&mut rng, Point::ORIGIN, radius))
        .collect();

    let mut d2d_tx_pos = Vec::with_capacity(config.num_d2d);
    let mut d2d_rx_pos = Vec::with_capacity(config.num_d2d);
    for _ in 0..config.num_d2d {
        let tx = uniform_in_disc(&mut rng, Point::ORIGIN, radius);
        let rx = loop {
            let candidate = uniform_in_disc(&mut rng, tx, config.d2d_max_dist_m);
            if candidate.norm() <= radius {
                break candidate;
            }
        };
        d2d_tx_pos.push(tx);
        d2d_rx_pos.push(rx);
    }

    Ok(Topology {
        bs_pos: Point::ORIGIN,
        cellular_pos,
        d2d_tx_pos,
        d2d_rx_pos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_topology_has_only_the_base_station() {
        let cfg = ScenarioConfig {
            num_cellular: 0,
            num_d2d: 0,
            ..Default::default()
        };
        let topo = generate_topology(&cfg, 1).unwrap();
        assert_eq!(topo.bs_pos, Point::ORIGIN);
        assert!(topo.cellular_pos.is_empty());
        assert!(topo.d2d_tx_pos.is_empty());
        assert!(topo.d2d_rx_pos.is_empty());
    }

    #[test]
    fn positions_respect_cell_and_pair_bounds() {
        let cfg = ScenarioConfig {
            num_cellular: 4,
            num_d2d: 10,
            ..Default::default()
        };
        let topo = generate_topology(&cfg, 1).unwrap();
        assert_eq!(topo.cellular_pos.len(), 4);
        assert_eq!(topo.d2d_tx_pos.len(), 10);
        let all = topo
            .cellular_pos
            .iter()
            .chain(&topo.d2d_tx_pos)
            .chain(&topo.d2d_rx_pos);
        assert_eq!(all.clone().count(), 24);
        for p in all {
            assert!(p.norm() <= 500.0);
        }
        for (tx, rx) in topo.d2d_tx_pos.iter().zip(&topo.d2d_rx_pos) {
            assert!(tx.distance(rx) <= 20.0);
        }
    }

    #[test]
    fn receivers_near_the_edge_stay_inside() {
        // A tiny cell forces many rejections.
        let cfg = ScenarioConfig {
            cell_radius_m: 5.0,
            d2d_max_dist_m: 20.0,
            num_d2d: 50,
            ..Default::default()
        };
        let topo = generate_topology(&cfg, 3).unwrap();
        for (tx, rx) in topo.d2d_tx_pos.iter().zip(&topo.d2d_rx_pos) {
            assert!(rx.norm() <= 5.0);
            assert!(tx.distance(rx) <= 20.0);
        }
    }

    #[test]
    fn same_seed_same_topology() {
        let cfg = ScenarioConfig::default();
        assert_eq!(
            generate_topology(&cfg, 42).unwrap(),
            generate_topology(&cfg, 42).unwrap()
        );
        assert_ne!(
            generate_topology(&cfg, 42).unwrap(),
            generate_topology(&cfg, 43).unwrap()
        );
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = ScenarioConfig {
            cell_radius_m: 0.0,
            ..Default::default()
        };
        assert!(generate_topology(&cfg, 1).is_err());
    }
}
