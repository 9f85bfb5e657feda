//! Per-link SINR and Shannon rates for the downlink underlay model.
//!
//! A cellular UE on resource `c` hears the base station and every D2D
//! transmitter reusing `c`. A D2D receiver hears its own transmitter, the base
//! station and every other D2D transmitter on the same resource.

use super::channel::GainTable;
use super::config::PowerProfile;
use crate::allocation::Allocation;
use crate::error::{Error, Result};

fn check_shape(alloc: &Allocation, gains: &GainTable) {
    assert_eq!(
        alloc.num_d2d(),
        gains.num_d2d(),
        "allocation and gain table disagree on D"
    );
    assert!(
        alloc.num_resources() <= gains.num_cellular(),
        "allocation uses more resources than the gain table has cellular UEs"
    );
}

/// SINR of cellular UE `ue` given the D2D pairs `sharers` on its resource.
pub(crate) fn cellular_sinr_with(
    ue: usize,
    sharers: &[usize],
    gains: &GainTable,
    powers: &PowerProfile,
) -> f64 {
    let interference: f64 = sharers
        .iter()
        .map(|&tx| powers.d2d_power_w * gains.tx_ue(tx, ue))
        .sum();
    powers.bs_power_w * gains.bs_ue(ue) / (powers.noise_w + interference)
}

/// SINR of D2D pair `pair` given every pair on its resource (including itself).
pub(crate) fn d2d_sinr_with(
    pair: usize,
    sharers: &[usize],
    gains: &GainTable,
    powers: &PowerProfile,
) -> f64 {
    let co_channel: f64 = sharers
        .iter()
        .filter(|&&tx| tx != pair)
        .map(|&tx| powers.d2d_power_w * gains.tx_rx(tx, pair))
        .sum();
    let denom = powers.noise_w + powers.bs_power_w * gains.bs_rx(pair) + co_channel;
    powers.d2d_power_w * gains.tx_rx(pair, pair) / denom
}

/// Sum of Shannon rates on one resource: its cellular UE plus all sharers.
pub(crate) fn resource_rate(
    resource: usize,
    sharers: &[usize],
    gains: &GainTable,
    powers: &PowerProfile,
) -> f64 {
    let cellular = (1.0 + cellular_sinr_with(resource, sharers, gains, powers)).log2();
    sharers.iter().fold(cellular, |acc, &d| {
        acc + (1.0 + d2d_sinr_with(d, sharers, gains, powers)).log2()
    })
}

pub fn sinr_cellular(
    ue: usize,
    alloc: &Allocation,
    gains: &GainTable,
    powers: &PowerProfile,
) -> Result<f64> {
    check_shape(alloc, gains);
    if ue >= gains.num_cellular() {
        return Err(Error::Usage(format!(
            "cellular index {ue} out of range (C = {})",
            gains.num_cellular()
        )));
    }
    let sharers: Vec<usize> = alloc.pairs_on(ue).collect();
    Ok(cellular_sinr_with(ue, &sharers, gains, powers))
}

pub fn sinr_d2d(
    pair: usize,
    alloc: &Allocation,
    gains: &GainTable,
    powers: &PowerProfile,
) -> Result<f64> {
    check_shape(alloc, gains);
    let resource = alloc
        .resource_of(pair)
        .ok_or_else(|| Error::Usage(format!("D2D pair {pair} is not assigned")))?;
    let sharers: Vec<usize> = alloc.pairs_on(resource).collect();
    Ok(d2d_sinr_with(pair, &sharers, gains, powers))
}

/// System spectral efficiency in bit/s/Hz. Unassigned pairs contribute nothing.
pub fn sum_rate(alloc: &Allocation, gains: &GainTable, powers: &PowerProfile) -> f64 {
    check_shape(alloc, gains);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); gains.num_cellular()];
    for (d, r) in alloc.assignments().iter().enumerate() {
        if let Some(c) = r {
            groups[*c].push(d);
        }
    }
    groups
        .iter()
        .enumerate()
        .map(|(c, sharers)| resource_rate(c, sharers, gains, powers))
        .sum()
}

/// Change in system sum rate from putting unassigned `pair` on `resource`.
///
/// Only the target resource's links change, so the delta is evaluated on that
/// resource alone.
pub fn marginal_gain(
    pair: usize,
    resource: usize,
    alloc: &Allocation,
    gains: &GainTable,
    powers: &PowerProfile,
) -> Result<f64> {
    package_gain(&[pair], resource, alloc, gains, powers)
}

/// Change in system sum rate from putting every pair of `package` on
/// `resource`. The package must hold distinct unassigned pairs.
pub fn package_gain(
    package: &[usize],
    resource: usize,
    alloc: &Allocation,
    gains: &GainTable,
    powers: &PowerProfile,
) -> Result<f64> {
    check_shape(alloc, gains);
    if resource >= alloc.num_resources() {
        return Err(Error::Usage(format!(
            "resource index {resource} out of range (C = {})",
            alloc.num_resources()
        )));
    }
    for (i, &d) in package.iter().enumerate() {
        if d >= alloc.num_d2d() {
            return Err(Error::Usage(format!(
                "pair index {d} out of range (D = {})",
                alloc.num_d2d()
            )));
        }
        if let Some(c) = alloc.resource_of(d) {
            return Err(Error::Usage(format!(
                "D2D pair {d} is already assigned to resource {c}"
            )));
        }
        if package[..i].contains(&d) {
            return Err(Error::Usage(format!("pair {d} listed twice in package")));
        }
    }
    if package.is_empty() {
        return Ok(0.0);
    }
    let before: Vec<usize> = alloc.pairs_on(resource).collect();
    let mut after = before.clone();
    after.extend_from_slice(package);
    after.sort_unstable();
    Ok(resource_rate(resource, &after, gains, powers)
        - resource_rate(resource, &before, gains, powers))
}
