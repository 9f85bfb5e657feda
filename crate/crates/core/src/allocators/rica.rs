//! Reverse iterative combinatorial auction (R-ICA).
//!
//! Cellular resources are the bidders and packages of D2D pairs are the
//! goods. A single clock price per pair descends from its opening value.
//! In each round every resource names the package that maximises its utility
//! `value - price * |package|`; the highest non-negative utility wins and the
//! clock stays put. When nobody bids the clock steps down. Once the clock is
//! at zero and no package has a non-negative value, the leftover pairs are
//! placed one by one on their best resource.

use super::{clock_price, AuctionOutcome, Bid, Instance, RicaParams, Round, RoundKind};
use crate::allocation::Allocation;
use crate::error::Result;
use crate::netmodel::package_gain;

/// Value to `resource` of taking every pair in `package`: the resulting
/// change in system sum rate, in rate units.
pub fn rica_value(
    resource: usize,
    package: &[usize],
    alloc: &Allocation,
    inst: &Instance,
) -> Result<f64> {
    package_gain(package, resource, alloc, &inst.gains, &inst.powers)
}

/// Every package of at most `cap` pairs from `pool` (ascending), in
/// lexicographic order.
fn packages(pool: &[usize], cap: usize) -> Vec<Vec<usize>> {
    fn extend(pool: &[usize], cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for (i, &d) in pool.iter().enumerate() {
            prefix.push(d);
            out.push(prefix.clone());
            if prefix.len() < cap {
                extend(&pool[i + 1..], cap, prefix, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(pool, cap, &mut Vec::new(), &mut out);
    out
}

struct Offer {
    resource: usize,
    package: Vec<usize>,
    value: f64,
    utility: f64,
}

/// Per resource, each candidate package with its value.
type ValueTable = Vec<Vec<(Vec<usize>, f64)>>;

/// Values of every package for every resource on the current allocation.
fn value_table(inst: &Instance, alloc: &Allocation, cap: usize) -> Result<ValueTable> {
    let pool: Vec<usize> = alloc.unassigned().collect();
    let pkgs = packages(&pool, cap);
    (0..inst.num_cellular())
        .map(|c| {
            pkgs.iter()
                .map(|p| Ok((p.clone(), rica_value(c, p, alloc, inst)?)))
                .collect()
        })
        .collect()
}

/// Each resource's utility-maximising package at `price`, if its utility is
/// non-negative. Ties keep the lexicographically smallest package.
fn offers(table: &[Vec<(Vec<usize>, f64)>], price: f64) -> Vec<Offer> {
    table
        .iter()
        .enumerate()
        .filter_map(|(resource, options)| {
            let mut best: Option<(&Vec<usize>, f64, f64)> = None;
            for (pkg, value) in options {
                let utility = value - price * pkg.len() as f64;
                if best.is_none_or(|(_, _, u)| utility > u) {
                    best = Some((pkg, *value, utility));
                }
            }
            best.filter(|(_, _, u)| *u >= 0.0)
                .map(|(pkg, value, utility)| Offer {
                    resource,
                    package: pkg.clone(),
                    value,
                    utility,
                })
        })
        .collect()
}

pub fn allocate_rica(inst: &Instance, params: &RicaParams) -> Result<AuctionOutcome> {
    inst.check_feasible()?;
    params.validate()?;
    let start = params.resolve_price_start(inst)?;
    let mut alloc = inst.empty_allocation();
    let mut rounds = Vec::new();
    let mut revenue = 0.0;
    let mut decrements = 0usize;
    let mut table = value_table(inst, &alloc, params.package_cap)?;

    while !alloc.is_complete() {
        let price = clock_price(start, params.price_step, decrements);
        let offers = offers(&table, price);

        if !offers.is_empty() {
            let mut win = &offers[0];
            for o in &offers[1..] {
                if o.utility > win.utility {
                    win = o;
                }
            }
            for &d in &win.package {
                alloc.assign(d, win.resource)?;
            }
            revenue += price * win.package.len() as f64;
            let bids = offers
                .iter()
                .flat_map(|o| {
                    o.package.iter().map(move |&link| Bid {
                        link,
                        price,
                        bidder: o.resource,
                    })
                })
                .collect();
            rounds.push(Round {
                kind: RoundKind::Assign,
                price,
                bids,
                winner: Some(win.resource),
                package: win.package.clone(),
                value: win.value,
            });
            table = value_table(inst, &alloc, params.package_cap)?;
        } else if price > 0.0 {
            rounds.push(Round {
                kind: RoundKind::Decrement,
                price,
                bids: Vec::new(),
                winner: None,
                package: Vec::new(),
                value: 0.0,
            });
            decrements += 1;
        } else {
            let leftover: Vec<usize> = alloc.unassigned().collect();
            for d in leftover {
                let mut best = (0, inst.marginal_gain(d, 0, &alloc)?);
                for c in 1..inst.num_cellular() {
                    let g = inst.marginal_gain(d, c, &alloc)?;
                    if g > best.1 {
                        best = (c, g);
                    }
                }
                alloc.assign(d, best.0)?;
                rounds.push(Round {
                    kind: RoundKind::Fallback,
                    price: 0.0,
                    bids: Vec::new(),
                    winner: Some(best.0),
                    package: vec![d],
                    value: best.1,
                });
            }
        }
    }

    let final_sum_rate = inst.sum_rate(&alloc);
    Ok(AuctionOutcome {
        allocation: alloc,
        rounds,
        revenue,
        final_sum_rate,
    })
}
