//! Sum-rate auction.
//!
//! Resources still bid `{link, price}` at a common clock price, but the award
//! goes to the (link, resource) candidate with the largest increase in
//! system sum rate. Prices are recorded in the trace and never consulted by
//! winner determination. Every link is auctioned, even at a loss, unless
//! `skip_negative` is set.

use super::{clock_price, AuctionOutcome, Bid, Instance, RicaParams, Round, RoundKind};
use crate::error::Result;

pub fn allocate_new_auction(inst: &Instance, params: &RicaParams) -> Result<AuctionOutcome> {
    inst.check_feasible()?;
    params.validate()?;
    let start = params.resolve_price_start(inst)?;
    let mut alloc = inst.empty_allocation();
    let mut rounds = Vec::with_capacity(inst.num_d2d());
    let mut revenue = 0.0;

    for round in 0..inst.num_d2d() {
        let price = clock_price(start, params.price_step, round);
        let open: Vec<usize> = alloc.unassigned().collect();

        let mut bids = Vec::with_capacity(open.len() * inst.num_cellular());
        let mut best: Option<(usize, usize, f64)> = None;
        for &d in &open {
            for c in 0..inst.num_cellular() {
                bids.push(Bid {
                    link: d,
                    price,
                    bidder: c,
                });
                let gain = inst.marginal_gain(d, c, &alloc)?;
                if best.is_none_or(|(_, _, g)| gain > g) {
                    best = Some((d, c, gain));
                }
            }
        }

        let Some((pair, resource, gain)) = best else {
            break;
        };
        if params.skip_negative && gain < 0.0 {
            break;
        }
        alloc.assign(pair, resource)?;
        revenue += price;
        rounds.push(Round {
            kind: RoundKind::Assign,
            price,
            bids,
            winner: Some(resource),
            package: vec![pair],
            value: gain,
        });
    }

    let final_sum_rate = inst.sum_rate(&alloc);
    Ok(AuctionOutcome {
        allocation: alloc,
        rounds,
        revenue,
        final_sum_rate,
    })
}
