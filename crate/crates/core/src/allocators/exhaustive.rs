use super::Instance;
use crate::allocation::Allocation;
use crate::error::{Error, Result};
use crate::netmodel::resource_rate;

/// Largest search space `C^D` the exhaustive allocator will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Enumerates every complete allocation and returns one with the highest sum
/// rate. Among equal sum rates the lexicographically smallest resource vector
/// wins.
pub fn allocate_exhaustive(inst: &Instance) -> Result<Allocation> {
    inst.check_feasible()?;
    let (c, d) = (inst.num_cellular(), inst.num_d2d());
    let too_large = Error::TooLarge {
        num_cellular: c,
        num_d2d: d,
        limit: EXHAUSTIVE_LIMIT,
    };
    let exponent = u32::try_from(d).map_err(|_| too_large.clone())?;
    match (c as u64).checked_pow(exponent) {
        Some(space) if space <= EXHAUSTIVE_LIMIT => {}
        _ => return Err(too_large),
    }
    if d == 0 {
        return Ok(inst.empty_allocation());
    }

    let mut current = vec![0usize; d];
    let mut best = current.clone();
    let mut best_rate = f64::NEG_INFINITY;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); c];
    loop {
        for g in groups.iter_mut() {
            g.clear();
        }
        for (pair, &r) in current.iter().enumerate() {
            groups[r].push(pair);
        }
        let rate: f64 = groups
            .iter()
            .enumerate()
            .map(|(r, g)| resource_rate(r, g, &inst.gains, &inst.powers))
            .sum();
        if rate > best_rate {
            best_rate = rate;
            best.copy_from_slice(&current);
        }

        // Odometer step; the last pair varies fastest, so vectors are visited
        // in lexicographic order.
        let mut pos = d;
        loop {
            if pos == 0 {
                return Allocation::from_vec(&best, c);
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < c {
                break;
            }
            current[pos] = 0;
        }
    }
}
