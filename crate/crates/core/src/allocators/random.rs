use rand::Rng;

use super::Instance;
use crate::allocation::Allocation;
use crate::error::Result;
use crate::netmodel::rng_stream;

const RANDOM_ALLOCATION_STREAM: u64 = 2;

/// Places every pair on a uniformly drawn resource, independently per pair.
pub fn allocate_random(inst: &Instance, seed: u64) -> Result<Allocation> {
    inst.check_feasible()?;
    let mut rng = rng_stream(seed, RANDOM_ALLOCATION_STREAM);
    let mut alloc = inst.empty_allocation();
    for d in 0..inst.num_d2d() {
        alloc.assign(d, rng.random_range(0..inst.num_cellular()))?;
    }
    Ok(alloc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocators::test_support::random_instance;
    use crate::netmodel::{GainTable, PowerProfile};

    #[test]
    fn no_pairs_gives_empty_allocation() {
        let inst = random_instance(4, 0, 1);
        let a = allocate_random(&inst, 3).unwrap();
        assert_eq!(a.num_d2d(), 0);
        assert!(a.is_complete());
    }

    #[test]
    fn assigns_every_pair_in_range() {
        let inst = random_instance(3, 6, 1);
        let a = allocate_random(&inst, 99).unwrap();
        assert!(a.is_complete());
        assert!((0..6).all(|d| a.resource_of(d).unwrap() < 3));
        assert_eq!(a, allocate_random(&inst, 99).unwrap());
    }

    #[test]
    fn resources_are_equally_likely() {
        let inst = Instance::new(
            GainTable::uniform(4, 1, 1e-9).unwrap(),
            PowerProfile::new(1.0, 0.1, 1e-13).unwrap(),
        );
        let n = 10_000;
        let mut counts = [0usize; 4];
        for seed in 0..n {
            counts[allocate_random(&inst, seed)
                .unwrap()
                .resource_of(0)
                .unwrap()] += 1;
        }
        for c in counts {
            let freq = c as f64 / n as f64;
            assert!((freq - 0.25).abs() <= 0.02, "{counts:?}");
        }
        // Pearson chi-square with 3 degrees of freedom; 16.27 is the 0.1% critical value.
        let expected = n as f64 / 4.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }
}
