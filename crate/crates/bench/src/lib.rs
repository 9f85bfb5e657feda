//! Shared fixtures for the allocator benchmarks.

use d2d_core::allocators::Instance;
use d2d_core::ScenarioConfig;

/// A default-parameter drop with `num_cellular` UEs and `num_d2d` pairs.
pub fn drop_with(num_cellular: usize, num_d2d: usize, seed: u64) -> Instance {
    let config = ScenarioConfig {
        num_cellular,
        num_d2d,
        ..Default::default()
    };
    Instance::generate(&config, seed).expect("default config is valid")
}
