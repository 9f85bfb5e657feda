//! Network drops, channel gains and link-level rates.

mod channel;
mod config;
mod link;
mod topology;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use channel::{build_gain_table, path_gain, GainTable, Node};
pub use config::{db_to_linear, dbm_to_watts, linear_to_db, PowerProfile, ScenarioConfig};
pub use link::{marginal_gain, package_gain, sinr_cellular, sinr_d2d, sum_rate};
pub use topology::{generate_topology, Point, Topology};

pub(crate) use link::resource_rate;

/// Independent random stream `stream` derived from a trial seed. Topology,
/// shadowing and random allocation each draw from their own stream so that
/// changing one consumer never shifts another.
pub(crate) fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
