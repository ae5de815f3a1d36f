//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 generator keyed by `(base_seed, lane)` and
//! positioned on the ChaCha stream `path_id`, so two paths never share
//! randomness and a path's stream does not depend on which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent randomness sources within one path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Lane {
    /// Event clock (renewal or Hawkes epochs).
    Events = 1,
    /// Tick-chain marks.
    Marks = 2,
    /// Brownian increments.
    Diffusion = 3,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stream for `path_id` on `lane`, derived from `base_seed`.
pub fn stream(base_seed: u64, path_id: u64, lane: Lane) -> ChaCha8Rng {
    let key = splitmix64(base_seed ^ splitmix64(lane as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(path_id);
    rng
}
