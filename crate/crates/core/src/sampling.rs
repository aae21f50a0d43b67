//! Seeded random streams and binomial frequency summaries shared by the
//! Monte Carlo routines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Independent stream for trial `index` under a master `seed`.
///
/// Each trial owns its own ChaCha stream, so results do not depend on how
/// trials are scheduled across threads.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mixes `tag` into `seed` (splitmix64 finalizer) so that independent
/// experiments under one master seed get unrelated streams.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Success count over independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    /// Binomial standard error `sqrt(f (1 - f) / trials)`.
    pub standard_error: f64,
}

impl Frequency {
    pub fn new(hits: u64, trials: u64) -> Self {
        assert!(trials > 0 && hits <= trials);
        let frequency = hits as f64 / trials as f64;
        Self {
            trials,
            hits,
            frequency,
            standard_error: binomial_standard_error(frequency, trials),
        }
    }

    /// Distance from `value` in units of the standard error. Zero error with an
    /// exact match gives 0, otherwise infinity.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = (self.frequency - value).abs();
        if self.standard_error > 0.0 {
            diff / self.standard_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

pub fn binomial_standard_error(frequency: f64, trials: u64) -> f64 {
    (frequency * (1.0 - frequency) / trials as f64).sqrt()
}
