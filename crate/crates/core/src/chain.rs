//! Secret bit distribution along a one-dimensional chain of biased links.
//!
//! Every intermediate node announces the XOR of its two link bits, so the far
//! end can recover the first link's bit. The endpoints then hold a biased bit
//! whose distribution depends on the announcements and run the optimal
//! conversion on it.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{trial_rng, Frequency};

/// Above this length binomial coefficients go through logarithms.
const DIRECT_BINOMIAL_LIMIT: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    n: u32,
    p: f64,
}

impl ChainSpec {
    /// `n` links, each equal to 1 with probability `p` in `[0, 1/2]`.
    pub fn new(n: u32, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyChain);
        }
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::ProbabilityOutOfRange {
                value: p,
                min: 0.0,
                max: 0.5,
            });
        }
        Ok(Self { n, p })
    }

    pub fn links(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Success probability of the XOR relay protocol followed by optimal
/// conversion:
///
/// `p_n = sum_a min(P(a), P(!a))`
///
/// over all link assignments `a`. Grouping assignments by the weight of the
/// lighter of `a` and its complement gives `O(n)` terms; for even `n` the
/// balanced class enters once.
pub fn exact_success_probability(spec: &ChainSpec) -> f64 {
    let (n, p) = (spec.n, spec.p);
    if p == 0.5 {
        return 1.0;
    }
    let q = 1.0 - p;
    let term = |k: u32| -> f64 {
        if n <= DIRECT_BINOMIAL_LIMIT {
            binomial(n, k) * p.powi((n - k) as i32) * q.powi(k as i32)
        } else {
            (ln_binomial(n, k) + (n - k) as f64 * p.ln() + k as f64 * q.ln()).exp()
        }
    };
    let mut total = 0.0;
    for k in (0..n).take_while(|k| 2 * k < n) {
        total += 2.0 * term(k);
    }
    if n % 2 == 0 {
        total += term(n / 2);
    }
    total.min(1.0)
}

/// `(2 sqrt(p (1 - p)))^n`, an upper bound on [`exact_success_probability`].
pub fn success_upper_bound(spec: &ChainSpec) -> f64 {
    (2.0 * (spec.p * (1.0 - spec.p)).sqrt()).powi(spec.n as i32)
}

/// `(2p)^n`: convert every link separately and relay only if all succeed.
pub fn naive_success_probability(spec: &ChainSpec) -> f64 {
    (2.0 * spec.p).powi(spec.n as i32)
}

/// Runs the relay protocol `trials` times on sampled link bits.
///
/// Trial `i` draws from its own stream of `seed`, so the result is the same
/// for any thread count.
pub fn simulate(spec: &ChainSpec, trials: u64, seed: u64) -> Result<Frequency> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(spec.n as usize),
            |bits, trial| run_trial(spec, seed, trial, bits) as u64,
        )
        .sum();
    Ok(Frequency::new(hits, trials))
}

fn run_trial(spec: &ChainSpec, seed: u64, trial: u64, bits: &mut Vec<bool>) -> bool {
    let mut rng = trial_rng(seed, trial);
    bits.clear();
    bits.extend((0..spec.n).map(|_| rng.random::<f64>() < spec.p));

    // announcements z_i = a_i xor a_{i+1}
    let announcements = bits.windows(2).map(|w| w[0] ^ w[1]);
    // the assignment consistent with z that starts at 0; the other one is its complement
    let mut current = false;
    let mut weight_from_zero = 0u32;
    for z in std::iter::once(false).chain(announcements) {
        current ^= z;
        weight_from_zero += current as u32;
    }
    let imbalance = spec.n.abs_diff(2 * weight_from_zero);
    let keep = conditional_success(spec.p, imbalance);
    rng.random::<f64>() < keep
}

/// `2 min(P0, P1) / (P0 + P1)` for two complementary assignments whose weights
/// differ by `imbalance`.
fn conditional_success(p: f64, imbalance: u32) -> f64 {
    if p == 0.5 {
        return 1.0;
    }
    let ratio = (p / (1.0 - p)).powi(imbalance as i32);
    2.0 * ratio / (1.0 + ratio)
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}
