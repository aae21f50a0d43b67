//! Pure classical secret correlations and the local transformations between them.
//!
//! A [`SecretState`] is the distribution of a symbol that two honest parties
//! share perfectly (`a == b`) while the eavesdropper's variable is independent of
//! it. Eve's marginal factors out of every operation here, so it is not stored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for every probability comparison in this module.
pub const TOLERANCE: f64 = 1e-12;

/// Largest link bias for which merging two parallel links by OR and then
/// converting is known to be the optimal sbit distillation.
pub const PARALLEL_OPTIMALITY_LIMIT: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecretState {
    probs: Vec<f64>,
}

impl SecretState {
    /// Validates `probs`: non-empty, finite, non-negative, summing to 1 within
    /// [`TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidState("empty vector".into()));
        }
        if let Some(bad) = probs.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidState(format!(
                "entry {bad} is not a probability"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidState(format!("entries sum to {total}")));
        }
        Ok(Self { probs })
    }

    /// For vectors computed from already valid states; rounding drift stays
    /// far below the tolerance.
    fn from_trusted(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= TOLERANCE);
        Self { probs }
    }

    /// A shared bit equal to 1 with probability `p1`.
    pub fn bit(p1: f64) -> Result<Self> {
        check_range(p1, 0.0, 1.0)?;
        Ok(Self::from_trusted(vec![1.0 - p1, p1]))
    }

    /// The perfect secret bit.
    pub fn sbit() -> Self {
        Self::uniform(2)
    }

    pub fn uniform(outcomes: usize) -> Self {
        assert!(outcomes > 0, "uniform state needs at least one outcome");
        Self::from_trusted(vec![1.0 / outcomes as f64; outcomes])
    }

    pub fn point_mass() -> Self {
        Self::from_trusted(vec![1.0])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Entries sorted in non-increasing order, zero-padded to `len`.
    fn sorted_padded(&self, len: usize) -> Vec<f64> {
        let mut v = self.probs.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v.resize(len.max(v.len()), 0.0);
        v
    }
}

/// A perfectly correlated bit equal to 1 with probability `p`, kept in the
/// canonical orientation `p <= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasedLink {
    p: f64,
}

impl BiasedLink {
    /// Accepts any `p` in `[0, 1]`; values above 1/2 are relabeled to `1 - p`.
    pub fn new(p: f64) -> Result<Self> {
        check_range(p, 0.0, 1.0)?;
        Ok(Self {
            p: if p > 0.5 { 1.0 - p } else { p },
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn state(&self) -> SecretState {
        SecretState::from_trusted(vec![1.0 - self.p, self.p])
    }

    pub fn sbit_probability(&self) -> f64 {
        sbit_probability(&self.state()).expect("two-outcome state")
    }
}

/// One outcome of a public announcement together with the conditional state of
/// the bit the endpoints end up sharing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorBranch {
    pub announcement: u8,
    pub weight: f64,
    pub posterior: SecretState,
}

/// Result of [`parallel_link_success`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelLinkSuccess {
    pub probability: f64,
    /// Set when `p` exceeds `1 - 1/sqrt(2)`, where the OR-merge value saturates
    /// at 1 and is no longer covered by the optimality argument.
    pub beyond_optimality_limit: bool,
}

fn check_range(value: f64, min: f64, max: f64) -> Result<()> {
    if value.is_finite() && (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { value, min, max })
    }
}

/// True iff `q` majorizes `p`: every descending prefix sum of `q` is at least
/// the matching prefix sum of `p`.
pub fn majorizes(q: &SecretState, p: &SecretState) -> bool {
    let len = q.len().max(p.len());
    let qs = q.sorted_padded(len);
    let ps = p.sorted_padded(len);
    let (mut sq, mut sp) = (0.0, 0.0);
    for (a, b) in qs.iter().zip(&ps) {
        sq += a;
        sp += b;
        if sq < sp - TOLERANCE {
            return false;
        }
    }
    true
}

/// Maximal probability of turning `from` into `to` by local operations and
/// public communication:
///
/// `min_k (1 - sum_{i<=k} from_i) / (1 - sum_{i<=k} to_i)`
///
/// with both vectors sorted in descending order. Indices whose denominator
/// vanishes impose no constraint and are skipped.
pub fn conversion_probability(from: &SecretState, to: &SecretState) -> f64 {
    if majorizes(to, from) {
        return 1.0;
    }
    let len = from.len().max(to.len());
    let fs = from.sorted_padded(len);
    let ts = to.sorted_padded(len);
    // Tails are summed from the small end so that e.g. (1-p, p) gives exactly p.
    let tails = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; v.len() + 1];
        for i in (0..v.len()).rev() {
            out[i] = out[i + 1] + v[i];
        }
        out
    };
    let from_tail = tails(&fs);
    let to_tail = tails(&ts);

    let mut best = 1.0_f64;
    for k in 1..len {
        let den = to_tail[k];
        if den <= TOLERANCE {
            continue;
        }
        best = best.min(from_tail[k] / den);
    }
    best.clamp(0.0, 1.0)
}

/// Probability of distilling one perfect secret bit from `from`.
pub fn sbit_probability(from: &SecretState) -> Result<f64> {
    if from.len() < 2 {
        return Err(Error::TooFewOutcomes(from.len()));
    }
    Ok(conversion_probability(from, &SecretState::sbit()))
}

/// Joint state of two independent correlations, indexed `i * b.len() + j`.
pub fn product(a: &SecretState, b: &SecretState) -> SecretState {
    let probs = a
        .probs
        .iter()
        .flat_map(|x| b.probs.iter().map(move |y| x * y))
        .collect();
    SecretState::from_trusted(probs)
}

/// Relabels symbol `i` as `labeling[i]`, summing the probabilities of merged
/// symbols. The output alphabet is `0..=max(labeling)`.
pub fn coarse_grain(s: &SecretState, labeling: &[usize]) -> Result<SecretState> {
    if labeling.len() != s.len() {
        return Err(Error::LabelingNotTotal {
            expected: s.len(),
            got: labeling.len(),
        });
    }
    let size = labeling.iter().max().map_or(0, |m| m + 1);
    let mut probs = vec![0.0; size];
    for (p, &label) in s.probs.iter().zip(labeling) {
        probs[label] += p;
    }
    Ok(SecretState::from_trusted(probs))
}

/// Success probability for two parallel links of bias `p` merged with OR and
/// then converted: `min(1, 2p(2 - p))`.
pub fn parallel_link_success(p: f64) -> Result<ParallelLinkSuccess> {
    check_range(p, 0.0, 0.5)?;
    Ok(ParallelLinkSuccess {
        probability: (2.0 * p * (2.0 - p)).min(1.0),
        beyond_optimality_limit: p > PARALLEL_OPTIMALITY_LIMIT,
    })
}

/// One-time-pad relay across a middle node holding `a` (shared with the left
/// endpoint) and `b` (shared with the right one). The middle node announces
/// `z = a XOR b`; the right endpoint flips its bit when `z = 1`.
///
/// Returns the branches `z = 0` and `z = 1`, in that order. Posteriors are over
/// the left endpoint's bit. A branch of weight 0 gets the uniform posterior
/// (the limit of the `z = 1` posterior as both biases go to 0).
pub fn otp_compose(a: BiasedLink, b: BiasedLink) -> [PosteriorBranch; 2] {
    let (p, q) = (a.p, b.p);
    let branch = |announcement: u8, w0: f64, w1: f64| {
        let weight = w0 + w1;
        let posterior = if weight > 0.0 {
            let p1 = w1 / weight;
            SecretState::from_trusted(vec![1.0 - p1, p1])
        } else {
            SecretState::sbit()
        };
        PosteriorBranch {
            announcement,
            weight,
            posterior,
        }
    };
    [
        branch(0, (1.0 - p) * (1.0 - q), p * q),
        branch(1, (1.0 - p) * q, p * (1.0 - q)),
    ]
}

/// Average sbit probability across the branches of [`otp_compose`].
pub fn otp_success(a: BiasedLink, b: BiasedLink) -> f64 {
    otp_compose(a, b)
        .iter()
        .map(|br| br.weight * sbit_probability(&br.posterior).expect("binary posterior"))
        .sum()
}
