use serde::{Deserialize, Serialize};

use super::{CrossingCurve, Family};
use crate::error::{Error, Result};
use crate::sampling::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOptions {
    /// Initial bisection interval for the bond probability.
    pub interval: (f64, f64),
    /// Bisection stops once the bracket is narrower than this.
    pub bracket_width: f64,
    /// Half-width of the window around the estimate covered by the sweep table.
    pub sweep_span: f64,
    pub sweep_points: usize,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            interval: (0.0, 1.0),
            bracket_width: 1e-5,
            sweep_span: 0.05,
            sweep_points: 21,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub size: usize,
    pub p: f64,
    pub frequency: f64,
    pub standard_error: f64,
}

/// Where the crossing curves of two sizes intersect, if they do inside the
/// sweep window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeCrossing {
    pub smaller: usize,
    pub larger: usize,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub family: Family,
    /// Bond probability at which the largest patch crosses with frequency 1/2.
    pub p_c_hat: f64,
    pub half_width: f64,
    pub sizes: Vec<usize>,
    pub trials: u64,
    /// Frequency-1/2 point for every size, in `sizes` order.
    pub per_size: Vec<f64>,
    pub size_crossings: Vec<SizeCrossing>,
    pub sweep: Vec<SweepPoint>,
}

/// Finds the bond probability where `curve` crosses 1/2 by bisection.
/// Returns the final bracket.
fn bisect_half(
    curve: &CrossingCurve,
    (mut lo, mut hi): (f64, f64),
    width: f64,
) -> Result<(f64, f64)> {
    let (f_lo, f_hi) = (
        curve.frequency_at(lo).frequency,
        curve.frequency_at(hi).frequency,
    );
    if !(f_lo < 0.5 && f_hi >= 0.5) {
        return Err(Error::NotBracketing { lo, hi, f_lo, f_hi });
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if curve.frequency_at(mid).frequency >= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Intersection of two crossing curves inside `[lo, hi]`: the smaller patch
/// crosses more often below threshold and less often above it.
fn curve_intersection(
    small: &CrossingCurve,
    large: &CrossingCurve,
    mut lo: f64,
    mut hi: f64,
) -> Option<f64> {
    let diff = |p: f64| small.frequency_at(p).frequency - large.frequency_at(p).frequency;
    if !(diff(lo) > 0.0 && diff(hi) < 0.0) {
        return None;
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if diff(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Estimates the bond percolation threshold of `family` from left-right
/// crossing frequencies.
///
/// One coupled sweep of `trials` samples is drawn per size (see
/// [`CrossingCurve`]), so every bisection point is evaluated on `trials`
/// samples. The estimate is the frequency-1/2 point of the largest size; its
/// half-width adds half the final bracket to 1.96 times the binomial error at
/// 1/2 divided by the local slope of the crossing curve.
pub fn estimate_threshold(
    family: Family,
    sizes: &[usize],
    trials: u64,
    seed: u64,
    options: &ThresholdOptions,
) -> Result<ThresholdEstimate> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one lattice size is required".into(),
        ));
    }
    if trials < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();

    let mut curves = Vec::with_capacity(sizes.len());
    for &size in &sizes {
        let g = family.build(size)?;
        curves.push(CrossingCurve::sample(
            &g,
            trials,
            derive_seed(seed, size as u64),
        )?);
    }

    let mut per_size = Vec::with_capacity(sizes.len());
    let mut last_bracket = (0.0, 0.0);
    for curve in &curves {
        last_bracket = bisect_half(curve, options.interval, options.bracket_width)?;
        per_size.push(0.5 * (last_bracket.0 + last_bracket.1));
    }
    let p_c_hat = *per_size.last().expect("non-empty");
    let largest = curves.last().expect("non-empty");

    let delta = 0.01;
    let slope = (largest.frequency_at(p_c_hat + delta).frequency
        - largest.frequency_at(p_c_hat - delta).frequency)
        / (2.0 * delta);
    let statistical = if slope > 0.0 {
        1.96 * (0.25 / trials as f64).sqrt() / slope
    } else {
        0.5
    };
    let half_width = 0.5 * (last_bracket.1 - last_bracket.0) + statistical;

    let (lo, hi) = (
        (p_c_hat - options.sweep_span).max(0.0),
        (p_c_hat + options.sweep_span).min(1.0),
    );
    let mut sweep = Vec::new();
    for (&size, curve) in sizes.iter().zip(&curves) {
        for i in 0..options.sweep_points.max(2) {
            let p = lo + (hi - lo) * i as f64 / (options.sweep_points.max(2) - 1) as f64;
            let f = curve.frequency_at(p);
            sweep.push(SweepPoint {
                size,
                p,
                frequency: f.frequency,
                standard_error: f.standard_error,
            });
        }
    }
    let size_crossings = sizes
        .windows(2)
        .zip(curves.windows(2))
        .map(|(s, c)| SizeCrossing {
            smaller: s[0],
            larger: s[1],
            p: curve_intersection(&c[0], &c[1], lo, hi),
        })
        .collect();

    Ok(ThresholdEstimate {
        family,
        p_c_hat,
        half_width,
        sizes,
        trials,
        per_size,
        size_crossings,
        sweep,
    })
}
