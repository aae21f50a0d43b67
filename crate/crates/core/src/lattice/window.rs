use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{build_honeycomb, crossing_frequency, transform_to_triangular, Family, NetworkGraph};
use crate::error::{Error, Result};
use crate::sampling::{derive_seed, Frequency};

/// How a doubled-edge honeycomb of biased links is turned into bonds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Convert each doubled bond on its own (open with `2p(2 - p)`).
    Naive,
    /// Relay through one sublattice first (triangular bonds open with `2p`).
    Transformed,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(Strategy::Naive),
            "transformed" | "transform" => Ok(Strategy::Transformed),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy `{other}`"
            ))),
        }
    }
}

/// Bond graph produced by `strategy` from a size-`size` doubled-edge honeycomb
/// whose links have bias `p`.
pub fn strategy_graph(strategy: Strategy, size: usize, p: f64) -> Result<NetworkGraph> {
    let (rows, cols) = Family::Honeycomb.dimensions(size);
    let hex = build_honeycomb(rows, cols, 2)?;
    match strategy {
        Strategy::Naive => hex.with_link_bias(p)?.resolve_naive(),
        Strategy::Transformed => transform_to_triangular(&hex, p),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub size: usize,
    pub naive: Frequency,
    pub transformed: Frequency,
    /// `transformed - naive` crossing frequency.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub p: f64,
    pub naive_bond_probability: f64,
    pub transformed_bond_probability: f64,
    pub trials: u64,
    pub rows: Vec<WindowRow>,
}

/// Crossing frequencies of both strategies on the same honeycomb patches.
pub fn window_comparison(p: f64, sizes: &[usize], trials: u64, seed: u64) -> Result<WindowReport> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one lattice size is required".into(),
        ));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    let mut bond_probs = (0.0, 0.0);
    for &size in sizes {
        let naive_graph = strategy_graph(Strategy::Naive, size, p)?;
        let transformed_graph = strategy_graph(Strategy::Transformed, size, p)?;
        bond_probs = (
            naive_graph.uniform_open_probability().unwrap_or(0.0),
            transformed_graph.uniform_open_probability().unwrap_or(0.0),
        );
        let naive = crossing_frequency(&naive_graph, trials, derive_seed(seed, 2 * size as u64))?;
        let transformed = crossing_frequency(
            &transformed_graph,
            trials,
            derive_seed(seed, 2 * size as u64 + 1),
        )?;
        rows.push(WindowRow {
            size,
            naive,
            transformed,
            gap: transformed.frequency - naive.frequency,
        });
    }
    Ok(WindowReport {
        p,
        naive_bond_probability: bond_probs.0,
        transformed_bond_probability: bond_probs.1,
        trials,
        rows,
    })
}
