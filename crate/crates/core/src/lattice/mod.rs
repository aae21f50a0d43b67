//! Finite lattices of secret-key links and bond percolation on them.
//!
//! Builders produce rectangular patches with open boundaries. Node positions
//! are physical coordinates (unit bond length) so that a size `L` patch of any
//! family covers roughly an `L x L` square; left-to-right crossing is the
//! percolation criterion.

mod build;
mod export;
mod percolation;
mod threshold;
mod transform;
mod union_find;
mod window;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::secret_state::parallel_link_success;

pub use build::{build_honeycomb, build_square, build_triangular, Family};
pub use export::{read_graph_text, write_graph_text, GraphText, TextEdge, TextNode};
pub use percolation::{
    connection_probability, crossing_frequency, crossing_probability, sample_clusters,
    ClusterStats, CrossingCurve,
};
pub use threshold::{
    estimate_threshold, SizeCrossing, SweepPoint, ThresholdEstimate, ThresholdOptions,
};
pub use transform::{check_triangular_structure, transform_to_triangular};
pub use union_find::DisjointSet;
pub use window::{strategy_graph, window_comparison, Strategy, WindowReport, WindowRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Square,
    Triangular,
    Honeycomb,
    /// Triangular lattice obtained from a doubled-edge honeycomb by one-time-pad
    /// relays on one sublattice.
    TransformedTriangular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub x: f64,
    pub y: f64,
    /// Index of this node in the lattice it was built from; equals its own index
    /// for freshly built lattices.
    pub label: usize,
    /// Bipartition class for honeycomb nodes.
    pub sublattice: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum EdgeWeight {
    Unresolved,
    /// Every link in the bundle is a biased secret bit with this `p`.
    LinkBias(f64),
    /// Probability the bundle ends up as an open bond.
    Open(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub multiplicity: usize,
    pub weight: EdgeWeight,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkGraph {
    pub kind: LatticeKind,
    pub rows: usize,
    pub cols: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub boundary: Boundary,
}

impl NetworkGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted, deduplicated neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    /// Boundary sides a node belongs to, in left/right/top/bottom order.
    pub fn tags(&self, node: usize) -> Vec<&'static str> {
        let b = &self.boundary;
        [
            ("left", &b.left),
            ("right", &b.right),
            ("top", &b.top),
            ("bottom", &b.bottom),
        ]
        .into_iter()
        .filter(|(_, set)| set.binary_search(&node).is_ok())
        .map(|(name, _)| name)
        .collect()
    }

    /// Marks every bundle as made of links with bias `p`.
    pub fn with_link_bias(mut self, p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::ProbabilityOutOfRange {
                value: p,
                min: 0.0,
                max: 0.5,
            });
        }
        for e in &mut self.edges {
            e.weight = EdgeWeight::LinkBias(p);
        }
        Ok(self)
    }

    /// Gives every bond the same open probability.
    pub fn with_open_probability(mut self, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::ProbabilityOutOfRange {
                value: q,
                min: 0.0,
                max: 1.0,
            });
        }
        for e in &mut self.edges {
            e.weight = EdgeWeight::Open(q);
        }
        Ok(self)
    }

    /// Replaces link biases by the probability that converting each bundle on
    /// its own yields a secret bit.
    pub fn resolve_naive(mut self) -> Result<Self> {
        for e in &mut self.edges {
            if let EdgeWeight::LinkBias(p) = e.weight {
                e.weight = EdgeWeight::Open(naive_edge_probability(p, e.multiplicity)?);
            }
        }
        Ok(self)
    }

    pub fn open_probabilities(&self) -> Result<Vec<f64>> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| match e.weight {
                EdgeWeight::Open(q) => Ok(q),
                _ => Err(Error::UnresolvedEdge(i)),
            })
            .collect()
    }

    /// The common open probability when all bonds share one.
    pub fn uniform_open_probability(&self) -> Option<f64> {
        let mut probs = self.edges.iter().map(|e| match e.weight {
            EdgeWeight::Open(q) => Some(q),
            _ => None,
        });
        let first = probs.next()??;
        probs.all(|q| q == Some(first)).then_some(first)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::UnknownNode(e.u.max(e.v)));
            }
            if e.u == e.v {
                return Err(Error::InvalidArgument(format!("edge {i} is a self-loop")));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidArgument(format!(
                    "edge {i} has multiplicity 0"
                )));
            }
            let q = match e.weight {
                EdgeWeight::LinkBias(p) | EdgeWeight::Open(p) => p,
                EdgeWeight::Unresolved => 0.0,
            };
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::ProbabilityOutOfRange {
                    value: q,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        Ok(())
    }
}

/// Open probability of a bundle of `multiplicity` links of bias `p` when each
/// bundle is converted on its own: `2p` for one link, `min(1, 2p(2 - p))` for
/// two parallel links merged by OR.
pub fn naive_edge_probability(p: f64, multiplicity: usize) -> Result<f64> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::ProbabilityOutOfRange {
            value: p,
            min: 0.0,
            max: 0.5,
        });
    }
    match multiplicity {
        1 => Ok(2.0 * p),
        2 => Ok(parallel_link_success(p)?.probability),
        m => Err(Error::UnsupportedMultiplicity(m)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_edge_examples() {
        let q = naive_edge_probability(0.1792, 2).unwrap();
        assert!((q - 2.0 * 0.1792 * (2.0 - 0.1792)).abs() < 1e-15);
        assert!((q - 0.652_574_72).abs() < 1e-9);
        // straddles the honeycomb threshold
        assert!(naive_edge_probability(0.1791, 2).unwrap() < 0.6527);
        assert!(naive_edge_probability(0.1793, 2).unwrap() > 0.6527);
        assert_eq!(naive_edge_probability(0.25, 1).unwrap(), 0.5);
        assert_eq!(naive_edge_probability(0.0, 1).unwrap(), 0.0);
        assert_eq!(naive_edge_probability(0.0, 2).unwrap(), 0.0);
        assert_eq!(
            naive_edge_probability(0.1, 3),
            Err(Error::UnsupportedMultiplicity(3))
        );
        assert!(naive_edge_probability(0.7, 1).is_err());
    }

    #[test]
    fn weights_resolve() {
        let g = build_honeycomb(4, 4, 2).unwrap();
        assert!(matches!(
            g.open_probabilities(),
            Err(Error::UnresolvedEdge(0))
        ));
        let g = g.with_link_bias(0.25).unwrap().resolve_naive().unwrap();
        assert_eq!(g.uniform_open_probability(), Some(0.875));
        assert!(g.clone().with_open_probability(1.5).is_err());
        assert!(build_square(3, 3).unwrap().with_link_bias(0.7).is_err());
        g.validate().unwrap();
    }

    #[test]
    fn tags_follow_boundary_sets() {
        let g = build_square(3, 3).unwrap();
        assert_eq!(g.tags(0), vec!["left", "bottom"]);
        assert_eq!(g.tags(4), Vec::<&str>::new());
        assert_eq!(g.tags(8), vec!["right", "top"]);
    }
}
