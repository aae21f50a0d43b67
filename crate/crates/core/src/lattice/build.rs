use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Boundary, Edge, EdgeWeight, LatticeKind, NetworkGraph, Node};
use crate::error::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Lattice families that can be built at a given linear size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Square,
    Triangular,
    /// Honeycomb with a single link per bond.
    Honeycomb,
}

impl Family {
    /// `(rows, cols)` of a patch `size` columns wide whose physical height
    /// matches its width.
    pub fn dimensions(self, size: usize) -> (usize, usize) {
        let width = size.saturating_sub(1) as f64;
        let rows = match self {
            Family::Square => size,
            // row spacing sqrt(3)/2
            Family::Triangular => (width * 2.0 / SQRT3).round() as usize + 1,
            // columns spaced sqrt(3)/2 apart, rows 3/2 apart
            Family::Honeycomb => (width / SQRT3).round() as usize + 1,
        };
        (rows.max(2), size)
    }

    pub fn build(self, size: usize) -> Result<NetworkGraph> {
        let (rows, cols) = self.dimensions(size);
        match self {
            Family::Square => build_square(rows, cols),
            Family::Triangular => build_triangular(rows, cols),
            Family::Honeycomb => build_honeycomb(rows, cols, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Square => "square",
            Family::Triangular => "triangular",
            Family::Honeycomb => "honeycomb",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "square" => Ok(Family::Square),
            "triangular" | "tri" => Ok(Family::Triangular),
            "honeycomb" | "hex" | "hexagonal" => Ok(Family::Honeycomb),
            other => Err(Error::InvalidArgument(format!(
                "unknown lattice family `{other}`"
            ))),
        }
    }
}

fn check_size(rows: usize, cols: usize) -> Result<()> {
    if rows < 2 || cols < 2 {
        return Err(Error::LatticeTooSmall { rows, cols });
    }
    Ok(())
}

fn grid_boundary(rows: usize, cols: usize) -> Boundary {
    let idx = |x: usize, y: usize| y * cols + x;
    Boundary {
        left: (0..rows).map(|y| idx(0, y)).collect(),
        right: (0..rows).map(|y| idx(cols - 1, y)).collect(),
        bottom: (0..cols).map(|x| idx(x, 0)).collect(),
        top: (0..cols).map(|x| idx(x, rows - 1)).collect(),
    }
}

fn edge(u: usize, v: usize, multiplicity: usize) -> Edge {
    Edge {
        u,
        v,
        multiplicity,
        weight: EdgeWeight::Unresolved,
    }
}

fn assemble(
    kind: LatticeKind,
    rows: usize,
    cols: usize,
    position: impl Fn(usize, usize) -> (f64, f64),
    sublattice: impl Fn(usize, usize) -> Option<u8>,
    edges: Vec<Edge>,
) -> NetworkGraph {
    let mut nodes = Vec::with_capacity(rows * cols);
    for y in 0..rows {
        for x in 0..cols {
            let (px, py) = position(x, y);
            nodes.push(Node {
                x: px,
                y: py,
                label: nodes.len(),
                sublattice: sublattice(x, y),
            });
        }
    }
    let mut boundary = grid_boundary(rows, cols);
    for set in [
        &mut boundary.left,
        &mut boundary.right,
        &mut boundary.top,
        &mut boundary.bottom,
    ] {
        set.sort_unstable();
    }
    NetworkGraph {
        kind,
        rows,
        cols,
        nodes,
        edges,
        boundary,
    }
}

/// Square grid: node `(x, y)` at index `y * cols + x`, bonds to the right and
/// upward neighbors.
pub fn build_square(rows: usize, cols: usize) -> Result<NetworkGraph> {
    check_size(rows, cols)?;
    let idx = |x: usize, y: usize| y * cols + x;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for y in 0..rows {
        for x in 0..cols {
            if x + 1 < cols {
                edges.push(edge(idx(x, y), idx(x + 1, y), 1));
            }
            if y + 1 < rows {
                edges.push(edge(idx(x, y), idx(x, y + 1), 1));
            }
        }
    }
    Ok(assemble(
        LatticeKind::Square,
        rows,
        cols,
        |x, y| (x as f64, y as f64),
        |_, _| None,
        edges,
    ))
}

/// Triangular lattice in offset rows: odd rows are shifted right by half a
/// spacing, rows are `sqrt(3)/2` apart. Interior nodes have six neighbors.
pub fn build_triangular(rows: usize, cols: usize) -> Result<NetworkGraph> {
    check_size(rows, cols)?;
    let idx = |x: usize, y: usize| y * cols + x;
    let mut edges = Vec::with_capacity(3 * rows * cols);
    for y in 0..rows {
        for x in 0..cols {
            if x + 1 < cols {
                edges.push(edge(idx(x, y), idx(x + 1, y), 1));
            }
            if y + 1 < rows {
                // the two nodes of the next row at horizontal offsets -1/2 and +1/2
                let (a, b) = if y % 2 == 0 {
                    (x.checked_sub(1), Some(x))
                } else {
                    (Some(x), (x + 1 < cols).then_some(x + 1))
                };
                for nx in [a, b].into_iter().flatten() {
                    edges.push(edge(idx(x, y), idx(nx, y + 1), 1));
                }
            }
        }
    }
    Ok(assemble(
        LatticeKind::Triangular,
        rows,
        cols,
        |x, y| (x as f64 + 0.5 * (y % 2) as f64, y as f64 * SQRT3 / 2.0),
        |_, _| None,
        edges,
    ))
}

/// Honeycomb in brick-wall form: every node bonds to its horizontal neighbors,
/// and `(x, y)` bonds upward when `x + y` is even. Each bond is a bundle of
/// `multiplicity` parallel links.
///
/// Positions are the true hexagonal geometry: columns `sqrt(3)/2` apart, rows
/// `3/2` apart, with nodes that bond upward raised by `1/4` and the others
/// lowered by `1/4`, so every bond has unit length. The patch has
/// `rows * cols` nodes and `rows * (cols - 1) + sum_y #{x : x + y even}` bonds
/// (the sum over the first `rows - 1` rows).
pub fn build_honeycomb(rows: usize, cols: usize, multiplicity: usize) -> Result<NetworkGraph> {
    check_size(rows, cols)?;
    if multiplicity == 0 {
        return Err(Error::InvalidArgument(
            "multiplicity must be at least 1".into(),
        ));
    }
    let idx = |x: usize, y: usize| y * cols + x;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for y in 0..rows {
        for x in 0..cols {
            if x + 1 < cols {
                edges.push(edge(idx(x, y), idx(x + 1, y), multiplicity));
            }
            if y + 1 < rows && (x + y) % 2 == 0 {
                edges.push(edge(idx(x, y), idx(x, y + 1), multiplicity));
            }
        }
    }
    Ok(assemble(
        LatticeKind::Honeycomb,
        rows,
        cols,
        |x, y| {
            let lift = if (x + y) % 2 == 0 { 0.25 } else { -0.25 };
            (x as f64 * SQRT3 / 2.0, 1.5 * y as f64 + lift)
        },
        |x, y| Some(((x + y) % 2) as u8),
        edges,
    ))
}
