use super::{Boundary, Edge, EdgeWeight, LatticeKind, NetworkGraph, Node};
use crate::error::{Error, Result};
use crate::secret_state::{otp_success, BiasedLink};

/// Rewrites a doubled-edge honeycomb into a triangular lattice.
///
/// Every node of one sublattice acts as a relay: for each pair of its
/// neighbors it takes one link from each of the two bundles and runs a
/// one-time-pad relay over them, joining the two neighbors by a two-link chain
/// that yields a secret bit with probability `2p`. Three neighbors give three
/// pairs, which uses both links of every bundle exactly once. Relay nodes are
/// then dropped and the remaining sublattice forms a triangular lattice.
///
/// The relay sublattice is the one whose removal keeps more boundary-tagged
/// nodes; on a tie the sublattice of node 0 is kept. A relay node on the edge
/// of the patch with only two neighbors creates one bond and leaves one link
/// of each bundle unused; with a single neighbor it creates none.
pub fn transform_to_triangular(hex: &NetworkGraph, p: f64) -> Result<NetworkGraph> {
    if hex.kind != LatticeKind::Honeycomb {
        return Err(Error::WrongLatticeFamily(format!(
            "got a {:?} lattice",
            hex.kind
        )));
    }
    if let Some(e) = hex.edges.iter().find(|e| e.multiplicity != 2) {
        return Err(Error::WrongLatticeFamily(format!(
            "bond {}-{} has multiplicity {}",
            e.u, e.v, e.multiplicity
        )));
    }
    let link = BiasedLink::new(p)?;
    if p > 0.5 {
        return Err(Error::ProbabilityOutOfRange {
            value: p,
            min: 0.0,
            max: 0.5,
        });
    }
    let bond_probability = otp_success(link, link);

    let class = |i: usize| -> Result<u8> {
        hex.nodes[i]
            .sublattice
            .ok_or_else(|| Error::WrongLatticeFamily(format!("node {i} has no sublattice")))
    };
    let mut tagged = [0usize; 2];
    for i in 0..hex.node_count() {
        if !hex.tags(i).is_empty() {
            tagged[class(i)? as usize] += 1;
        }
    }
    let node0 = class(0)?;
    let relay = match tagged[0].cmp(&tagged[1]) {
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Equal => 1 - node0,
    };

    let mut new_index = vec![usize::MAX; hex.node_count()];
    let mut nodes = Vec::new();
    for (i, n) in hex.nodes.iter().enumerate() {
        if class(i)? != relay {
            new_index[i] = nodes.len();
            nodes.push(Node {
                x: n.x,
                y: n.y,
                label: i,
                sublattice: None,
            });
        }
    }

    let adj = hex.adjacency();
    let mut edges = Vec::new();
    for (v, neighbors) in adj.iter().enumerate() {
        if class(v)? != relay {
            continue;
        }
        for (i, &a) in neighbors.iter().enumerate() {
            for &b in &neighbors[i + 1..] {
                edges.push(Edge {
                    u: new_index[a],
                    v: new_index[b],
                    multiplicity: 1,
                    weight: EdgeWeight::Open(bond_probability),
                });
            }
        }
    }

    let keep = |set: &[usize]| -> Vec<usize> {
        set.iter()
            .filter(|&&i| new_index[i] != usize::MAX)
            .map(|&i| new_index[i])
            .collect()
    };
    let b = &hex.boundary;
    let boundary = Boundary {
        left: keep(&b.left),
        right: keep(&b.right),
        top: keep(&b.top),
        bottom: keep(&b.bottom),
    };

    Ok(NetworkGraph {
        kind: LatticeKind::TransformedTriangular,
        rows: hex.rows,
        cols: hex.cols,
        nodes,
        edges,
        boundary,
    })
}

/// Checks that every node at least `margin` away from the bounding box of the
/// patch has six neighbors at equal distance, spaced 60 degrees apart.
pub fn check_triangular_structure(
    g: &NetworkGraph,
    margin: f64,
) -> std::result::Result<usize, String> {
    let (xmin, xmax, ymin, ymax) = g.nodes.iter().fold(
        (f64::MAX, f64::MIN, f64::MAX, f64::MIN),
        |(a, b, c, d), n| (a.min(n.x), b.max(n.x), c.min(n.y), d.max(n.y)),
    );
    let adj = g.adjacency();
    let mut checked = 0;
    for (i, n) in g.nodes.iter().enumerate() {
        let interior = n.x - xmin >= margin
            && xmax - n.x >= margin
            && n.y - ymin >= margin
            && ymax - n.y >= margin;
        if !interior {
            continue;
        }
        checked += 1;
        if adj[i].len() != 6 {
            return Err(format!("node {i} has degree {}", adj[i].len()));
        }
        let mut angles: Vec<f64> = Vec::with_capacity(6);
        let mut lengths: Vec<f64> = Vec::with_capacity(6);
        for &j in &adj[i] {
            let (dx, dy) = (g.nodes[j].x - n.x, g.nodes[j].y - n.y);
            angles.push(dy.atan2(dx));
            lengths.push(dx.hypot(dy));
        }
        angles.sort_by(f64::total_cmp);
        let step = std::f64::consts::PI / 3.0;
        for k in 0..6 {
            let gap = if k == 5 {
                angles[0] + 2.0 * std::f64::consts::PI - angles[5]
            } else {
                angles[k + 1] - angles[k]
            };
            if (gap - step).abs() > 1e-9 {
                return Err(format!("node {i} has neighbor angle gap {gap}"));
            }
        }
        if lengths.iter().any(|l| (l - lengths[0]).abs() > 1e-9) {
            return Err(format!("node {i} has unequal bond lengths"));
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build::tests::count_faces;
    use crate::lattice::{build_honeycomb, build_square, build_triangular};

    #[test]
    fn rejects_wrong_inputs() {
        assert!(matches!(
            transform_to_triangular(&build_honeycomb(4, 4, 1).unwrap(), 0.2),
            Err(Error::WrongLatticeFamily(_))
        ));
        assert!(matches!(
            transform_to_triangular(&build_square(4, 4).unwrap(), 0.2),
            Err(Error::WrongLatticeFamily(_))
        ));
        assert!(transform_to_triangular(&build_honeycomb(4, 4, 2).unwrap(), 0.7).is_err());
    }

    #[test]
    fn output_is_triangular() {
        for (r, c) in [(8, 12), (15, 26), (20, 21)] {
            let hex = build_honeycomb(r, c, 2).unwrap();
            let tri = transform_to_triangular(&hex, 0.2).unwrap();
            let checked = check_triangular_structure(&tri, 2.5).unwrap();
            assert!(checked > 0);
            let deg = tri.degrees();
            assert!(deg.iter().all(|&d| d <= 6));
            // still a planar straight-line embedding
            let (v, e, f) = (
                tri.node_count() as i64,
                tri.edge_count() as i64,
                count_faces(&tri) as i64,
            );
            assert_eq!(v - e + f, 2, "{r}x{c}");
            tri.validate().unwrap();
        }
        // built triangular lattices pass the same check
        assert!(check_triangular_structure(&build_triangular(10, 10).unwrap(), 1.5).unwrap() > 0);
        assert!(check_triangular_structure(&build_square(10, 10).unwrap(), 1.5).is_err());
    }

    #[test]
    fn bond_count_follows_relay_degrees() {
        let hex = build_honeycomb(9, 14, 2).unwrap();
        let tri = transform_to_triangular(&hex, 0.1).unwrap();
        let kept: std::collections::HashSet<usize> = tri.nodes.iter().map(|n| n.label).collect();
        let relay_degrees: Vec<usize> = hex
            .degrees()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !kept.contains(i))
            .map(|(_, d)| d)
            .collect();
        let full = relay_degrees.iter().filter(|&&d| d == 3).count();
        let partial = relay_degrees.iter().filter(|&&d| d == 2).count();
        assert_eq!(tri.edge_count(), 3 * full + partial);
        assert_eq!(tri.node_count() + relay_degrees.len(), hex.node_count());
        // no pair of kept nodes is joined twice
        let mut pairs: Vec<(usize, usize)> = tri
            .edges
            .iter()
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        assert_eq!(pairs.len(), tri.edge_count());
    }

    #[test]
    fn bond_probability_is_twice_the_bias() {
        let hex = build_honeycomb(6, 6, 2).unwrap();
        for p in [0.0, 0.1, 0.176, 0.25, 0.5] {
            let tri = transform_to_triangular(&hex, p).unwrap();
            let q = tri.uniform_open_probability().unwrap();
            assert!((q - 2.0 * p).abs() < 1e-12);
        }
        let tri = transform_to_triangular(&hex, 0.5).unwrap();
        assert!(tri.open_probabilities().unwrap().iter().all(|&q| q == 1.0));
    }

    #[test]
    fn relay_sublattice_keeps_boundary_nodes() {
        let hex = build_honeycomb(7, 10, 2).unwrap();
        let tri = transform_to_triangular(&hex, 0.2).unwrap();
        let b = &tri.boundary;
        assert!(
            !b.left.is_empty() && !b.right.is_empty() && !b.top.is_empty() && !b.bottom.is_empty()
        );
        let tagged_kept = (0..tri.node_count())
            .filter(|&i| !tri.tags(i).is_empty())
            .count();
        let tagged_total = (0..hex.node_count())
            .filter(|&i| !hex.tags(i).is_empty())
            .count();
        assert!(2 * tagged_kept >= tagged_total);
    }
}
