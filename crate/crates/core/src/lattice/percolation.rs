use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DisjointSet, Family, NetworkGraph};
use crate::error::{Error, Result};
use crate::sampling::{trial_rng, Frequency};

const LEFT: u8 = 1;
const RIGHT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    /// Cluster sizes, largest first; they partition the node set.
    pub sizes: Vec<usize>,
    pub largest_fraction: f64,
    /// Some cluster touches both the left and the right boundary.
    pub spanning: bool,
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::NoTrials)
    } else {
        Ok(())
    }
}

fn open_bonds(g: &NetworkGraph, probs: &[f64], rng: &mut ChaCha8Rng, ds: &mut DisjointSet) {
    ds.reset();
    for (e, &q) in g.edges.iter().zip(probs) {
        if rng.random::<f64>() < q {
            ds.union(e.u, e.v);
        }
    }
}

fn spans(g: &NetworkGraph, ds: &mut DisjointSet, touched: &mut [bool]) -> bool {
    touched.fill(false);
    for &n in &g.boundary.left {
        let r = ds.find(n);
        touched[r] = true;
    }
    g.boundary.right.iter().any(|&n| touched[ds.find(n)])
}

/// Opens every bond independently with its own probability and reports the
/// resulting clusters.
pub fn sample_clusters(g: &NetworkGraph, seed: u64) -> Result<ClusterStats> {
    let probs = g.open_probabilities()?;
    let mut ds = DisjointSet::new(g.node_count());
    let mut rng = trial_rng(seed, 0);
    open_bonds(g, &probs, &mut rng, &mut ds);
    let spanning = spans(g, &mut ds, &mut vec![false; g.node_count()]);
    let sizes = ds.set_sizes();
    let largest_fraction =
        sizes.first().copied().unwrap_or(0) as f64 / g.node_count().max(1) as f64;
    Ok(ClusterStats {
        sizes,
        largest_fraction,
        spanning,
    })
}

/// Per-sample spanning onsets of a graph under uniform bond probability.
///
/// Each sample is a full coupling of bond percolation at every `p`: bond `e`
/// carries a uniform variate `u_e` and is open at `p` iff `u_e < p`. The onset
/// is the smallest `p` at which the sample spans. Bonds are added in a uniformly
/// random order until spanning occurs at the `k`-th bond; since the order of
/// the variates is independent of their values, the onset is then drawn as the
/// `k`-th order statistic of `E` uniforms, `Beta(k, E - k + 1)`.
///
/// For every fixed `p`, the fraction of onsets `<= p` is therefore the
/// crossing frequency of independent samples at `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingCurve {
    /// Sorted; `f64::INFINITY` marks samples that never span.
    pub onsets: Vec<f64>,
}

struct SweepWorkspace {
    ds: DisjointSet,
    mask: Vec<u8>,
    order: Vec<u32>,
}

impl CrossingCurve {
    pub fn sample(g: &NetworkGraph, trials: u64, seed: u64) -> Result<Self> {
        check_trials(trials)?;
        let bonds: Vec<(u32, u32)> = g.edges.iter().map(|e| (e.u as u32, e.v as u32)).collect();
        let mut sides = vec![0u8; g.node_count()];
        for &n in &g.boundary.left {
            sides[n] |= LEFT;
        }
        for &n in &g.boundary.right {
            sides[n] |= RIGHT;
        }
        let mut onsets: Vec<f64> = (0..trials)
            .into_par_iter()
            .map_init(
                || SweepWorkspace {
                    ds: DisjointSet::new(g.node_count()),
                    mask: sides.clone(),
                    order: Vec::with_capacity(bonds.len()),
                },
                |ws, trial| {
                    let mut rng = trial_rng(seed, trial);
                    match spanning_bond_count(&bonds, &sides, ws, &mut rng) {
                        None => f64::INFINITY,
                        Some(0) => 0.0,
                        Some(k) => {
                            let total = bonds.len() as f64;
                            Beta::new(k as f64, total - k as f64 + 1.0)
                                .expect("positive shape parameters")
                                .sample(&mut rng)
                        }
                    }
                },
            )
            .collect();
        onsets.sort_by(f64::total_cmp);
        Ok(Self { onsets })
    }

    pub fn trials(&self) -> u64 {
        self.onsets.len() as u64
    }

    pub fn frequency_at(&self, p: f64) -> Frequency {
        let hits = if p <= 0.0 {
            0
        } else {
            self.onsets.partition_point(|&o| o <= p)
        };
        Frequency::new(hits as u64, self.trials())
    }
}

/// Adds bonds in a random order (lazy Fisher-Yates) and returns how many were
/// needed to connect the left and right boundaries.
fn spanning_bond_count(
    bonds: &[(u32, u32)],
    sides: &[u8],
    ws: &mut SweepWorkspace,
    rng: &mut ChaCha8Rng,
) -> Option<usize> {
    if sides.contains(&(LEFT | RIGHT)) {
        return Some(0);
    }
    ws.ds.reset();
    ws.mask.copy_from_slice(sides);
    ws.order.clear();
    ws.order.extend(0..bonds.len() as u32);
    let total = bonds.len();
    for i in 0..total {
        let j = rng.random_range(i..total);
        ws.order.swap(i, j);
        let (u, v) = bonds[ws.order[i] as usize];
        let (mu, mv) = {
            let (ru, rv) = (ws.ds.find(u as usize), ws.ds.find(v as usize));
            (ws.mask[ru], ws.mask[rv])
        };
        if let Some(root) = ws.ds.union(u as usize, v as usize) {
            let m = mu | mv;
            ws.mask[root] = m;
            if m == LEFT | RIGHT {
                return Some(i + 1);
            }
        }
    }
    None
}

/// Fraction of `trials` samples of `g` that span left to right.
///
/// Graphs whose bonds share one open probability go through
/// [`CrossingCurve`]; others are sampled bond by bond.
pub fn crossing_frequency(g: &NetworkGraph, trials: u64, seed: u64) -> Result<Frequency> {
    check_trials(trials)?;
    if let Some(q) = g.uniform_open_probability() {
        return Ok(CrossingCurve::sample(g, trials, seed)?.frequency_at(q));
    }
    let probs = g.open_probabilities()?;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || {
                (
                    DisjointSet::new(g.node_count()),
                    vec![false; g.node_count()],
                )
            },
            |(ds, touched), trial| {
                let mut rng = trial_rng(seed, trial);
                open_bonds(g, &probs, &mut rng, ds);
                spans(g, ds, touched) as u64
            },
        )
        .sum();
    Ok(Frequency::new(hits, trials))
}

/// Crossing frequency of a size-`size` patch of `family` with every bond open
/// with probability `p_edge`.
pub fn crossing_probability(
    family: Family,
    size: usize,
    p_edge: f64,
    trials: u64,
    seed: u64,
) -> Result<Frequency> {
    let g = family.build(size)?.with_open_probability(p_edge)?;
    crossing_frequency(&g, trials, seed)
}

/// Fraction of samples in which nodes `a` and `b` end up in the same cluster.
pub fn connection_probability(
    g: &NetworkGraph,
    a: usize,
    b: usize,
    trials: u64,
    seed: u64,
) -> Result<Frequency> {
    check_trials(trials)?;
    for n in [a, b] {
        if n >= g.node_count() {
            return Err(Error::UnknownNode(n));
        }
    }
    if a == b {
        return Err(Error::SameNode(a));
    }
    let probs = g.open_probabilities()?;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || DisjointSet::new(g.node_count()),
            |ds, trial| {
                let mut rng = trial_rng(seed, trial);
                open_bonds(g, &probs, &mut rng, ds);
                ds.same(a, b) as u64
            },
        )
        .sum();
    Ok(Frequency::new(hits, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_honeycomb, build_square, build_triangular};

    #[test]
    fn cluster_extremes() {
        let g = build_square(8, 8)
            .unwrap()
            .with_open_probability(1.0)
            .unwrap();
        let all = sample_clusters(&g, 1).unwrap();
        assert_eq!(all.sizes, vec![64]);
        assert!(all.spanning);
        assert_eq!(all.largest_fraction, 1.0);

        let g = g.with_open_probability(0.0).unwrap();
        let none = sample_clusters(&g, 1).unwrap();
        assert_eq!(none.sizes, vec![1; 64]);
        assert!(!none.spanning);
        assert_eq!(none.largest_fraction, 1.0 / 64.0);
    }

    #[test]
    fn unresolved_bonds_are_rejected() {
        let g = build_honeycomb(4, 4, 2).unwrap();
        assert_eq!(sample_clusters(&g, 0), Err(Error::UnresolvedEdge(0)));
        assert!(crossing_frequency(&g, 10, 0).is_err());
    }

    #[test]
    fn clusters_partition_nodes() {
        for seed in 0..20 {
            let g = build_triangular(9, 11)
                .unwrap()
                .with_open_probability(0.3)
                .unwrap();
            let s = sample_clusters(&g, seed).unwrap();
            assert_eq!(s.sizes.iter().sum::<usize>(), g.node_count());
            assert!(s.largest_fraction > 0.0 && s.largest_fraction <= 1.0);
            assert_eq!(s, sample_clusters(&g, seed).unwrap());
        }
    }

    #[test]
    fn crossing_extremes() {
        for fam in [Family::Square, Family::Triangular, Family::Honeycomb] {
            assert_eq!(
                crossing_probability(fam, 16, 1.0, 200, 3)
                    .unwrap()
                    .frequency,
                1.0
            );
            assert_eq!(
                crossing_probability(fam, 16, 0.0, 200, 3)
                    .unwrap()
                    .frequency,
                0.0
            );
        }
        assert_eq!(
            crossing_probability(Family::Square, 16, 0.5, 0, 3),
            Err(Error::NoTrials)
        );
    }

    #[test]
    fn sweep_matches_direct_sampling() {
        // same graph, independent randomness: the two estimators must agree statistically
        let g = build_square(12, 12).unwrap();
        let curve = CrossingCurve::sample(&g, 20_000, 11).unwrap();
        for p in [0.4, 0.5, 0.6] {
            let sweep = curve.frequency_at(p);
            // heterogeneous weights force the bond-by-bond path
            let mut h = g.clone().with_open_probability(p).unwrap();
            h.edges[0].weight = crate::lattice::EdgeWeight::Open(p * (1.0 - 1e-12));
            let direct = crossing_frequency(&h, 20_000, 12).unwrap();
            let se = (sweep.standard_error.powi(2) + direct.standard_error.powi(2)).sqrt();
            assert!(
                (sweep.frequency - direct.frequency).abs() < 4.0 * se,
                "p={p}: {sweep:?} {direct:?}"
            );
        }
    }

    #[test]
    fn crossing_is_monotone() {
        for fam in [Family::Square, Family::Triangular, Family::Honeycomb] {
            let mut prev: Option<Frequency> = None;
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                let f = crossing_probability(fam, 24, p, 2_000, 5 + i).unwrap();
                if let Some(prev) = prev {
                    let se = (f.standard_error.powi(2) + prev.standard_error.powi(2)).sqrt();
                    assert!(
                        f.frequency + 2.0 * se + 1e-12 >= prev.frequency,
                        "{fam:?} p={p}"
                    );
                }
                prev = Some(f);
            }
        }
    }

    #[test]
    fn square_calibration_near_half() {
        let f = crossing_probability(Family::Square, 64, 0.5, 4_000, 2024).unwrap();
        assert!((f.frequency - 0.5).abs() < 0.05, "{f:?}");
    }

    #[test]
    fn connection_examples() {
        let g = build_square(5, 5)
            .unwrap()
            .with_open_probability(1.0)
            .unwrap();
        assert_eq!(
            connection_probability(&g, 0, 1, 100, 0).unwrap().frequency,
            1.0
        );
        let g = g.with_open_probability(0.0).unwrap();
        assert_eq!(
            connection_probability(&g, 0, 1, 100, 0).unwrap().frequency,
            0.0
        );
        assert_eq!(
            connection_probability(&g, 0, 99, 100, 0),
            Err(Error::UnknownNode(99))
        );
        assert_eq!(
            connection_probability(&g, 3, 3, 100, 0),
            Err(Error::SameNode(3))
        );
    }
}
