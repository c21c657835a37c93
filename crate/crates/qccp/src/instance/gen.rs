//! Instance generators.
//!
//! All generators are pure functions of their parameters and a 64-bit
//! seed; the RNG is ChaCha8 (`rand_chacha::ChaCha8Rng`), so identical
//! seeds give bit-identical instances across platforms and builds.

use super::{QccpInstance, SupportMode};
use crate::digraph::Digraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("need at least {min} nodes, got {got}")]
    NodeCount { min: usize, got: usize },
    #[error("arc probability must lie in (0, 1], got {0}")]
    Probability(f64),
    #[error("cost range [{lo}, {hi}] is empty")]
    CostRange { lo: i64, hi: i64 },
    #[error("grid needs at least one dimension, each of size >= 2")]
    GridDims,
    #[error("weight and distance matrices must be square of equal size >= 2")]
    QapShape,
    #[error("weight and distance diagonals must be zero")]
    QapDiagonal,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) digraph: every ordered non-loop pair is an arc independently
/// with probability `p`; every successor pair gets an integer interaction
/// cost uniform on `[cost_lo, cost_hi]`.
pub fn gen_erdos_renyi(
    n: usize,
    p: f64,
    cost_lo: i64,
    cost_hi: i64,
    seed: u64,
) -> Result<QccpInstance, GenError> {
    if n < 2 {
        return Err(GenError::NodeCount { min: 2, got: n });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(GenError::Probability(p));
    }
    if cost_lo > cost_hi {
        return Err(GenError::CostRange {
            lo: cost_lo,
            hi: cost_hi,
        });
    }
    let mut rng = rng_for(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p) {
                arcs.push((i, j));
            }
        }
    }
    let graph = Digraph::new(n, &arcs).expect("generated arcs are simple");
    let entries: Vec<(usize, usize, f64)> = graph
        .succ_pairs()
        .iter()
        .map(|&(e, f)| (e, f, rng.gen_range(cost_lo..=cost_hi) as f64))
        .collect();
    Ok(QccpInstance::new(graph, &entries, SupportMode::SuccessorOnly)
        .expect("successor-pair support"))
}

/// Toroidal k-dimensional grid with alternating arc directions.
///
/// Nodes are coordinate tuples `(i_0, …, i_{k-1})`, `i_j ∈ {0, …,
/// dims[j]-1}`. Along each dimension `j` a node has exactly one outgoing
/// arc: toward `i_j + 1 (mod dims[j])` when the parity of the other
/// coordinates is even, else toward `i_j - 1`. Consecutive layers thus
/// alternate direction, every node has in- and out-degree `k`, and `m =
/// k · Π dims[j]`. Successor pairs get integer costs uniform on
/// `[cost_lo, cost_hi]`.
pub fn gen_manhattan(
    dims: &[usize],
    cost_lo: i64,
    cost_hi: i64,
    seed: u64,
) -> Result<QccpInstance, GenError> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(GenError::GridDims);
    }
    if cost_lo > cost_hi {
        return Err(GenError::CostRange {
            lo: cost_lo,
            hi: cost_hi,
        });
    }
    let k = dims.len();
    let n: usize = dims.iter().product();
    let mut strides = vec![1usize; k];
    for j in (0..k - 1).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    let coords = |id: usize| -> Vec<usize> {
        (0..k).map(|j| id / strides[j] % dims[j]).collect()
    };
    let mut arcs = Vec::with_capacity(k * n);
    for id in 0..n {
        let c = coords(id);
        for j in 0..k {
            let others: usize = (0..k).filter(|&j2| j2 != j).map(|j2| c[j2]).sum();
            let step = if others.is_multiple_of(2) {
                (c[j] + 1) % dims[j]
            } else {
                (c[j] + dims[j] - 1) % dims[j]
            };
            let target = (id as isize + (step as isize - c[j] as isize) * strides[j] as isize)
                as usize;
            debug_assert_eq!(coords(target)[j], step);
            arcs.push((id, target));
        }
    }
    let graph = Digraph::new(n, &arcs).expect("grid arcs are simple");
    let mut rng = rng_for(seed);
    let entries: Vec<(usize, usize, f64)> = graph
        .succ_pairs()
        .iter()
        .map(|&(e, f)| (e, f, rng.gen_range(cost_lo..=cost_hi) as f64))
        .collect();
    Ok(QccpInstance::new(graph, &entries, SupportMode::SuccessorOnly)
        .expect("successor-pair support"))
}

/// Turning-angle and distance costs on random points.
///
/// `n` distinct integer points uniform on `{0, …, coord_hi}²` (coordinates
/// are resampled on collision so every point is unique); the arc set is a
/// uniform sample of exactly `⌈p·n·(n-1)⌉` ordered pairs without
/// replacement. For a successor pair `(e, f)`,
///
/// ```text
/// Q_ef = ⌈0.1·(ρ·α_ef + (d_e + d_f)/2)⌉
/// ```
///
/// with `d_e` the Euclidean arc length and `α_ef ∈ [0, π]` the change of
/// direction between `e` and `f`. Costs are not symmetric in general.
pub fn gen_angle_distance(
    n: usize,
    p: f64,
    rho: f64,
    coord_hi: i64,
    seed: u64,
) -> Result<QccpInstance, GenError> {
    if n < 2 {
        return Err(GenError::NodeCount { min: 2, got: n });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(GenError::Probability(p));
    }
    let points_available = ((coord_hi + 1) * (coord_hi + 1)) as usize;
    if points_available < n {
        return Err(GenError::NodeCount {
            min: n,
            got: points_available,
        });
    }
    let mut rng = rng_for(seed);
    let points = sample_distinct_points(n, coord_hi, &mut rng);
    let arcs = sample_arcs(n, p, &mut rng);
    let graph = Digraph::new(n, &arcs).expect("sampled arcs are simple");
    let dir = |e: usize| -> (f64, f64) {
        let (t, h) = (graph.tail(e), graph.head(e));
        (
            (points[h].0 - points[t].0) as f64,
            (points[h].1 - points[t].1) as f64,
        )
    };
    let lengths: Vec<f64> = (0..graph.arc_count())
        .map(|e| {
            let (dx, dy) = dir(e);
            dx.hypot(dy)
        })
        .collect();
    let entries: Vec<(usize, usize, f64)> = graph
        .succ_pairs()
        .iter()
        .map(|&(e, f)| {
            let (ax, ay) = dir(e);
            let (bx, by) = dir(f);
            let alpha = (ax * by - ay * bx).abs().atan2(ax * bx + ay * by);
            (e, f, angle_cost(rho, alpha, lengths[e], lengths[f]))
        })
        .collect();
    Ok(QccpInstance::new(graph, &entries, SupportMode::SuccessorOnly)
        .expect("successor-pair support"))
}

pub(crate) fn angle_cost(rho: f64, alpha: f64, d_e: f64, d_f: f64) -> f64 {
    (0.1 * (rho * alpha + (d_e + d_f) / 2.0)).ceil()
}

fn sample_distinct_points(n: usize, coord_hi: i64, rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    let mut points: Vec<(i64, i64)> = Vec::with_capacity(n);
    while points.len() < n {
        let cand = (rng.gen_range(0..=coord_hi), rng.gen_range(0..=coord_hi));
        if !points.contains(&cand) {
            points.push(cand);
        }
    }
    points
}

fn sample_arcs(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    let total = pairs.len();
    let k = (p * total as f64).ceil() as usize;
    let k = k.min(total);
    for idx in 0..k {
        let pick = rng.gen_range(idx..total);
        pairs.swap(idx, pick);
    }
    let mut chosen: Vec<(usize, usize)> = pairs[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

/// Reduction from the quadratic assignment problem.
///
/// For an n-facility QAP with flows `w` and distances `d`, builds a graph
/// of `n` groups of `n-1` cells of `n` nodes each (node `(i, j, k)` means
/// facility `i` at location `k` in the cell paired with facility `j`),
/// plus one connection and one relink node per facility pair. Node
/// `(i, j, k)` cycles to the next cell of group `i` at the same location;
/// for each pair `i < j`, every node of cell `(i, j)` points at the
/// connection node, which points at every node of cell `(j, i)`, whose
/// nodes point at the relink node, which points back at every node of cell
/// `(i, j)`.
///
/// Interaction costs: traversing the connection node from location `k` to
/// location `l` costs `d[k][l]·w[i][j] + d[l][k]·w[j][i]` when `k ≠ l` and
/// `big_m` when `k = l` (two facilities cannot share a location); any
/// transition between an inner-cycle arc and a connection/relink arc costs
/// `big_m` (a group must sit at one location); everything else costs 0.
/// Covers of finite cost are then exactly the facility-to-location
/// bijections, at equal objective value.
///
/// At `n = 2` a cell's inner cycle would be a self-loop, so no inner arcs
/// are emitted and the gadget has no cycle cover; the reduction is
/// meaningful for `n ≥ 3`.
pub fn gen_qap_reduction(
    w: &[Vec<f64>],
    d: &[Vec<f64>],
    big_m: f64,
) -> Result<QccpInstance, GenError> {
    let n = w.len();
    if n < 2 || d.len() != n || w.iter().any(|r| r.len() != n) || d.iter().any(|r| r.len() != n) {
        return Err(GenError::QapShape);
    }
    if (0..n).any(|i| w[i][i] != 0.0 || d[i][i] != 0.0) {
        return Err(GenError::QapDiagonal);
    }
    let cells = n - 1;
    let cell_node = |i: usize, j: usize, k: usize| -> usize {
        // j is the partner group; cells of group i are its partners in
        // ascending order.
        let a = if j < i { j } else { j - 1 };
        (i * cells + a) * n + k
    };
    let cell_base = n * cells * n;
    let pair_index = |i: usize, j: usize| -> usize {
        // index of {i, j}, i < j, in lexicographic order
        i * n - i * (i + 1) / 2 + (j - i - 1)
    };
    let conn = |i: usize, j: usize| cell_base + 2 * pair_index(i, j);
    let relink = |i: usize, j: usize| cell_base + 2 * pair_index(i, j) + 1;
    let node_count = cell_base + n * (n - 1); // 2 * C(n,2) outer nodes

    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Inner,
        ToConn { pair: usize, loc: usize },
        FromConn { loc: usize },
        ToRelink,
        FromRelink,
    }

    let mut arcs = Vec::new();
    let mut kinds = Vec::new();
    if cells >= 2 {
        for i in 0..n {
            for k in 0..n {
                for a in 0..cells {
                    let j1 = if a < i { a } else { a + 1 };
                    let next = (a + 1) % cells;
                    let j2 = if next < i { next } else { next + 1 };
                    arcs.push((cell_node(i, j1, k), cell_node(i, j2, k)));
                    kinds.push(Kind::Inner);
                }
            }
        }
    }
    let mut pair_groups = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pair_groups.push((i, j));
            let t = pair_index(i, j);
            for k in 0..n {
                arcs.push((cell_node(i, j, k), conn(i, j)));
                kinds.push(Kind::ToConn { pair: t, loc: k });
            }
            for l in 0..n {
                arcs.push((conn(i, j), cell_node(j, i, l)));
                kinds.push(Kind::FromConn { loc: l });
            }
            for l in 0..n {
                arcs.push((cell_node(j, i, l), relink(i, j)));
                kinds.push(Kind::ToRelink);
            }
            for k in 0..n {
                arcs.push((relink(i, j), cell_node(i, j, k)));
                kinds.push(Kind::FromRelink);
            }
        }
    }

    let graph = Digraph::new(node_count, &arcs).expect("gadget arcs are simple");
    let mut entries = Vec::new();
    for &(e, f) in graph.succ_pairs() {
        let cost = match (kinds[e], kinds[f]) {
            (Kind::ToConn { pair, loc: k }, Kind::FromConn { loc: l }) => {
                if k == l {
                    big_m
                } else {
                    let (i, j) = pair_groups[pair];
                    d[k][l] * w[i][j] + d[l][k] * w[j][i]
                }
            }
            (Kind::Inner, Kind::ToConn { .. })
            | (Kind::Inner, Kind::ToRelink)
            | (Kind::FromConn { .. }, Kind::Inner)
            | (Kind::FromRelink, Kind::Inner) => big_m,
            _ => 0.0,
        };
        if cost != 0.0 {
            entries.push((e, f, cost));
        }
    }
    Ok(QccpInstance::new(graph, &entries, SupportMode::SuccessorOnly)
        .expect("successor-pair support"))
}

/// A penalty exceeding every finite cover cost of the reduction:
/// `1 + n² · max(d[k][l]·w[i][j] + d[l][k]·w[j][i])`.
pub fn qap_big_m(w: &[Vec<f64>], d: &[Vec<f64>]) -> f64 {
    let n = w.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    worst = worst.max(d[k][l] * w[i][j] + d[l][k] * w[j][i]);
                }
            }
        }
    }
    1.0 + (n * n) as f64 * worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn er_complete_at_p_one() {
        let inst = gen_erdos_renyi(5, 1.0, 1, 100, 7).unwrap();
        assert_eq!(inst.graph().arc_count(), 20);
    }

    #[test]
    fn er_deterministic_per_seed() {
        let a = gen_erdos_renyi(9, 0.4, 1, 100, 123).unwrap();
        let b = gen_erdos_renyi(9, 0.4, 1, 100, 123).unwrap();
        assert_eq!(a, b);
        let c = gen_erdos_renyi(9, 0.4, 1, 100, 124).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn er_costs_are_integers_in_range() {
        let inst = gen_erdos_renyi(8, 0.6, 1, 100, 5).unwrap();
        assert!(inst.entry_count() > 0);
        for (_, _, cost) in inst.entries() {
            assert_eq!(cost, cost.round());
            assert!((1.0..=100.0).contains(&cost));
        }
    }

    #[test]
    fn er_arc_count_matches_binomial_mean() {
        let trials = 10_000;
        let mut total = 0usize;
        for seed in 0..trials {
            total += gen_erdos_renyi(20, 0.3, 1, 100, seed).unwrap().graph().arc_count();
        }
        let mean = total as f64 / trials as f64;
        // mean of Bin(380, 0.3) is 114, sd of the sample mean is
        // sqrt(380·0.3·0.7)/sqrt(trials) ≈ 0.089
        let sd_mean = (380.0f64 * 0.3 * 0.7).sqrt() / (trials as f64).sqrt();
        assert!(
            (mean - 114.0).abs() <= 3.0 * sd_mean,
            "sample mean {mean} too far from 114"
        );
    }

    #[test]
    fn er_rejects_bad_params() {
        assert!(gen_erdos_renyi(1, 0.5, 1, 10, 0).is_err());
        assert!(gen_erdos_renyi(5, 0.0, 1, 10, 0).is_err());
        assert!(gen_erdos_renyi(5, 1.5, 1, 10, 0).is_err());
        assert!(gen_erdos_renyi(5, 0.5, 10, 1, 0).is_err());
    }

    #[test]
    fn manhattan_grid_counts() {
        for (dims, n, m) in [
            (vec![5, 5], 25, 50),
            (vec![4, 4, 4], 64, 192),
            (vec![10, 10, 10], 1000, 3000),
        ] {
            let inst = gen_manhattan(&dims, 0, 10, 1).unwrap();
            assert_eq!(inst.graph().node_count(), n);
            assert_eq!(inst.graph().arc_count(), m);
        }
    }

    #[test]
    fn manhattan_degrees_are_dimension_count() {
        let inst = gen_manhattan(&[3, 4], 0, 10, 2).unwrap();
        let g = inst.graph();
        for i in 0..g.node_count() {
            assert_eq!(g.out_arcs(i).len(), 2);
            assert_eq!(g.in_arcs(i).len(), 2);
        }
    }

    #[test]
    fn manhattan_rejects_degenerate_dims() {
        assert!(gen_manhattan(&[], 0, 10, 0).is_err());
        assert!(gen_manhattan(&[5, 1], 0, 10, 0).is_err());
    }

    #[test]
    fn angle_arc_counts_exact() {
        let inst = gen_angle_distance(20, 0.3, 40.0, 500, 3).unwrap();
        assert_eq!(inst.graph().arc_count(), 114);
        let inst = gen_angle_distance(20, 0.5, 40.0, 500, 3).unwrap();
        assert_eq!(inst.graph().arc_count(), 190);
    }

    #[test]
    fn angle_costs_positive_integers() {
        let inst = gen_angle_distance(12, 0.5, 40.0, 500, 9).unwrap();
        for (_, _, cost) in inst.entries() {
            assert_eq!(cost, cost.round());
            assert!(cost >= 1.0);
        }
    }

    #[test]
    fn angle_cost_formula_cases() {
        // straight continuation of two length-10 arcs
        assert_eq!(angle_cost(40.0, 0.0, 10.0, 10.0), 1.0);
        // right angle: ceil(0.1·(40·π/2 + 10)) = ceil(7.28…)
        assert_eq!(angle_cost(40.0, PI / 2.0, 10.0, 10.0), 8.0);
        // U-turn dominates: ceil(0.1·40π) = ceil(12.56…)
        assert_eq!(angle_cost(40.0, PI, 0.5, 0.5), 13.0);
    }

    #[test]
    fn angle_deterministic_and_distinct_points() {
        let a = gen_angle_distance(10, 0.7, 40.0, 500, 11).unwrap();
        let b = gen_angle_distance(10, 0.7, 40.0, 500, 11).unwrap();
        assert_eq!(a, b);
        // Tiny coordinate range forces collisions during sampling; all
        // four lattice points must end up used exactly once.
        let mut rng = rng_for(99);
        let pts = sample_distinct_points(4, 1, &mut rng);
        let mut sorted = pts.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    fn small_qap() -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let w = vec![
            vec![0.0, 3.0, 1.0],
            vec![2.0, 0.0, 4.0],
            vec![1.0, 2.0, 0.0],
        ];
        let d = vec![
            vec![0.0, 5.0, 2.0],
            vec![4.0, 0.0, 1.0],
            vec![3.0, 6.0, 0.0],
        ];
        (w, d)
    }

    #[test]
    fn qap_gadget_counts() {
        let (w, d) = small_qap();
        let inst = gen_qap_reduction(&w, &d, qap_big_m(&w, &d)).unwrap();
        let g = inst.graph();
        // n=3: n²(n-1) + 2·C(3,2) nodes; n²(n-1) inner arcs + 4n·C(3,2) outer
        assert_eq!(g.node_count(), 18 + 6);
        assert_eq!(g.arc_count(), 18 + 36);

        let w4 = vec![vec![0.0; 4]; 4];
        let d4 = vec![vec![0.0; 4]; 4];
        let inst = gen_qap_reduction(&w4, &d4, 1.0).unwrap();
        assert_eq!(inst.graph().node_count(), 48 + 12);
        assert_eq!(inst.graph().arc_count(), 48 + 96);
    }

    #[test]
    fn qap_gadget_degenerate_two_facilities() {
        let w = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        let d = vec![vec![0.0, 3.0], vec![1.0, 0.0]];
        let inst = gen_qap_reduction(&w, &d, qap_big_m(&w, &d)).unwrap();
        // no inner arcs at n=2; 6 nodes and 8 outer arcs remain
        assert_eq!(inst.graph().node_count(), 6);
        assert_eq!(inst.graph().arc_count(), 8);
    }

    #[test]
    fn qap_big_m_exceeds_any_finite_cover_cost() {
        let (w, d) = small_qap();
        let m = qap_big_m(&w, &d);
        // max single term is d[0][1]·w[1][2] + d[1][0]·w[2][1] = 20 + 8
        assert_eq!(m, 1.0 + 9.0 * 28.0);
    }

    #[test]
    fn qap_gadget_cost_classes() {
        let (w, d) = small_qap();
        let big = qap_big_m(&w, &d);
        let inst = gen_qap_reduction(&w, &d, big).unwrap();
        let g = inst.graph();
        // Every stored cost is either big_m or a d·w combination from a
        // connection transition; count the location-diagonal penalties:
        // per pair, n of the n² connection transitions have k = l.
        let diag_penalties = g
            .succ_pairs()
            .iter()
            .filter(|&&(e, f)| {
                let via = g.head(e);
                g.tail(f) == via && inst.q(e, f) == big && g.out_arcs(via).len() == 3
            })
            .count();
        // connection nodes have out-degree n; 3 pairs × 3 diagonal transitions
        assert_eq!(diag_penalties, 9);
    }

    #[test]
    fn qap_rejects_bad_shapes() {
        let w = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let d = vec![vec![0.0; 3]; 3];
        assert_eq!(
            gen_qap_reduction(&w, &d, 1.0).unwrap_err(),
            GenError::QapShape
        );
        let w_diag = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        let d2 = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(
            gen_qap_reduction(&w_diag, &d2, 1.0).unwrap_err(),
            GenError::QapDiagonal
        );
    }
}
