//! Linear cycle cover problems.
//!
//! A cycle cover uses exactly one outgoing and one incoming arc at every
//! node, so minimizing a linear arc cost over covers is an assignment
//! problem between tails and heads.  [`solve_ccp`] runs a shortest
//! augmenting path matching with node potentials instead of going through
//! the simplex; the potentials double as an optimality certificate for the
//! equivalent linear program built by [`ccp_lp`], and the two paths agree
//! because the degree constraint matrix is totally unimodular.

use crate::digraph::Digraph;
use crate::instance::CycleCover;
use crate::lp::{LpProblem, Relation, Sense};

const NONE: usize = usize::MAX;

/// Outcome of a cycle cover solve.
///
/// When no cover exists (or forced arcs rule every cover out), `objective`
/// is NaN, `cover` is `None` and the dual vectors are empty.  Otherwise the
/// duals certify optimality: for minimization every allowed arc `e`
/// satisfies `tail_duals[tail(e)] + head_duals[head(e)] <= p[e]`, with
/// equality on cover arcs; for maximization the inequality flips.
#[derive(Debug, Clone)]
pub struct CcpResult {
    pub objective: f64,
    pub cover: Option<CycleCover>,
    pub tail_duals: Vec<f64>,
    pub head_duals: Vec<f64>,
}

impl CcpResult {
    pub fn is_feasible(&self) -> bool {
        self.cover.is_some()
    }
}

/// Optimal cycle cover for linear arc costs `p`.
pub fn solve_ccp(graph: &Digraph, p: &[f64], sense: Sense) -> CcpResult {
    solve_ccp_forced(graph, p, &[], sense)
}

/// Optimal cycle cover with some arcs pinned in or out.
///
/// `(e, true)` keeps `e` in every cover considered, implemented by deleting
/// the competing arcs sharing its tail or head.  `(e, false)` deletes `e`.
/// Contradictory forces simply leave no cover, reported as infeasible.
pub fn solve_ccp_forced(
    graph: &Digraph,
    p: &[f64],
    forced: &[(usize, bool)],
    sense: Sense,
) -> CcpResult {
    assert_eq!(p.len(), graph.arc_count(), "one cost per arc");
    assert!(p.iter().all(|c| c.is_finite()), "arc costs must be finite");

    let mut allowed = vec![true; graph.arc_count()];
    for &(e, keep) in forced {
        assert!(e < graph.arc_count(), "forced arc out of range");
        if keep {
            for &f in graph.out_arcs(graph.tail(e)) {
                if f != e {
                    allowed[f] = false;
                }
            }
            for &f in graph.in_arcs(graph.head(e)) {
                if f != e {
                    allowed[f] = false;
                }
            }
        } else {
            allowed[e] = false;
        }
    }

    let cost: Vec<f64> = match sense {
        Sense::Min => p.to_vec(),
        Sense::Max => p.iter().map(|c| -c).collect(),
    };
    let Some((match_l, u, v)) = match_arcs(graph, &cost, &allowed) else {
        return CcpResult {
            objective: f64::NAN,
            cover: None,
            tail_duals: Vec::new(),
            head_duals: Vec::new(),
        };
    };

    let mut arcs = match_l;
    arcs.sort_unstable();
    debug_check(graph, &cost, &allowed, &arcs, &u, &v);
    let cover = CycleCover::from_arcs(graph, &arcs).expect("perfect matching forms a cover");
    let objective = arcs.iter().map(|&e| p[e]).sum();
    let (tail_duals, head_duals) = match sense {
        Sense::Min => (u, v),
        Sense::Max => (
            u.into_iter().map(|d| -d).collect(),
            v.into_iter().map(|d| -d).collect(),
        ),
    };
    CcpResult {
        objective,
        cover: Some(cover),
        tail_duals,
        head_duals,
    }
}

/// The cycle cover problem as an explicit linear program.
///
/// One variable per arc with a degree row per node and per direction.  The
/// constraint matrix is an interval matrix in disguise, so every vertex of
/// the polytope is integral and the LP value equals [`solve_ccp`].
pub fn ccp_lp(graph: &Digraph, p: &[f64], sense: Sense) -> LpProblem {
    assert_eq!(p.len(), graph.arc_count(), "one cost per arc");
    let mut lp = LpProblem::new(sense);
    for e in 0..graph.arc_count() {
        lp.add_var(p[e], 0.0, f64::INFINITY);
        lp.name_var(e, format!("x{e}"));
    }
    for i in 0..graph.node_count() {
        let coeffs: Vec<(usize, f64)> = graph.out_arcs(i).iter().map(|&e| (e, 1.0)).collect();
        let r = lp.add_row(&coeffs, Relation::Eq, 1.0);
        lp.name_row(r, format!("out{i}"));
    }
    for j in 0..graph.node_count() {
        let coeffs: Vec<(usize, f64)> = graph.in_arcs(j).iter().map(|&e| (e, 1.0)).collect();
        let r = lp.add_row(&coeffs, Relation::Eq, 1.0);
        lp.name_row(r, format!("in{j}"));
    }
    lp
}

/// Min cost perfect matching of tails to heads over the allowed arcs.
///
/// Shortest augmenting path with potentials, one augmentation per node.
/// Returns the matched arc per tail plus final potentials `(u, v)`
/// satisfying `u[tail(e)] + v[head(e)] <= cost[e]` on allowed arcs with
/// equality on matched ones, or `None` when some node cannot be covered.
fn match_arcs(
    graph: &Digraph,
    cost: &[f64],
    allowed: &[bool],
) -> Option<(Vec<usize>, Vec<f64>, Vec<f64>)> {
    let n = graph.node_count();
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut match_l = vec![NONE; n];
    let mut match_r = vec![NONE; n];
    let mut minv = vec![f64::INFINITY; n];
    let mut way = vec![NONE; n];
    let mut used = vec![false; n + 1];

    for s in 0..n {
        minv.fill(f64::INFINITY);
        way.fill(NONE);
        used.fill(false);
        // Column n is a virtual root matched to the yet unmatched tail s.
        let mut j0 = n;
        loop {
            used[j0] = true;
            let i0 = if j0 == n { s } else { graph.tail(match_r[j0]) };
            let base = u[i0];
            for &e in graph.out_arcs(i0) {
                if !allowed[e] {
                    continue;
                }
                let j = graph.head(e);
                if used[j] {
                    continue;
                }
                let reduced = cost[e] - base - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = e;
                }
            }
            let mut delta = f64::INFINITY;
            let mut j1 = NONE;
            for j in 0..n {
                if !used[j] && minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == NONE {
                return None;
            }
            for j in 0..n {
                if used[j] {
                    u[graph.tail(match_r[j])] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            u[s] += delta;
            j0 = j1;
            if match_r[j0] == NONE {
                break;
            }
        }
        // Flip the alternating path back to the root.
        loop {
            let e = way[j0];
            let i = graph.tail(e);
            let prev = match_l[i];
            match_l[i] = e;
            match_r[j0] = e;
            if i == s {
                break;
            }
            j0 = graph.head(prev);
        }
    }
    Some((match_l, u, v))
}

#[cfg(debug_assertions)]
fn debug_check(graph: &Digraph, cost: &[f64], allowed: &[bool], arcs: &[usize], u: &[f64], v: &[f64]) {
    let tol = 1e-7 * (1.0 + cost.iter().fold(0.0f64, |a, c| a.max(c.abs())));
    for e in 0..graph.arc_count() {
        if !allowed[e] {
            continue;
        }
        let slack = cost[e] - u[graph.tail(e)] - v[graph.head(e)];
        debug_assert!(slack >= -tol, "dual infeasible on arc {e}: slack {slack}");
    }
    let primal: f64 = arcs.iter().map(|&e| cost[e]).sum();
    let dual: f64 = u.iter().sum::<f64>() + v.iter().sum::<f64>();
    debug_assert!(
        (primal - dual).abs() <= tol * (1.0 + primal.abs()),
        "duality gap: primal {primal}, dual {dual}"
    );
    for &e in arcs {
        let slack = cost[e] - u[graph.tail(e)] - v[graph.head(e)];
        debug_assert!(slack.abs() <= tol, "cover arc {e} not tight: slack {slack}");
    }
}

#[cfg(not(debug_assertions))]
fn debug_check(_: &Digraph, _: &[f64], _: &[bool], _: &[usize], _: &[f64], _: &[f64]) {}
