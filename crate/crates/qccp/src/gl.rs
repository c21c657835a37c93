//! The Gilmore-Lawler bound family.
//!
//! The classical construction answers, per arc, "how cheap can a cover
//! through this arc be for this arc's row of costs", then covers the graph
//! with those per-arc minima.  Because a row only sees costs charged *at*
//! the arc, the matrix is first rebalanced into the equivalent
//! representation `ηQ + (1-η)Qᵀ`, which splits every pair cost between its
//! two arcs; `η = 1/2` is the symmetric default.
//!
//! Four routes to the same family:
//!
//! * [`gl_classical`]: `m` forced-arc cover solves plus one final cover.
//! * [`gl_compact`]: one LP whose variables carry a fractional cover per
//!   arc; equal to the classical bound by LP duality.
//! * [`gl_as_lbb`]: the same value reached as a linearization based bound,
//!   searching matrices `Q̂_ef = B_{e,f⁺} + C_{e,f⁻}` (plus a diagonal
//!   slack) under `Q`.
//! * [`milp_bound`]: the relaxation of a big-M style exact formulation; it
//!   dominates the classical bound at the same `η`.
//!
//! [`rlt1`] is the first level reformulation-linearization relaxation, a
//! strictly tighter LP than [`gl_compact`] obtained by multiplying the
//! degree equalities with each variable and keeping the products
//! symmetric.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ccp::{solve_ccp, solve_ccp_forced};
use crate::instance::QccpInstance;
use crate::lbb::{debug_check_report, ensure_cover, BoundError, BoundReport, LpStats, DEFAULT_ROW_CAP};
use crate::linearize::Witnesses;
use crate::lp::{LpProblem, LpStatus, Relation, Sense};

/// Symmetrizing weight: half of every pair cost to each arc.
pub const DEFAULT_ETA: f64 = 0.5;

/// Per-arc contribution vectors of the rebalanced matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlVectors {
    /// Cheapest cover value through each arc, for that arc's cost row;
    /// zero for arcs no cover uses.
    pub z: Vec<f64>,
    /// Costliest cover value avoiding each arc, for that arc's cost row;
    /// falls back to the unrestricted maximum for unavoidable arcs, whose
    /// big-M constraint is vacuous anyway.
    pub qmax: Vec<f64>,
    /// Arcs contained in no cover (`z` forced to zero there).
    pub zeroed: Vec<usize>,
    /// Arcs contained in every cover (`qmax` from the fallback there).
    pub unavoidable: Vec<usize>,
}

fn check_eta(eta: f64) {
    assert!(
        (0.0..=1.0).contains(&eta) && eta.is_finite(),
        "eta must lie in [0, 1], got {eta}"
    );
}

/// Row `e` of `ηQ + (1-η)Qᵀ`, dense.
///
/// The transpose folds each predecessor pair cost `Q_fe` into arc `e`'s
/// row, so the row sees both directions of interaction.  The diagonal is
/// shared between no pair and stays put.
fn eta_row(inst: &QccpInstance, eta: f64, e: usize) -> Vec<f64> {
    let g = inst.graph();
    let mut row = vec![0.0; g.arc_count()];
    row[e] = inst.q(e, e);
    for &f in g.out_arcs(g.head(e)) {
        row[f] += eta * inst.q(e, f);
    }
    for &f in g.in_arcs(g.tail(e)) {
        row[f] += (1.0 - eta) * inst.q(f, e);
    }
    row
}

fn min_contributions(inst: &QccpInstance, eta: f64) -> (Vec<f64>, Vec<usize>) {
    let g = inst.graph();
    let m = g.arc_count();
    let per_arc: Vec<(f64, bool)> = (0..m)
        .into_par_iter()
        .map(|e| {
            let row = eta_row(inst, eta, e);
            let sol = solve_ccp_forced(g, &row, &[(e, true)], Sense::Min);
            if sol.is_feasible() {
                (sol.objective, false)
            } else {
                (0.0, true)
            }
        })
        .collect();
    let z = per_arc.iter().map(|&(v, _)| v).collect();
    let zeroed = per_arc
        .iter()
        .enumerate()
        .filter_map(|(e, &(_, dead))| dead.then_some(e))
        .collect();
    (z, zeroed)
}

/// Both contribution vectors for the `η`-representation.
pub fn gl_vectors(inst: &QccpInstance, eta: f64) -> Result<GlVectors, BoundError> {
    check_eta(eta);
    ensure_cover(inst)?;
    let g = inst.graph();
    let m = g.arc_count();
    let (z, zeroed) = min_contributions(inst, eta);
    let per_arc: Vec<(f64, bool)> = (0..m)
        .into_par_iter()
        .map(|e| {
            let row = eta_row(inst, eta, e);
            let sol = solve_ccp_forced(g, &row, &[(e, false)], Sense::Max);
            if sol.is_feasible() {
                (sol.objective, false)
            } else {
                (solve_ccp(g, &row, Sense::Max).objective, true)
            }
        })
        .collect();
    let qmax = per_arc.iter().map(|&(v, _)| v).collect();
    let unavoidable = per_arc
        .iter()
        .enumerate()
        .filter_map(|(e, &(_, all))| all.then_some(e))
        .collect();
    Ok(GlVectors {
        z,
        qmax,
        zeroed,
        unavoidable,
    })
}

/// Classical bound: per-arc minima `z`, then the cheapest cover under `z`.
///
/// The subproblems run in parallel; `lp_stats` reports the final cover
/// solve's shape with zero iterations, since everything here is solved
/// combinatorially.
pub fn gl_classical(inst: &QccpInstance, eta: f64) -> Result<BoundReport, BoundError> {
    check_eta(eta);
    ensure_cover(inst)?;
    let g = inst.graph();
    let start = Instant::now();
    let (z, zeroed) = min_contributions(inst, eta);
    let ccp = solve_ccp(g, &z, Sense::Min);
    let mut dual_y = ccp.tail_duals.clone();
    dual_y.extend_from_slice(&ccp.head_duals);
    let report = BoundReport {
        name: "gl".into(),
        value: ccp.objective,
        p_hat: Some(z),
        dual_y: Some(dual_y),
        witnesses: Witnesses::default(),
        skew: None,
        zeroed_arcs: Some(zeroed),
        lp_stats: LpStats {
            rows: 2 * g.node_count(),
            cols: g.arc_count(),
            iterations: 0,
            seconds: start.elapsed().as_secs_f64(),
        },
    };
    debug_check_report(inst, &report);
    Ok(report)
}

/// Classical bound as one LP: a fractional cover `x` plus, per arc, a
/// fractional cover `y_{e,:}` activated when `x_e` is.  Uses
/// [`DEFAULT_ROW_CAP`].
///
/// The row duals are exactly the support matrices of the linearization
/// view, so the report carries the same certificate shape as [`gl_as_lbb`].
pub fn gl_compact(inst: &QccpInstance, eta: f64) -> Result<BoundReport, BoundError> {
    gl_compact_with_cap(inst, eta, DEFAULT_ROW_CAP)
}

pub fn gl_compact_with_cap(
    inst: &QccpInstance,
    eta: f64,
    row_cap: usize,
) -> Result<BoundReport, BoundError> {
    check_eta(eta);
    ensure_cover(inst)?;
    let g = inst.graph();
    let (n, m) = (g.node_count(), g.arc_count());
    let rows = 2 * m * n + m + 2 * n;
    if rows > row_cap {
        return Err(BoundError::RowCap { rows, cap: row_cap });
    }
    let mut lp = LpProblem::new(Sense::Min);
    let vx = |e: usize| e;
    let vy = |e: usize, f: usize| m + e * m + f;
    for _ in 0..m {
        lp.add_var(0.0, 0.0, f64::INFINITY);
    }
    for e in 0..m {
        let row = eta_row(inst, eta, e);
        for f in 0..m {
            lp.add_var(row[f], 0.0, f64::INFINITY);
        }
    }
    // Row order fixes the dual layout: the two per-node families, then the
    // diagonal links, then the cover equalities.
    for e in 0..m {
        for i in 0..n {
            let mut coeffs = vec![(vx(e), -1.0)];
            coeffs.extend(g.out_arcs(i).iter().map(|&f| (vy(e, f), 1.0)));
            lp.add_row(&coeffs, Relation::Eq, 0.0);
        }
    }
    for e in 0..m {
        for i in 0..n {
            let mut coeffs = vec![(vx(e), -1.0)];
            coeffs.extend(g.in_arcs(i).iter().map(|&f| (vy(e, f), 1.0)));
            lp.add_row(&coeffs, Relation::Eq, 0.0);
        }
    }
    for e in 0..m {
        lp.add_row(&[(vy(e, e), 1.0), (vx(e), -1.0)], Relation::Eq, 0.0);
    }
    for i in 0..n {
        let coeffs: Vec<_> = g.out_arcs(i).iter().map(|&e| (vx(e), 1.0)).collect();
        lp.add_row(&coeffs, Relation::Eq, 1.0);
    }
    for i in 0..n {
        let coeffs: Vec<_> = g.in_arcs(i).iter().map(|&e| (vx(e), 1.0)).collect();
        lp.add_row(&coeffs, Relation::Eq, 1.0);
    }

    let start = Instant::now();
    let sol = lp.solve();
    let lp_stats = LpStats {
        rows: lp.num_rows(),
        cols: lp.num_vars(),
        iterations: sol.iterations,
        seconds: start.elapsed().as_secs_f64(),
    };
    assert_eq!(sol.status, LpStatus::Optimal, "compact GL LP must solve");
    let lam = |e: usize, i: usize| sol.duals[e * n + i];
    let alp = |e: usize, i: usize| sol.duals[m * n + e * n + i];
    let theta = |e: usize| sol.duals[2 * m * n + e];
    let b_mat: Vec<Vec<f64>> = (0..m)
        .map(|e| (0..n).map(|i| lam(e, i)).collect())
        .collect();
    let c_mat: Vec<Vec<f64>> = (0..m)
        .map(|e| (0..n).map(|i| alp(e, i)).collect())
        .collect();
    let t: Vec<f64> = (0..m).map(theta).collect();
    let p_hat: Vec<f64> = (0..m)
        .map(|e| t[e] + b_mat[e].iter().sum::<f64>() + c_mat[e].iter().sum::<f64>())
        .collect();
    let dual_y: Vec<f64> = sol.duals[2 * m * n + m..2 * m * n + m + 2 * n].to_vec();
    let report = BoundReport {
        name: "gl-compact".into(),
        value: sol.objective,
        p_hat: Some(p_hat),
        dual_y: Some(dual_y),
        witnesses: Witnesses {
            b_mat: Some(b_mat),
            c_mat: Some(c_mat),
            t: Some(t),
            ..Witnesses::default()
        },
        skew: None,
        zeroed_arcs: None,
        lp_stats,
    };
    debug_check_report(inst, &report);
    Ok(report)
}

/// Classical bound reached as a linearization based bound over matrices
/// `Q̂_ef = B_{e,f⁺} + C_{e,f⁻}` (all ordered pairs) with a diagonal slack
/// `t` riding into `p̂`.  Uses [`DEFAULT_ROW_CAP`].
pub fn gl_as_lbb(inst: &QccpInstance, eta: f64) -> Result<BoundReport, BoundError> {
    gl_as_lbb_with_cap(inst, eta, DEFAULT_ROW_CAP)
}

pub fn gl_as_lbb_with_cap(
    inst: &QccpInstance,
    eta: f64,
    row_cap: usize,
) -> Result<BoundReport, BoundError> {
    check_eta(eta);
    ensure_cover(inst)?;
    let g = inst.graph();
    let (n, m) = (g.node_count(), g.arc_count());
    let rows = m + m * m;
    if rows > row_cap {
        return Err(BoundError::RowCap { rows, cap: row_cap });
    }
    let mut lp = LpProblem::new(Sense::Max);
    let yu = |i: usize| i;
    let yv = |i: usize| n + i;
    let vb = |e: usize, i: usize| 2 * n + e * n + i;
    let vc = |e: usize, i: usize| 2 * n + m * n + e * n + i;
    let vt = |e: usize| 2 * n + 2 * m * n + e;
    for _ in 0..2 * n {
        lp.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
    }
    for _ in 0..2 * m * n + m {
        lp.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY);
    }
    for e in 0..m {
        let mut coeffs = vec![
            (yu(g.tail(e)), 1.0),
            (yv(g.head(e)), 1.0),
            (vt(e), -1.0),
        ];
        for i in 0..n {
            coeffs.push((vb(e, i), -1.0));
            coeffs.push((vc(e, i), -1.0));
        }
        lp.add_row(&coeffs, Relation::Le, 0.0);
    }
    for e in 0..m {
        for f in 0..m {
            if f == e {
                lp.add_row(
                    &[
                        (vb(e, g.tail(e)), 1.0),
                        (vc(e, g.head(e)), 1.0),
                        (vt(e), 1.0),
                    ],
                    Relation::Le,
                    inst.q(e, e),
                );
            } else {
                let rhs = eta * inst.q(e, f) + (1.0 - eta) * inst.q(f, e);
                lp.add_row(
                    &[(vb(e, g.tail(f)), 1.0), (vc(e, g.head(f)), 1.0)],
                    Relation::Le,
                    rhs,
                );
            }
        }
    }

    let start = Instant::now();
    let sol = lp.solve();
    let lp_stats = LpStats {
        rows: lp.num_rows(),
        cols: lp.num_vars(),
        iterations: sol.iterations,
        seconds: start.elapsed().as_secs_f64(),
    };
    assert_eq!(sol.status, LpStatus::Optimal, "GL bound LP must solve");
    let b_mat: Vec<Vec<f64>> = (0..m)
        .map(|e| (0..n).map(|i| sol.primal[vb(e, i)]).collect())
        .collect();
    let c_mat: Vec<Vec<f64>> = (0..m)
        .map(|e| (0..n).map(|i| sol.primal[vc(e, i)]).collect())
        .collect();
    let t: Vec<f64> = (0..m).map(|e| sol.primal[vt(e)]).collect();
    let p_hat: Vec<f64> = (0..m)
        .map(|e| t[e] + b_mat[e].iter().sum::<f64>() + c_mat[e].iter().sum::<f64>())
        .collect();
    let report = BoundReport {
        name: "gl-lbb".into(),
        value: sol.objective,
        p_hat: Some(p_hat),
        dual_y: Some(sol.primal[..2 * n].to_vec()),
        witnesses: Witnesses {
            b_mat: Some(b_mat),
            c_mat: Some(c_mat),
            t: Some(t),
            ..Witnesses::default()
        },
        skew: None,
        zeroed_arcs: None,
        lp_stats,
    };
    debug_check_report(inst, &report);
    Ok(report)
}

/// Relaxation of the big-M exact formulation: per arc, a cost variable at
/// least `z_e x_e` and at least the arc's row cost minus a deactivation
/// term scaled by `qmax`.  Dominates [`gl_classical`] at the same `η`.
pub fn milp_bound(inst: &QccpInstance, eta: f64) -> Result<BoundReport, BoundError> {
    check_eta(eta);
    let vectors = gl_vectors(inst, eta)?;
    let g = inst.graph();
    let (n, m) = (g.node_count(), g.arc_count());
    let mut lp = LpProblem::new(Sense::Min);
    let vx = |e: usize| e;
    let vy = |e: usize| m + e;
    for _ in 0..m {
        lp.add_var(0.0, 0.0, f64::INFINITY);
    }
    for _ in 0..m {
        lp.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
    }
    for i in 0..n {
        let coeffs: Vec<_> = g.out_arcs(i).iter().map(|&e| (vx(e), 1.0)).collect();
        lp.add_row(&coeffs, Relation::Eq, 1.0);
    }
    for i in 0..n {
        let coeffs: Vec<_> = g.in_arcs(i).iter().map(|&e| (vx(e), 1.0)).collect();
        lp.add_row(&coeffs, Relation::Eq, 1.0);
    }
    for e in 0..m {
        lp.add_row(
            &[(vy(e), 1.0), (vx(e), -vectors.z[e])],
            Relation::Ge,
            0.0,
        );
    }
    for e in 0..m {
        let row = eta_row(inst, eta, e);
        let mut coeffs = vec![(vy(e), 1.0)];
        for (f, &q) in row.iter().enumerate() {
            let mut coef = -q;
            if f == e {
                coef -= vectors.qmax[e];
            }
            if coef != 0.0 {
                coeffs.push((vx(f), coef));
            }
        }
        lp.add_row(&coeffs, Relation::Ge, -vectors.qmax[e]);
    }

    let start = Instant::now();
    let sol = lp.solve();
    let lp_stats = LpStats {
        rows: lp.num_rows(),
        cols: lp.num_vars(),
        iterations: sol.iterations,
        seconds: start.elapsed().as_secs_f64(),
    };
    assert_eq!(sol.status, LpStatus::Optimal, "relaxed MILP must solve");
    Ok(BoundReport {
        name: "milp".into(),
        value: sol.objective,
        p_hat: None,
        dual_y: None,
        witnesses: Witnesses::default(),
        skew: None,
        zeroed_arcs: Some(vectors.zeroed),
        lp_stats,
    })
}

/// First level RLT relaxation.  Uses [`DEFAULT_ROW_CAP`].
///
/// Pair variables `y_ef = y_fe` (one per unordered pair) are tied to `x`
/// by both per-node families of product constraints; `y_ee` collapses to
/// `x_e`.  Symmetry makes the value independent of `η`, and the constraint
/// set contains the compact GL formulation's, so this dominates the whole
/// classical family.
pub fn rlt1(inst: &QccpInstance) -> Result<BoundReport, BoundError> {
    rlt1_with_cap(inst, DEFAULT_ROW_CAP)
}

pub fn rlt1_with_cap(inst: &QccpInstance, row_cap: usize) -> Result<BoundReport, BoundError> {
    ensure_cover(inst)?;
    let g = inst.graph();
    let (n, m) = (g.node_count(), g.arc_count());
    let rows = 2 * m * n + 2 * n;
    if rows > row_cap {
        return Err(BoundError::RowCap { rows, cap: row_cap });
    }
    let mut lp = LpProblem::new(Sense::Min);
    // x_e first, then one variable per unordered pair e < f.
    let vx = |e: usize| e;
    let pair = |e: usize, f: usize| {
        let (a, b) = if e < f { (e, f) } else { (f, e) };
        m + a * m - a * (a + 1) / 2 + (b - a - 1)
    };
    for e in 0..m {
        lp.add_var(inst.q(e, e), 0.0, f64::INFINITY);
    }
    for e in 0..m {
        for f in e + 1..m {
            lp.add_var(inst.q(e, f) + inst.q(f, e), 0.0, f64::INFINITY);
        }
    }
    for i in 0..n {
        let coeffs: Vec<_> = g.out_arcs(i).iter().map(|&e| (vx(e), 1.0)).collect();
        lp.add_row(&coeffs, Relation::Eq, 1.0);
    }
    for i in 0..n {
        let coeffs: Vec<_> = g.in_arcs(i).iter().map(|&e| (vx(e), 1.0)).collect();
        lp.add_row(&coeffs, Relation::Eq, 1.0);
    }
    // Degree rows multiplied by x_e: the product of x_e with arcs out of
    // (into) each node must add up to x_e again.  When e itself leaves
    // (enters) the node, y_ee = x_e cancels the right hand side.
    for e in 0..m {
        for i in 0..n {
            let mut coeffs: Vec<(usize, f64)> = g
                .out_arcs(i)
                .iter()
                .filter(|&&f| f != e)
                .map(|&f| (pair(e, f), 1.0))
                .collect();
            if g.tail(e) != i {
                coeffs.push((vx(e), -1.0));
            }
            lp.add_row(&coeffs, Relation::Eq, 0.0);
        }
    }
    for e in 0..m {
        for i in 0..n {
            let mut coeffs: Vec<(usize, f64)> = g
                .in_arcs(i)
                .iter()
                .filter(|&&f| f != e)
                .map(|&f| (pair(e, f), 1.0))
                .collect();
            if g.head(e) != i {
                coeffs.push((vx(e), -1.0));
            }
            lp.add_row(&coeffs, Relation::Eq, 0.0);
        }
    }

    let start = Instant::now();
    let sol = lp.solve();
    let lp_stats = LpStats {
        rows: lp.num_rows(),
        cols: lp.num_vars(),
        iterations: sol.iterations,
        seconds: start.elapsed().as_secs_f64(),
    };
    assert_eq!(sol.status, LpStatus::Optimal, "RLT relaxation must solve");
    Ok(BoundReport {
        name: "rlt1".into(),
        value: sol.objective,
        p_hat: None,
        dual_y: None,
        witnesses: Witnesses::default(),
        skew: None,
        zeroed_arcs: None,
        lp_stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::instance::SupportMode;
    use crate::lbb::lbb1;
    use crate::oracle::{solve_exact, EnumerationBudget};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bidirected_triangle() -> Digraph {
        Digraph::new(3, &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]).unwrap()
    }

    fn succ_instance(g: Digraph, entries: &[(usize, usize, f64)]) -> QccpInstance {
        QccpInstance::new(g, entries, SupportMode::SuccessorOnly).unwrap()
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> Option<QccpInstance> {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(0.6) {
                    arcs.push((i, j));
                }
            }
        }
        let g = Digraph::new(n, &arcs).ok()?;
        if !solve_ccp(&g, &vec![0.0; g.arc_count()], Sense::Min).is_feasible() {
            return None;
        }
        let entries: Vec<(usize, usize, f64)> = g
            .succ_pairs()
            .to_vec()
            .into_iter()
            .map(|(e, f)| (e, f, rng.gen_range(1..=100) as f64))
            .collect();
        Some(succ_instance(g, &entries))
    }

    #[test]
    fn zero_matrix_gives_zero_everywhere() {
        let inst = succ_instance(bidirected_triangle(), &[]);
        for (name, v) in [
            ("gl", gl_classical(&inst, DEFAULT_ETA).unwrap().value),
            ("gl-compact", gl_compact(&inst, DEFAULT_ETA).unwrap().value),
            ("gl-lbb", gl_as_lbb(&inst, DEFAULT_ETA).unwrap().value),
            ("milp", milp_bound(&inst, DEFAULT_ETA).unwrap().value),
            ("rlt1", rlt1(&inst).unwrap().value),
        ] {
            assert!(v.abs() <= 1e-7, "{name} = {v}");
        }
    }

    #[test]
    fn unit_triangle_is_exact_for_the_whole_family() {
        let g = bidirected_triangle();
        let entries: Vec<(usize, usize, f64)> =
            g.succ_pairs().iter().map(|&(e, f)| (e, f, 1.0)).collect();
        let inst = succ_instance(g, &entries);
        for (name, v) in [
            ("gl", gl_classical(&inst, DEFAULT_ETA).unwrap().value),
            ("gl-compact", gl_compact(&inst, DEFAULT_ETA).unwrap().value),
            ("gl-lbb", gl_as_lbb(&inst, DEFAULT_ETA).unwrap().value),
            ("milp", milp_bound(&inst, DEFAULT_ETA).unwrap().value),
            ("rlt1", rlt1(&inst).unwrap().value),
        ] {
            assert!((v - 3.0).abs() <= 1e-6, "{name} = {v}");
        }
    }

    #[test]
    fn single_cover_graph_is_exact_at_any_eta() {
        let g = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        let inst = succ_instance(g, &[(0, 1, 7.0), (1, 0, 4.0)]);
        let (opt, _) = solve_exact(&inst, &EnumerationBudget::default()).unwrap();
        assert_eq!(opt, 11.0);
        for eta in [0.0, 0.2, 0.5, 1.0] {
            let v = gl_classical(&inst, eta).unwrap().value;
            assert!((v - opt).abs() <= 1e-9, "eta {eta}: {v}");
        }
    }

    #[test]
    fn compact_and_lbb_forms_match_the_classical_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 5 {
            let n = rng.gen_range(4..8);
            let Some(inst) = random_instance(&mut rng, n) else {
                continue;
            };
            for eta in [0.5, 0.3] {
                let v_cl = gl_classical(&inst, eta).unwrap().value;
                let v_co = gl_compact(&inst, eta).unwrap().value;
                let v_lb = gl_as_lbb(&inst, eta).unwrap().value;
                let tol = 1e-6 * (1.0 + v_cl.abs());
                assert!((v_cl - v_co).abs() <= tol, "classical {v_cl} vs compact {v_co}");
                assert!((v_co - v_lb).abs() <= tol, "compact {v_co} vs lbb form {v_lb}");
            }
            done += 1;
        }
    }

    #[test]
    fn milp_dominates_classical_and_respects_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut done = 0;
        while done < 5 {
            let n = rng.gen_range(4..7);
            let Some(inst) = random_instance(&mut rng, n) else {
                continue;
            };
            let Ok((opt, _)) = solve_exact(&inst, &EnumerationBudget::default()) else {
                continue;
            };
            for eta in [0.5, 0.8] {
                let v_gl = gl_classical(&inst, eta).unwrap().value;
                let v_milp = milp_bound(&inst, eta).unwrap().value;
                assert!(
                    v_milp >= v_gl - 1e-6 * (1.0 + v_gl.abs()),
                    "milp {v_milp} < gl {v_gl} at eta {eta}"
                );
                assert!(v_milp <= opt + 1e-6 * (1.0 + opt.abs()));
            }
            done += 1;
        }
    }

    #[test]
    fn rlt_dominates_the_compact_form_and_lbb1() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut done = 0;
        while done < 5 {
            let n = rng.gen_range(4..7);
            let Some(inst) = random_instance(&mut rng, n) else {
                continue;
            };
            let v_rlt = rlt1(&inst).unwrap().value;
            let v_co = gl_compact(&inst, DEFAULT_ETA).unwrap().value;
            let v_l1 = lbb1(&inst).unwrap().value;
            assert!(v_rlt >= v_co - 1e-6 * (1.0 + v_co.abs()), "rlt {v_rlt} < compact {v_co}");
            assert!(v_rlt >= v_l1 - 1e-6 * (1.0 + v_l1.abs()), "rlt {v_rlt} < lbb1 {v_l1}");
            done += 1;
        }
    }

    #[test]
    fn dead_arcs_are_zeroed_and_reported() {
        // (1,0) closes a 2-cycle that would leave node 2 uncovered, so no
        // cover contains it.
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap();
        let entries: Vec<(usize, usize, f64)> =
            g.succ_pairs().iter().map(|&(e, f)| (e, f, 2.0)).collect();
        let inst = succ_instance(g, &entries);
        let report = gl_classical(&inst, DEFAULT_ETA).unwrap();
        assert_eq!(report.zeroed_arcs.as_deref(), Some(&[3][..]));
        assert_eq!(report.p_hat.as_ref().unwrap()[3], 0.0);
        // The unique cover realizes three pairs at cost 2 each.
        assert!((report.value - 6.0).abs() <= 1e-9);
        let vectors = gl_vectors(&inst, DEFAULT_ETA).unwrap();
        assert_eq!(vectors.zeroed, vec![3]);
        // Every cover (there is one) uses arcs 0, 1, 2.
        assert_eq!(vectors.unavoidable, vec![0, 1, 2]);
    }

    #[test]
    fn eta_row_splits_pair_costs_between_endpoints() {
        let g = bidirected_triangle();
        let pairs = g.succ_pairs().to_vec();
        let entries: Vec<(usize, usize, f64)> = pairs
            .iter()
            .enumerate()
            .map(|(k, &(e, f))| (e, f, (k + 1) as f64))
            .collect();
        let inst = succ_instance(g, &entries);
        for eta in [0.0, 0.4, 1.0] {
            let mut total = 0.0;
            for e in 0..inst.graph().arc_count() {
                total += eta_row(&inst, eta, e).iter().sum::<f64>();
            }
            let plain: f64 = entries.iter().map(|&(_, _, v)| v).sum();
            assert!((total - plain).abs() <= 1e-9, "mass must be conserved");
        }
    }
}
