//! Linearization based lower bounds.
//!
//! Each bound searches a polyhedron of linearizable matrices `Q̂` lying
//! elementwise below `Q` and maximizes the optimal cover value of the
//! resulting linearization vector `p̂`.  Both the search and the inner
//! cover problem (in dual form, `max 1ᵀy` with `y` the node potentials)
//! collapse into one joint LP per bound:
//!
//! * [`lbb1`]: `Q̂_ef = b_e + c_f` on successor pairs, `p̂ = b + c`.
//! * [`lbb1_skew`]: same, plus a skew symmetric slack supported on pairs
//!   of mutually reverse arcs, which can only widen the polyhedron.
//! * [`lbb2`]: the restricted node indexed split (`b`, `t` per arc, `C`,
//!   `D` node indexed), constraining all ordered arc pairs.
//! * [`lbb3`]: the full node indexed split with four support matrices.
//!
//! The bounds are ordered `lbb1 <= lbb2 <= lbb3 <= OPT`, with
//! `lbb1 <= lbb1_skew`.
//!
//! Diagonal entries of `Q` are linear costs: every bound moves them into
//! `p̂` unchanged and pins the corresponding `Q̂` diagonal at zero, which
//! coincides with the classical formulations whenever the diagonal is zero
//! and keeps the ordering chain intact when it is not.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ccp::solve_ccp;
use crate::instance::{QccpInstance, SupportMode};
use crate::linearize::Witnesses;
use crate::lp::{LpProblem, LpSolution, LpStatus, Relation, Sense};

/// Default cap on constraint rows for the quadratic size bounds.
pub const DEFAULT_ROW_CAP: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("graph has no cycle cover, bound undefined")]
    NoCover,
    #[error("bound needs {rows} constraint rows, cap is {cap}")]
    RowCap { rows: usize, cap: usize },
}

/// Size and effort of a bound's LP solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpStats {
    pub rows: usize,
    pub cols: usize,
    pub iterations: usize,
    pub seconds: f64,
}

/// A computed lower bound with its certificate.
///
/// For bounds certified by a linearization vector, `value` equals the sum
/// of the node potentials `dual_y` and, by duality, the optimal cover
/// value under `p_hat`; the witnesses reconstruct the linearizable matrix
/// lying below `Q`.  Relaxation bounds without such a vector (the MILP and
/// RLT relaxations) leave those fields empty and stand on their LP value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    /// Linearization vector of the optimizing matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_hat: Option<Vec<f64>>,
    /// Node potentials: tail potentials for all nodes, then head potentials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_y: Option<Vec<f64>>,
    #[serde(default)]
    pub witnesses: Witnesses,
    /// Skew slack entries `(e, f, value)`, present only for the skew bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew: Option<Vec<(usize, usize, f64)>>,
    /// Arcs whose forced subproblem was infeasible and contributed zero,
    /// present only for the bounds built from per-arc subproblems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeroed_arcs: Option<Vec<usize>>,
    pub lp_stats: LpStats,
}

pub(crate) fn ensure_cover(inst: &QccpInstance) -> Result<(), BoundError> {
    assert_eq!(
        inst.support_mode(),
        SupportMode::SuccessorOnly,
        "bounds read successor structure"
    );
    let m = inst.graph().arc_count();
    if solve_ccp(inst.graph(), &vec![0.0; m], Sense::Min).is_feasible() {
        Ok(())
    } else {
        Err(BoundError::NoCover)
    }
}

fn solve_and_time(lp: &LpProblem) -> (LpSolution, LpStats) {
    let start = Instant::now();
    let sol = lp.solve();
    let stats = LpStats {
        rows: lp.num_rows(),
        cols: lp.num_vars(),
        iterations: sol.iterations,
        seconds: start.elapsed().as_secs_f64(),
    };
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "bound LP must solve to optimality once a cover exists"
    );
    (sol, stats)
}

#[cfg(debug_assertions)]
pub(crate) fn debug_check_report(inst: &QccpInstance, report: &BoundReport) {
    // The potentials and the linearization vector must certify the same
    // number, and the reported value is exactly the potential sum.
    if let Some(dual_y) = &report.dual_y {
        let dual: f64 = dual_y.iter().sum();
        debug_assert!(
            (dual - report.value).abs() <= 1e-6 * (1.0 + report.value.abs()),
            "{}: potentials sum to {dual}, value is {}",
            report.name,
            report.value
        );
    }
    if let Some(p_hat) = &report.p_hat {
        let ccp = solve_ccp(inst.graph(), p_hat, Sense::Min);
        debug_assert!(ccp.is_feasible());
        debug_assert!(
            (ccp.objective - report.value).abs() <= 1e-6 * (1.0 + report.value.abs()),
            "{}: certified {} but OPT(p_hat) = {}",
            report.name,
            report.value,
            ccp.objective
        );
    }
}

#[cfg(not(debug_assertions))]
pub(crate) fn debug_check_report(_: &QccpInstance, _: &BoundReport) {}

/// Strongest bound from additive splits `Q̂_ef = b_e + c_f` on successor
/// pairs.
pub fn lbb1(inst: &QccpInstance) -> Result<BoundReport, BoundError> {
    lbb1_impl(inst, false)
}

/// [`lbb1`] widened by a skew symmetric slack.
///
/// A skew matrix prices every cover at zero, so adding one to `Q̂` keeps it
/// linearizable with the same vector while loosening the elementwise
/// comparison against `Q`.  Restricting the slack to the successor support
/// forces it to zero except on mutually reverse arc pairs, so graphs
/// without 2-cycles gain nothing.
pub fn lbb1_skew(inst: &QccpInstance) -> Result<BoundReport, BoundError> {
    lbb1_impl(inst, true)
}

fn lbb1_impl(inst: &QccpInstance, skew: bool) -> Result<BoundReport, BoundError> {
    ensure_cover(inst)?;
    let g = inst.graph();
    let (n, m) = (g.node_count(), g.arc_count());
    let mut lp = LpProblem::new(Sense::Max);
    let yu = |i: usize| i;
    let yv = |i: usize| n + i;
    let vb = |e: usize| 2 * n + e;
    let vc = |e: usize| 2 * n + m + e;
    for i in 0..2 * n {
        let col = lp.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
        lp.name_var(col, if i < n { format!("yu{i}") } else { format!("yv{}", i - n) });
    }
    for e in 0..m {
        let col = lp.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY);
        lp.name_var(col, format!("b{e}"));
    }
    for e in 0..m {
        let col = lp.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY);
        lp.name_var(col, format!("c{e}"));
    }
    // One slack per unordered pair of mutually reverse arcs, entering the
    // two orientations with opposite signs.
    let mut skew_var = vec![usize::MAX; m];
    if skew {
        for e in 0..m {
            if let Some(r) = g.arc_id(g.head(e), g.tail(e)) {
                if e < r {
                    let col = lp.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY);
                    lp.name_var(col, format!("s{e}_{r}"));
                    skew_var[e] = col;
                    skew_var[r] = col;
                }
            }
        }
    }
    for e in 0..m {
        lp.add_row(
            &[
                (yu(g.tail(e)), 1.0),
                (yv(g.head(e)), 1.0),
                (vb(e), -1.0),
                (vc(e), -1.0),
            ],
            Relation::Le,
            inst.q(e, e),
        );
    }
    for &(e, f) in g.succ_pairs() {
        let mut coeffs = vec![(vb(e), 1.0), (vc(f), 1.0)];
        if skew && f == g.arc_id(g.head(e), g.tail(e)).unwrap_or(usize::MAX) {
            let col = skew_var[e];
            if col != usize::MAX {
                coeffs.push((col, if e < f { 1.0 } else { -1.0 }));
            }
        }
        lp.add_row(&coeffs, Relation::Le, inst.q(e, f));
    }

    let (sol, lp_stats) = solve_and_time(&lp);
    let b: Vec<f64> = (0..m).map(|e| sol.primal[vb(e)]).collect();
    let c: Vec<f64> = (0..m).map(|e| sol.primal[vc(e)]).collect();
    let p_hat: Vec<f64> = (0..m).map(|e| inst.q(e, e) + b[e] + c[e]).collect();
    let skew_entries = skew.then(|| {
        let mut out = Vec::new();
        for e in 0..m {
            let col = skew_var[e];
            if col != usize::MAX {
                let r = g.arc_id(g.head(e), g.tail(e)).unwrap();
                let sign = if e < r { 1.0 } else { -1.0 };
                out.push((e, r, sign * sol.primal[col]));
            }
        }
        out
    });
    let report = BoundReport {
        name: if skew { "lbb1-skew" } else { "lbb1" }.into(),
        value: sol.objective,
        p_hat: Some(p_hat),
        dual_y: Some(sol.primal[..2 * n].to_vec()),
        witnesses: Witnesses {
            b: Some(b),
            c: Some(c),
            ..Witnesses::default()
        },
        skew: skew_entries,
        zeroed_arcs: None,
        lp_stats,
    };
    debug_check_report(inst, &report);
    Ok(report)
}

/// Strongest bound from restricted node indexed splits, with per-arc `b`,
/// `t` and node indexed `C`, `D`; constrains all ordered arc pairs, so the
/// LP has `m^2` pair rows.  Uses [`DEFAULT_ROW_CAP`].
pub fn lbb2(inst: &QccpInstance) -> Result<BoundReport, BoundError> {
    lbb2_with_cap(inst, DEFAULT_ROW_CAP)
}

pub fn lbb2_with_cap(inst: &QccpInstance, row_cap: usize) -> Result<BoundReport, BoundError> {
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
    let vb = |e: usize| 2 * n + e;
    let vt = |e: usize| 2 * n + m + e;
    let vc = |e: usize, k: usize| 2 * n + 2 * m + e * n + k;
    let vd = |k: usize, e: usize| 2 * n + 2 * m + m * n + k * m + e;
    for _ in 0..2 * n {
        lp.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
    }
    for _ in 0..2 * m + 2 * m * n {
        lp.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY);
    }
    for e in 0..m {
        let mut coeffs = vec![
            (yu(g.tail(e)), 1.0),
            (yv(g.head(e)), 1.0),
            (vb(e), -1.0),
            (vt(e), -1.0),
        ];
        for k in 0..n {
            coeffs.push((vc(e, k), -1.0));
            coeffs.push((vd(k, e), -1.0));
        }
        lp.add_row(&coeffs, Relation::Le, inst.q(e, e));
    }
    for e in 0..m {
        for f in 0..m {
            if f == e {
                // The matrix diagonal stays at zero; those costs ride in p.
                lp.add_row(
                    &[(vc(e, g.head(e)), 1.0), (vd(g.tail(e), e), 1.0)],
                    Relation::Le,
                    0.0,
                );
            } else if g.head(e) == g.tail(f) {
                lp.add_row(
                    &[
                        (vb(e), 1.0),
                        (vc(e, g.head(f)), 1.0),
                        (vd(g.tail(e), f), 1.0),
                        (vt(f), 1.0),
                    ],
                    Relation::Le,
                    inst.q(e, f),
                );
            } else {
                lp.add_row(
                    &[(vc(e, g.head(f)), 1.0), (vd(g.tail(e), f), 1.0)],
                    Relation::Le,
                    inst.q(e, f),
                );
            }
        }
    }

    let (sol, lp_stats) = solve_and_time(&lp);
    let b: Vec<f64> = (0..m).map(|e| sol.primal[vb(e)]).collect();
    let t: Vec<f64> = (0..m).map(|e| sol.primal[vt(e)]).collect();
    let c_mat: Vec<Vec<f64>> = (0..m)
        .map(|e| (0..n).map(|k| sol.primal[vc(e, k)]).collect())
        .collect();
    let d_mat: Vec<Vec<f64>> = (0..n)
        .map(|k| (0..m).map(|e| sol.primal[vd(k, e)]).collect())
        .collect();
    let p_hat: Vec<f64> = (0..m)
        .map(|e| {
            inst.q(e, e)
                + b[e]
                + t[e]
                + c_mat[e].iter().sum::<f64>()
                + (0..n).map(|k| d_mat[k][e]).sum::<f64>()
        })
        .collect();
    let report = BoundReport {
        name: "lbb2".into(),
        value: sol.objective,
        p_hat: Some(p_hat),
        dual_y: Some(sol.primal[..2 * n].to_vec()),
        witnesses: Witnesses {
            b: Some(b),
            t: Some(t),
            c_mat: Some(c_mat),
            d_mat: Some(d_mat),
            ..Witnesses::default()
        },
        skew: None,
        zeroed_arcs: None,
        lp_stats,
    };
    debug_check_report(inst, &report);
    Ok(report)
}

/// Strongest bound from full node indexed splits with four support
/// matrices; constrains all ordered arc pairs.  Uses [`DEFAULT_ROW_CAP`].
pub fn lbb3(inst: &QccpInstance) -> Result<BoundReport, BoundError> {
    lbb3_with_cap(inst, DEFAULT_ROW_CAP)
}

pub fn lbb3_with_cap(inst: &QccpInstance, row_cap: usize) -> Result<BoundReport, BoundError> {
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
    let vb = |e: usize, k: usize| 2 * n + e * n + k;
    let vc = |e: usize, k: usize| 2 * n + m * n + e * n + k;
    let vd = |k: usize, e: usize| 2 * n + 2 * m * n + k * m + e;
    let vt = |k: usize, e: usize| 2 * n + 3 * m * n + k * m + e;
    for _ in 0..2 * n {
        lp.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
    }
    for _ in 0..4 * m * n {
        lp.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY);
    }
    for e in 0..m {
        let mut coeffs = vec![(yu(g.tail(e)), 1.0), (yv(g.head(e)), 1.0)];
        for k in 0..n {
            coeffs.push((vb(e, k), -1.0));
            coeffs.push((vc(e, k), -1.0));
            coeffs.push((vd(k, e), -1.0));
            coeffs.push((vt(k, e), -1.0));
        }
        lp.add_row(&coeffs, Relation::Le, inst.q(e, e));
    }
    for e in 0..m {
        for f in 0..m {
            let rhs = if e == f { 0.0 } else { inst.q(e, f) };
            lp.add_row(
                &[
                    (vb(e, g.tail(f)), 1.0),
                    (vc(e, g.head(f)), 1.0),
                    (vd(g.tail(e), f), 1.0),
                    (vt(g.head(e), f), 1.0),
                ],
                Relation::Le,
                rhs,
            );
        }
    }

    let (sol, lp_stats) = solve_and_time(&lp);
    let grab_mn = |base: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<f64>> {
        (0..m)
            .map(|e| (0..n).map(|k| sol.primal[base(e, k)]).collect())
            .collect()
    };
    let grab_nm = |base: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<f64>> {
        (0..n)
            .map(|k| (0..m).map(|e| sol.primal[base(k, e)]).collect())
            .collect()
    };
    let b_mat = grab_mn(&vb);
    let c_mat = grab_mn(&vc);
    let d_mat = grab_nm(&vd);
    let t_mat = grab_nm(&vt);
    let p_hat: Vec<f64> = (0..m)
        .map(|e| {
            inst.q(e, e)
                + b_mat[e].iter().sum::<f64>()
                + c_mat[e].iter().sum::<f64>()
                + (0..n).map(|k| d_mat[k][e] + t_mat[k][e]).sum::<f64>()
        })
        .collect();
    let report = BoundReport {
        name: "lbb3".into(),
        value: sol.objective,
        p_hat: Some(p_hat),
        dual_y: Some(sol.primal[..2 * n].to_vec()),
        witnesses: Witnesses {
            b_mat: Some(b_mat),
            c_mat: Some(c_mat),
            d_mat: Some(d_mat),
            t_mat: Some(t_mat),
            ..Witnesses::default()
        },
        skew: None,
        zeroed_arcs: None,
        lp_stats,
    };
    debug_check_report(inst, &report);
    Ok(report)
}
