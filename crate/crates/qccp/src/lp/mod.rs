//! Self-contained linear programming solver.
//!
//! Bounded-variable revised simplex with Dantzig pricing (Bland's rule
//! after a degeneracy streak), a sparse LU basis factorization with
//! product-form updates, and refactorization every 100 pivots. Every
//! optimal solve returns row duals alongside the primal point: for a
//! minimization the dual of a `>=` row is nonnegative, of a `<=` row
//! nonpositive, of an `=` row free; for a maximization the signs swap.
//!
//! Defaults: `tol_feas = 1e-7` (primal and dual feasibility),
//! `tol_gap = 1e-6` (relative duality gap, asserted in debug builds on
//! every optimal solve). Both are overridable through [`SolveOptions`].

mod lu;
mod simplex;

use std::fmt::Write as _;

pub const TOL_FEAS: f64 = 1e-7;
pub const TOL_GAP: f64 = 1e-6;
/// Integrality recognition tolerance on totally unimodular systems.
pub const TOL_INT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective in the problem's own sense; NaN unless optimal.
    pub objective: f64,
    /// One value per structural variable; empty unless optimal.
    pub primal: Vec<f64>,
    /// One multiplier per row; empty unless optimal.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol_feas: f64,
    pub tol_gap: f64,
    /// 0 means automatic: scales with problem size.
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_feas: TOL_FEAS,
            tol_gap: TOL_GAP,
            max_iters: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Row {
    coeffs: Vec<(usize, f64)>,
    relation: Relation,
    rhs: f64,
    name: Option<String>,
}

/// Linear program under construction.
///
/// Variables and rows are added incrementally and referenced by the dense
/// indices the add methods return.
#[derive(Debug, Clone)]
pub struct LpProblem {
    sense: Sense,
    obj: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    var_names: Vec<Option<String>>,
    rows: Vec<Row>,
}

impl LpProblem {
    pub fn new(sense: Sense) -> Self {
        LpProblem {
            sense,
            obj: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            var_names: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Adds a variable with objective coefficient `obj` and bounds
    /// `[lower, upper]` (infinities allowed); returns its column index.
    pub fn add_var(&mut self, obj: f64, lower: f64, upper: f64) -> usize {
        assert!(!obj.is_nan() && !lower.is_nan() && !upper.is_nan(), "NaN in variable");
        assert!(obj.is_finite(), "objective coefficient must be finite");
        assert!(lower <= upper, "empty bound range [{lower}, {upper}]");
        self.obj.push(obj);
        self.lower.push(lower);
        self.upper.push(upper);
        self.var_names.push(None);
        self.obj.len() - 1
    }

    /// Adds a linear constraint; returns its row index. Coefficients on
    /// repeated columns are summed.
    pub fn add_row(&mut self, coeffs: &[(usize, f64)], relation: Relation, rhs: f64) -> usize {
        assert!(rhs.is_finite(), "rhs must be finite");
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for &(col, val) in coeffs {
            assert!(col < self.obj.len(), "row references unknown column {col}");
            assert!(val.is_finite(), "coefficient must be finite");
            merged.push((col, val));
        }
        merged.sort_unstable_by_key(|&(col, _)| col);
        merged.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 += later.1;
                true
            } else {
                false
            }
        });
        merged.retain(|&(_, val)| val != 0.0);
        self.rows.push(Row {
            coeffs: merged,
            relation,
            rhs,
            name: None,
        });
        self.rows.len() - 1
    }

    pub fn name_var(&mut self, col: usize, name: impl Into<String>) {
        self.var_names[col] = Some(name.into());
    }

    pub fn name_row(&mut self, row: usize, name: impl Into<String>) {
        self.rows[row].name = Some(name.into());
    }

    pub fn num_vars(&self) -> usize {
        self.obj.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn solve(&self) -> LpSolution {
        self.solve_with(&SolveOptions::default())
    }

    pub fn solve_with(&self, opts: &SolveOptions) -> LpSolution {
        simplex::solve(self, opts)
    }

    fn var_name(&self, col: usize) -> String {
        match &self.var_names[col] {
            Some(name) => name.clone(),
            None => format!("x{col}"),
        }
    }

    /// Renders the problem in CPLEX LP text format for cross-checking
    /// against external solvers.
    pub fn dump_lp(&self) -> String {
        let mut out = String::new();
        out.push_str(match self.sense {
            Sense::Min => "Minimize\n obj:",
            Sense::Max => "Maximize\n obj:",
        });
        let mut first = true;
        for (j, &c) in self.obj.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            write_term(&mut out, c, &self.var_name(j), first);
            first = false;
        }
        if first {
            out.push_str(" 0 x0");
        }
        out.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let rname = row.name.clone().unwrap_or_else(|| format!("r{i}"));
            write!(out, " {rname}:").expect("string write");
            let mut first = true;
            for &(col, val) in &row.coeffs {
                write_term(&mut out, val, &self.var_name(col), first);
                first = false;
            }
            if first {
                out.push_str(" 0 x0");
            }
            writeln!(out, " {} {}", row.relation.symbol(), row.rhs).expect("string write");
        }
        out.push_str("Bounds\n");
        for j in 0..self.obj.len() {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            let name = self.var_name(j);
            if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
                writeln!(out, " {name} free").expect("string write");
            } else if lo == f64::NEG_INFINITY {
                writeln!(out, " -inf <= {name} <= {hi}").expect("string write");
            } else if hi == f64::INFINITY {
                if lo != 0.0 {
                    writeln!(out, " {name} >= {lo}").expect("string write");
                }
            } else {
                writeln!(out, " {lo} <= {name} <= {hi}").expect("string write");
            }
        }
        out.push_str("End\n");
        out
    }

    pub(crate) fn internals(&self) -> (&[f64], &[f64], &[f64], &[Row]) {
        (&self.obj, &self.lower, &self.upper, &self.rows)
    }
}

fn write_term(out: &mut String, coeff: f64, name: &str, first: bool) {
    if first {
        if coeff < 0.0 {
            write!(out, " - {} {name}", -coeff).expect("string write");
        } else {
            write!(out, " {coeff} {name}").expect("string write");
        }
    } else if coeff < 0.0 {
        write!(out, " - {} {name}", -coeff).expect("string write");
    } else {
        write!(out, " + {coeff} {name}").expect("string write");
    }
}

impl Row {
    pub(crate) fn coeffs(&self) -> &[(usize, f64)] {
        &self.coeffs
    }

    pub(crate) fn relation(&self) -> Relation {
        self.relation
    }

    pub(crate) fn rhs(&self) -> f64 {
        self.rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_bound_via_row() {
        // min x s.t. x >= 3, x free
        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
        p.add_row(&[(x, 1.0)], Relation::Ge, 3.0);
        let sol = p.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 3.0).abs() < 1e-9);
        assert!((sol.primal[0] - 3.0).abs() < 1e-9);
        assert!((sol.duals[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ccp_dual_on_two_cycle() {
        // max 1ᵀy over [Uᵀ, Vᵀ] y <= p for the 2-cycle graph, p = (3, 4).
        // One row per arc: y_u[tail] + y_v[head] <= p_e.
        let mut p = LpProblem::new(Sense::Max);
        let yu: Vec<usize> = (0..2)
            .map(|_| p.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY))
            .collect();
        let yv: Vec<usize> = (0..2)
            .map(|_| p.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY))
            .collect();
        p.add_row(&[(yu[0], 1.0), (yv[1], 1.0)], Relation::Le, 3.0);
        p.add_row(&[(yu[1], 1.0), (yv[0], 1.0)], Relation::Le, 4.0);
        let sol = p.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 7.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(0.0, f64::NEG_INFINITY, f64::INFINITY);
        p.add_row(&[(x, 1.0)], Relation::Le, 0.0);
        p.add_row(&[(x, 1.0)], Relation::Ge, 1.0);
        assert_eq!(p.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(-1.0, 0.0, f64::INFINITY);
        p.add_row(&[(x, 1.0)], Relation::Ge, 1.0);
        assert_eq!(p.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn bound_flip_without_rows() {
        let mut p = LpProblem::new(Sense::Min);
        p.add_var(-2.0, 0.0, 5.0);
        let sol = p.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 10.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_inequality_duals() {
        // min 2x + 3y s.t. x + y = 5, x - y >= 1, x, y >= 0
        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(2.0, 0.0, f64::INFINITY);
        let y = p.add_var(3.0, 0.0, f64::INFINITY);
        p.add_row(&[(x, 1.0), (y, 1.0)], Relation::Eq, 5.0);
        p.add_row(&[(x, 1.0), (y, -1.0)], Relation::Ge, 1.0);
        let sol = p.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 10.0).abs() < 1e-9);
        assert!((sol.primal[0] - 5.0).abs() < 1e-9);
        assert!(sol.primal[1].abs() < 1e-9);
        assert!((sol.duals[0] - 2.0).abs() < 1e-9);
        assert!(sol.duals[1].abs() < 1e-9);
    }

    #[test]
    fn max_duals_flip_sign() {
        // max x + y s.t. x + 2y <= 4, x <= 3: dual of a <= row is >= 0
        let mut p = LpProblem::new(Sense::Max);
        let x = p.add_var(1.0, 0.0, f64::INFINITY);
        let y = p.add_var(1.0, 0.0, f64::INFINITY);
        p.add_row(&[(x, 1.0), (y, 2.0)], Relation::Le, 4.0);
        p.add_row(&[(x, 1.0)], Relation::Le, 3.0);
        let sol = p.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 3.5).abs() < 1e-9);
        assert!(sol.duals.iter().all(|&d| d >= -1e-9));
    }

    #[test]
    fn iteration_limit_reported() {
        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
        let y = p.add_var(1.0, f64::NEG_INFINITY, f64::INFINITY);
        p.add_row(&[(x, 1.0), (y, 1.0)], Relation::Ge, 2.0);
        p.add_row(&[(x, 1.0), (y, -1.0)], Relation::Ge, 0.0);
        let sol = p.solve_with(&SolveOptions {
            max_iters: 1,
            ..SolveOptions::default()
        });
        assert_eq!(sol.status, LpStatus::IterationLimit);
    }

    #[test]
    fn repeated_coefficients_merge() {
        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(1.0, 0.0, f64::INFINITY);
        p.add_row(&[(x, 1.0), (x, 1.0)], Relation::Ge, 4.0);
        let sol = p.solve();
        assert!((sol.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn empty_row_consistency() {
        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(1.0, 0.0, 1.0);
        p.add_row(&[(x, 0.0)], Relation::Le, 1.0);
        assert_eq!(p.solve().status, LpStatus::Optimal);

        let mut p = LpProblem::new(Sense::Min);
        let x = p.add_var(1.0, 0.0, 1.0);
        p.add_row(&[(x, 0.0)], Relation::Ge, 1.0);
        assert_eq!(p.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn random_feasible_problems_reach_optimal_or_unbounded() {
        // Problems built around a known feasible point can only be optimal
        // or unbounded; every optimal solve passes the debug-build duality
        // and feasibility assertions.
        use rand::{Rng, SeedableRng};
        let mut optimal = 0;
        for seed in 0..200u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let nv = rng.gen_range(2..8);
            let nr = rng.gen_range(1..8);
            let mut p = LpProblem::new(if rng.gen_bool(0.5) { Sense::Min } else { Sense::Max });
            let x0: Vec<f64> = (0..nv).map(|_| rng.gen_range(-3.0..3.0)).collect();
            for &x in &x0 {
                let c = rng.gen_range(-5.0..5.0_f64).round();
                match rng.gen_range(0..3) {
                    0 => p.add_var(c, x - rng.gen_range(0.0..4.0), x + rng.gen_range(0.0..4.0)),
                    1 => p.add_var(c, x - rng.gen_range(0.0..4.0), f64::INFINITY),
                    _ => p.add_var(c, f64::NEG_INFINITY, f64::INFINITY),
                };
            }
            for _ in 0..nr {
                let mut coeffs = Vec::new();
                for (j, &x) in x0.iter().enumerate() {
                    if rng.gen_bool(0.6) {
                        let v = rng.gen_range(-3.0..3.0_f64).round();
                        if v != 0.0 {
                            coeffs.push((j, v));
                            let _ = x;
                        }
                    }
                }
                let act: f64 = coeffs.iter().map(|&(j, v)| v * x0[j]).sum();
                match rng.gen_range(0..3) {
                    0 => p.add_row(&coeffs, Relation::Le, act + rng.gen_range(0.0..2.0)),
                    1 => p.add_row(&coeffs, Relation::Ge, act - rng.gen_range(0.0..2.0)),
                    _ => p.add_row(&coeffs, Relation::Eq, act),
                };
            }
            match p.solve().status {
                LpStatus::Optimal => optimal += 1,
                LpStatus::Unbounded => {}
                s => panic!("seed {seed}: unexpected status {s:?}"),
            }
        }
        assert!(optimal > 50);
    }

    #[test]
    fn dump_format() {
        let mut p = LpProblem::new(Sense::Max);
        let x = p.add_var(1.0, 0.0, f64::INFINITY);
        let y = p.add_var(-2.0, f64::NEG_INFINITY, 3.0);
        p.name_var(x, "alpha");
        p.add_row(&[(x, 1.0), (y, -1.5)], Relation::Le, 7.0);
        p.name_row(0, "cap");
        let text = p.dump_lp();
        assert!(text.starts_with("Maximize"));
        assert!(text.contains(" cap: 1 alpha - 1.5 x1 <= 7"));
        assert!(text.contains("-inf <= x1 <= 3"));
        assert!(text.ends_with("End\n"));
    }
}
