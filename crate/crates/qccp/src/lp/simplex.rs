//! Revised simplex core (bounded-variable, two-phase).

use super::lu::LuFactors;
use super::{LpProblem, LpSolution, LpStatus, Relation, Sense, SolveOptions};

/// Ratio-test denominator threshold; smaller pivots are treated as zero.
const PIV_TOL: f64 = 1e-9;
/// Steps at or below this count toward the degeneracy streak.
const DEGEN_STEP: f64 = 1e-10;
/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_TRIGGER: usize = 30;
const STALL_WINDOW: usize = 100;
const STALL_EPS: f64 = 1e-9;
const STALL_PATIENCE: usize = 5;
const PERT_BOUND: f64 = 1e-9;

/// Low-discrepancy weight in [0, 1) for column j; deterministic, so
/// solves stay reproducible.
fn golden_frac(j: usize) -> f64 {
    ((j + 1) as f64 * 0.618_033_988_749_894_9).fract()
}

/// Bound whisker for salt `j`, kept away from zero so no two finite
/// bounds coincide after widening.
fn pert_delta(j: usize, bound: f64) -> f64 {
    PERT_BOUND * (1.0 + bound.abs()) * (0.25 + 0.75 * golden_frac(j))
}
const REFACTOR_EVERY: usize = 40;
/// Refactorization interval of the conservative retry.
const REFACTOR_PARANOID: usize = 10;

#[derive(Clone, Copy, PartialEq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable, held at 0.
    Floating,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
    /// A refactorization found the basis numerically singular; the drifted
    /// eta arithmetic chose pivots the true matrix cannot support.
    Singular,
    /// Several watchdog windows passed without objective progress; only
    /// emitted when the effort level allows giving up early.
    Stalled,
}

/// Ratio test verdict for one entering column.
enum Step {
    /// The entering variable crosses its own gap first.
    Flip,
    Pivot { pos: usize, hits_upper: bool, t: f64 },
    Unbounded,
}

struct Core {
    nrows: usize,
    nstruct: usize,
    /// All columns: structurals, then one slack per row, then artificials.
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Phase-2 cost, min sense.
    cost: Vec<f64>,
    b: Vec<f64>,
    state: Vec<VarState>,
    value: Vec<f64>,
    /// basis position -> column
    basis: Vec<usize>,
    lu: Option<LuFactors>,
    etas: Vec<Eta>,
    pivots_since_factor: usize,
    iterations: usize,
    max_iters: usize,
    degen_streak: usize,
    bland: bool,
    /// Conservative retry: Bland stays on for the whole solve.
    paranoid: bool,
    refactor_every: usize,
    /// Objective at the last stall-watchdog checkpoint.
    obj_checkpoint: Option<f64>,
    checkpoint_iter: usize,
    /// Consecutive checkpoints without objective progress.
    stall_windows: usize,
    /// Clean solves hand a stall up the ladder instead of grinding.
    allow_stall_exit: bool,
    tol_feas: f64,
}

struct Eta {
    pos: usize,
    diag: f64,
    col: Vec<(usize, f64)>,
}

/// Escalation ladder for one attempt.  Clean solves exactly and gives up
/// early when the objective stops moving; the whisker retry widens every
/// finite bound by a distinct speck so ratio-test ties vanish and each
/// pivot strictly improves, which rules out degenerate stalling at the
/// price of tolerance-level noise; paranoid adds Bland pricing for the
/// whole solve plus tight refactorization.
#[derive(Clone, Copy, PartialEq)]
enum Effort {
    Clean,
    Whisker,
    Paranoid,
}

impl Effort {
    fn perturb(self) -> bool {
        self != Effort::Clean
    }

    fn paranoid(self) -> bool {
        self == Effort::Paranoid
    }
}

pub(super) fn solve(p: &LpProblem, opts: &SolveOptions) -> LpSolution {
    match attempt(p, opts, Effort::Clean)
        .or_else(|| attempt(p, opts, Effort::Whisker))
        .or_else(|| attempt(p, opts, Effort::Paranoid))
    {
        Some(solution) => solution,
        None => panic!("basis singular under conservative pivoting; matrix is numerically hopeless"),
    }
}

fn attempt(p: &LpProblem, opts: &SolveOptions, effort: Effort) -> Option<LpSolution> {
    let paranoid = effort.paranoid();
    let (obj, lower, upper, rows) = p.internals();
    let nstruct = obj.len();
    let nrows = rows.len();
    let sign = match p.sense() {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };

    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nstruct + nrows];
    let mut cost: Vec<f64> = obj.iter().map(|&c| sign * c).collect();
    let mut lo = lower.to_vec();
    let mut hi = upper.to_vec();
    let mut b = Vec::with_capacity(nrows);
    for (i, row) in rows.iter().enumerate() {
        for &(col, val) in row.coeffs() {
            cols[col].push((i, val));
        }
        let slack = nstruct + i;
        cols[slack].push((i, 1.0));
        let (slo, shi) = match row.relation() {
            Relation::Le => (0.0, f64::INFINITY),
            Relation::Ge => (f64::NEG_INFINITY, 0.0),
            Relation::Eq => (0.0, 0.0),
        };
        lo.push(slo);
        hi.push(shi);
        cost.push(0.0);
        b.push(row.rhs());
    }

    // The whiskers live far below the feasibility tolerance; extraction
    // clamps back to the true box.
    if effort.perturb() {
        for j in 0..lo.len() {
            if lo[j].is_finite() {
                lo[j] -= pert_delta(2 * j, lo[j]);
            }
            if hi[j].is_finite() {
                hi[j] += pert_delta(2 * j + 1, hi[j]);
            }
        }
    }

    // nonbasic start: every column at its nearest finite bound, free at 0
    let mut state = Vec::with_capacity(cols.len());
    let mut value = Vec::with_capacity(cols.len());
    for j in 0..cols.len() {
        if lo[j].is_finite() {
            state.push(VarState::AtLower);
            value.push(lo[j]);
        } else if hi[j].is_finite() {
            state.push(VarState::AtUpper);
            value.push(hi[j]);
        } else {
            state.push(VarState::Floating);
            value.push(0.0);
        }
    }

    let mut residual = b.clone();
    for j in 0..cols.len() {
        if value[j] != 0.0 {
            for &(i, v) in &cols[j] {
                residual[i] -= v * value[j];
            }
        }
    }

    // rows whose slack can absorb the residual start basic on the slack;
    // the rest get a phase-1 artificial
    let mut basis = Vec::with_capacity(nrows);
    let mut phase1_cost = vec![0.0; cols.len()];
    let mut any_artificial = false;
    for i in 0..nrows {
        let slack = nstruct + i;
        let r = residual[i];
        if r >= lo[slack] - 1e-12 && r <= hi[slack] + 1e-12 {
            state[slack] = VarState::Basic;
            value[slack] = r;
            basis.push(slack);
        } else {
            let art = cols.len();
            cols.push(vec![(i, 1.0)]);
            let whisker = if effort.perturb() {
                pert_delta(2 * art, 0.0)
            } else {
                0.0
            };
            if r > 0.0 {
                lo.push(-whisker);
                hi.push(f64::INFINITY);
                phase1_cost.push(1.0);
            } else {
                lo.push(f64::NEG_INFINITY);
                hi.push(whisker);
                phase1_cost.push(-1.0);
            }
            cost.push(0.0);
            state.push(VarState::Basic);
            value.push(r);
            basis.push(art);
            any_artificial = true;
        }
    }
    let artificial_from = nstruct + nrows;

    let max_iters = if opts.max_iters == 0 {
        10_000 + 40 * (nrows + cols.len())
    } else {
        opts.max_iters
    };

    let mut core = Core {
        nrows,
        nstruct,
        cols,
        lower: lo,
        upper: hi,
        cost,
        b,
        state,
        value,
        basis,
        lu: None,
        etas: Vec::new(),
        pivots_since_factor: 0,
        iterations: 0,
        max_iters,
        degen_streak: 0,
        bland: paranoid,
        paranoid,
        refactor_every: if paranoid {
            REFACTOR_PARANOID
        } else {
            REFACTOR_EVERY
        },
        obj_checkpoint: None,
        checkpoint_iter: 0,
        stall_windows: 0,
        allow_stall_exit: effort == Effort::Clean,
        tol_feas: opts.tol_feas,
    };

    if any_artificial {
        match core.run(&phase1_cost.clone()) {
            Outcome::Optimal => {}
            Outcome::Unbounded => unreachable!("phase 1 objective is bounded below"),
            Outcome::IterationLimit if !paranoid => return None,
            Outcome::IterationLimit => return Some(limit_solution(core.iterations)),
            Outcome::Singular | Outcome::Stalled => return None,
        }
        // max, not sum: artificials rest on their whiskers, and a few
        // hundred rows of whisker must not read as infeasibility
        let infeas: f64 = (artificial_from..core.cols.len())
            .map(|j| core.value[j].abs())
            .fold(0.0, f64::max);
        let scale = 1.0 + core.b.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if infeas > opts.tol_feas * scale {
            return Some(LpSolution {
                status: LpStatus::Infeasible,
                objective: f64::NAN,
                primal: Vec::new(),
                duals: Vec::new(),
                iterations: core.iterations,
            });
        }
        for j in artificial_from..core.cols.len() {
            core.lower[j] = 0.0;
            core.upper[j] = 0.0;
        }
    }

    let phase2_cost = core.cost.clone();
    match core.run(&phase2_cost) {
        Outcome::Optimal => {}
        Outcome::Unbounded => {
            return Some(LpSolution {
                status: LpStatus::Unbounded,
                objective: f64::NAN,
                primal: Vec::new(),
                duals: Vec::new(),
                iterations: core.iterations,
            })
        }
        Outcome::IterationLimit if !paranoid => return None,
        Outcome::IterationLimit => return Some(limit_solution(core.iterations)),
        Outcome::Singular | Outcome::Stalled => return None,
    }

    // Basics may sit a whisker or a feasibility tolerance past their
    // bounds; reported values honor the declared box.
    let primal: Vec<f64> = (0..nstruct)
        .map(|j| core.value[j].clamp(lower[j], upper[j]))
        .collect();
    let internal_obj: f64 = (0..core.cols.len())
        .map(|j| core.cost[j] * core.value[j])
        .sum();
    let y = core.duals(&phase2_cost);
    if cfg!(debug_assertions) {
        core.check_optimal(&y, internal_obj, opts, p);
    }
    let duals: Vec<f64> = y.iter().map(|&v| sign * v).collect();
    Some(LpSolution {
        status: LpStatus::Optimal,
        objective: sign * internal_obj,
        primal,
        duals,
        iterations: core.iterations,
    })
}

fn limit_solution(iterations: usize) -> LpSolution {
    LpSolution {
        status: LpStatus::IterationLimit,
        objective: f64::NAN,
        primal: Vec::new(),
        duals: Vec::new(),
        iterations,
    }
}

impl Core {
    fn run(&mut self, cost: &[f64]) -> Outcome {
        self.lu = None; // cost switch invalidates nothing, but refresh values
        self.obj_checkpoint = None;
        self.checkpoint_iter = self.iterations;
        self.stall_windows = 0;
        loop {
            if (self.lu.is_none() || self.pivots_since_factor >= self.refactor_every)
                && !self.refactor()
            {
                return Outcome::Singular;
            }
            if self.iterations >= self.max_iters {
                return Outcome::IterationLimit;
            }
            self.stall_watchdog(cost);
            if self.allow_stall_exit && self.stall_windows >= STALL_PATIENCE {
                return Outcome::Stalled;
            }
            let y = self.duals(cost);
            let Some((q, dq)) = self.price(cost, &y) else {
                return Outcome::Optimal;
            };
            if cfg!(debug_assertions)
                && self.iterations.is_multiple_of(2000)
                && std::env::var_os("QCCP_LP_TRACE").is_some()
            {
                let obj: f64 = (0..self.cols.len()).map(|j| cost[j] * self.value[j]).sum();
                eprintln!(
                    "lp iter {} obj {obj:.9} bland {} streak {} enter {q} d {dq:.3e}",
                    self.iterations, self.bland, self.degen_streak
                );
            }
            let dir = match self.state[q] {
                VarState::AtLower => 1.0,
                VarState::AtUpper => -1.0,
                VarState::Floating => {
                    if dq < 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                VarState::Basic => unreachable!("basic column priced"),
            };
            let w = self.ftran_col(q);
            let own_gap = self.upper[q] - self.lower[q]; // inf for free

            let step = if self.bland {
                self.ratio_bland(dir, &w, own_gap)
            } else {
                self.ratio_harris(dir, &w, own_gap)
            };

            self.iterations += 1;
            match step {
                Step::Unbounded => return Outcome::Unbounded,
                Step::Flip => {
                    self.apply_move(own_gap, dir, &w);
                    if dir > 0.0 {
                        self.state[q] = VarState::AtUpper;
                        self.value[q] = self.upper[q];
                    } else {
                        self.state[q] = VarState::AtLower;
                        self.value[q] = self.lower[q];
                    }
                    self.degen_streak = 0;
                }
                Step::Pivot { pos, hits_upper, t } => {
                    self.apply_move(t, dir, &w);
                    let new_xq = self.value[q] + dir * t;
                    let out = self.basis[pos];
                    if hits_upper {
                        self.state[out] = VarState::AtUpper;
                        self.value[out] = self.upper[out];
                    } else {
                        self.state[out] = VarState::AtLower;
                        self.value[out] = self.lower[out];
                    }
                    self.state[q] = VarState::Basic;
                    self.value[q] = new_xq;
                    self.basis[pos] = q;
                    let mut eta_col = Vec::new();
                    for (i, &wi) in w.iter().enumerate() {
                        if i != pos && wi != 0.0 {
                            eta_col.push((i, wi));
                        }
                    }
                    self.etas.push(Eta {
                        pos,
                        diag: w[pos],
                        col: eta_col,
                    });
                    self.pivots_since_factor += 1;
                    if t <= DEGEN_STEP {
                        self.degen_streak += 1;
                        if self.degen_streak >= BLAND_TRIGGER {
                            self.bland = true;
                        }
                    } else {
                        // only the watchdog may hand control back to Dantzig;
                        // a single real step proves nothing about a stall
                        self.degen_streak = 0;
                    }
                }
            }
        }
    }

    /// Degenerate vertices can trap Dantzig pricing in near-zero steps that
    /// individually look nondegenerate.  Every `STALL_WINDOW` iterations,
    /// compare the objective against the last checkpoint: no real progress
    /// switches to Bland's rule, progress under Bland switches back.
    fn stall_watchdog(&mut self, cost: &[f64]) {
        if self.iterations - self.checkpoint_iter < STALL_WINDOW {
            return;
        }
        let obj: f64 = (0..self.cols.len())
            .map(|j| cost[j] * self.value[j])
            .sum();
        if let Some(prev) = self.obj_checkpoint {
            let progressed = prev - obj > STALL_EPS * (1.0 + obj.abs());
            if progressed {
                self.stall_windows = 0;
                if !self.paranoid {
                    self.bland = false;
                    self.degen_streak = 0;
                }
            } else {
                self.stall_windows += 1;
                self.bland = true;
            }
        }
        self.obj_checkpoint = Some(obj);
        self.checkpoint_iter = self.iterations;
    }

    fn apply_move(&mut self, t: f64, dir: f64, w: &[f64]) {
        for pos in 0..self.nrows {
            if w[pos] != 0.0 {
                let col = self.basis[pos];
                self.value[col] -= t * dir * w[pos];
            }
        }
    }

    /// Strict distance the basic at `pos` can move before its bound, and
    /// whether that bound is the upper one; `None` when the row does not
    /// restrict this direction.
    fn row_limit(&self, pos: usize, rate: f64) -> Option<(f64, bool)> {
        let col = self.basis[pos];
        let xb = self.value[col];
        if rate > 0.0 {
            if self.lower[col] == f64::NEG_INFINITY {
                return None;
            }
            Some((((xb - self.lower[col]) / rate).max(0.0), false))
        } else {
            if self.upper[col] == f64::INFINITY {
                return None;
            }
            Some((((self.upper[col] - xb) / -rate).max(0.0), true))
        }
    }

    /// Two-pass ratio test: first find how far the step can go when every
    /// basic is allowed its feasibility slack, then pick the largest
    /// pivot among rows whose strict limit fits under that.  Degenerate
    /// ties thus resolve toward numerically safe pivots, and tiny forced
    /// steps become genuine ones more often.
    fn ratio_harris(&self, dir: f64, w: &[f64], own_gap: f64) -> Step {
        let mut t_max = own_gap;
        for pos in 0..self.nrows {
            let rate = dir * w[pos];
            if rate.abs() <= PIV_TOL {
                continue;
            }
            let col = self.basis[pos];
            let xb = self.value[col];
            let relaxed = if rate > 0.0 {
                if self.lower[col] == f64::NEG_INFINITY {
                    continue;
                }
                (xb - self.lower[col] + self.feas_slack(self.lower[col])) / rate
            } else {
                if self.upper[col] == f64::INFINITY {
                    continue;
                }
                (self.upper[col] - xb + self.feas_slack(self.upper[col])) / -rate
            };
            t_max = t_max.min(relaxed.max(0.0));
        }
        if t_max == f64::INFINITY {
            return Step::Unbounded;
        }
        let mut chosen: Option<(usize, bool, f64)> = None;
        let mut best_rate = 0.0;
        for pos in 0..self.nrows {
            let rate = dir * w[pos];
            if rate.abs() <= PIV_TOL {
                continue;
            }
            let Some((lim, hits_upper)) = self.row_limit(pos, rate) else {
                continue;
            };
            if lim <= t_max && rate.abs() > best_rate {
                best_rate = rate.abs();
                chosen = Some((pos, hits_upper, lim));
            }
        }
        match chosen {
            Some((pos, hits_upper, t)) => Step::Pivot { pos, hits_upper, t },
            None => Step::Flip,
        }
    }

    /// Exact minimum-ratio test with lowest-index tie break; guarantees
    /// termination under degeneracy at the price of speed.
    fn ratio_bland(&self, dir: f64, w: &[f64], own_gap: f64) -> Step {
        let mut t_best = own_gap;
        let mut leaving: Option<(usize, bool)> = None;
        for pos in 0..self.nrows {
            let rate = dir * w[pos];
            if rate.abs() <= PIV_TOL {
                continue;
            }
            let Some((lim, hits_upper)) = self.row_limit(pos, rate) else {
                continue;
            };
            let replace = if lim < t_best - 1e-12 {
                true
            } else if lim <= t_best + 1e-12 {
                match leaving {
                    None => t_best.is_infinite() || lim < t_best,
                    Some((prev, _)) => self.basis[pos] < self.basis[prev],
                }
            } else {
                false
            };
            if replace {
                t_best = lim.min(t_best);
                leaving = Some((pos, hits_upper));
            }
        }
        if t_best == f64::INFINITY {
            return Step::Unbounded;
        }
        match leaving {
            Some((pos, hits_upper)) => Step::Pivot {
                pos,
                hits_upper,
                t: t_best,
            },
            None => Step::Flip,
        }
    }

    /// Rebuilds the factorization from scratch; false when the basis is
    /// numerically singular.
    fn refactor(&mut self) -> bool {
        let columns: Vec<Vec<(usize, f64)>> = self
            .basis
            .iter()
            .map(|&col| self.cols[col].clone())
            .collect();
        let Some(lu) = LuFactors::factor(&columns) else {
            return false;
        };
        self.etas.clear();
        self.pivots_since_factor = 0;
        // recompute basic values exactly to shed accumulated drift
        let mut rhs = self.b.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if matches!(self.state[j], VarState::Basic) || self.value[j] == 0.0 {
                continue;
            }
            for &(i, v) in col {
                rhs[i] -= v * self.value[j];
            }
        }
        let mut z = vec![0.0; self.nrows];
        lu.ftran(&mut rhs, &mut z);
        for pos in 0..self.nrows {
            self.value[self.basis[pos]] = z[pos];
        }
        self.lu = Some(lu);
        true
    }

    /// Row duals y = Bᵀ⁻¹ c_B under the current factorization.
    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let mut c_b: Vec<f64> = self.basis.iter().map(|&col| cost[col]).collect();
        for eta in self.etas.iter().rev() {
            let mut dot = 0.0;
            for &(i, v) in &eta.col {
                dot += v * c_b[i];
            }
            c_b[eta.pos] = (c_b[eta.pos] - dot) / eta.diag;
        }
        let mut y = vec![0.0; self.nrows];
        if let Some(lu) = &self.lu {
            lu.btran(&c_b, &mut y);
        }
        y
    }

    fn ftran_col(&self, q: usize) -> Vec<f64> {
        let mut rhs = vec![0.0; self.nrows];
        for &(i, v) in &self.cols[q] {
            rhs[i] = v;
        }
        let mut z = vec![0.0; self.nrows];
        if let Some(lu) = &self.lu {
            lu.ftran(&mut rhs, &mut z);
        }
        for eta in &self.etas {
            let zp = z[eta.pos] / eta.diag;
            for &(i, v) in &eta.col {
                z[i] -= v * zp;
            }
            z[eta.pos] = zp;
        }
        z
    }

    fn reduced_cost(&self, j: usize, cost: &[f64], y: &[f64]) -> f64 {
        let mut d = cost[j];
        for &(i, v) in &self.cols[j] {
            d -= y[i] * v;
        }
        d
    }

    /// Entering column: Dantzig by default, Bland during a degeneracy
    /// streak. Returns the column and its reduced cost.
    fn price(&self, cost: &[f64], y: &[f64]) -> Option<(usize, f64)> {
        let tol = self.tol_feas;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols.len() {
            if matches!(self.state[j], VarState::Basic) || self.lower[j] >= self.upper[j] {
                continue;
            }
            let d = self.reduced_cost(j, cost, y);
            let eligible = match self.state[j] {
                VarState::AtLower => d < -tol,
                VarState::AtUpper => d > tol,
                VarState::Floating => d.abs() > tol,
                VarState::Basic => false,
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some((j, d));
            }
            match best {
                Some((_, bd)) if d.abs() <= bd.abs() => {}
                _ => best = Some((j, d)),
            }
        }
        best
    }

    /// Debug-build verification of the claimed optimum: primal
    /// feasibility, dual sign feasibility, and strong duality.
    fn check_optimal(&self, y: &[f64], internal_obj: f64, opts: &SolveOptions, p: &LpProblem) {
        let (_, _, _, rows) = p.internals();
        for (i, row) in rows.iter().enumerate() {
            let act: f64 = row
                .coeffs()
                .iter()
                .map(|&(col, v)| v * self.value[col])
                .sum();
            let slack_ok = match row.relation() {
                Relation::Le => act <= row.rhs() + self.feas_slack(row.rhs()),
                Relation::Ge => act >= row.rhs() - self.feas_slack(row.rhs()),
                Relation::Eq => (act - row.rhs()).abs() <= self.feas_slack(row.rhs()),
            };
            debug_assert!(slack_ok, "row {i} violated: activity {act} vs {}", row.rhs());
        }
        for j in 0..self.nstruct {
            debug_assert!(
                self.value[j] >= self.lower[j] - self.feas_slack(self.lower[j])
                    && self.value[j] <= self.upper[j] + self.feas_slack(self.upper[j]),
                "column {j} out of bounds"
            );
        }
        let mut dual_obj: f64 = self.b.iter().zip(y).map(|(&bi, &yi)| bi * yi).sum();
        for j in 0..self.cols.len() {
            if matches!(self.state[j], VarState::Basic) {
                continue;
            }
            if self.value[j] != 0.0 {
                dual_obj += self.reduced_cost(j, &self.cost, y) * self.value[j];
            }
        }
        debug_assert!(
            (dual_obj - internal_obj).abs() <= opts.tol_gap * (1.0 + internal_obj.abs()),
            "duality gap: primal {internal_obj} vs dual {dual_obj}"
        );
    }

    fn feas_slack(&self, reference: f64) -> f64 {
        if reference.is_finite() {
            self.tol_feas * (1.0 + reference.abs())
        } else {
            self.tol_feas
        }
    }
}
