//! Exhaustive ground truth at desk scale.
//!
//! Everything here enumerates cycle covers outright, so it only works on
//! graphs with a few dozen nodes, and that is the point: bounds and
//! linearizations elsewhere in the crate are validated against an optimum
//! nothing can argue with.
//!
//! Enumeration assigns each node's outgoing arc in node order and keeps a
//! perfect matching feasibility check (tails still to assign against heads
//! still free) on every branch, so each expanded search node leads to at
//! least one cover and dead ends are cut at the top.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::digraph::Digraph;
use crate::instance::{CycleCover, QccpInstance, SupportMode};

const NONE: usize = usize::MAX;

/// Caps on exhaustive work.
///
/// Exceeding a cap aborts with an explicit error or a partial verdict,
/// never a silently wrong answer.
#[derive(Debug, Clone)]
pub struct EnumerationBudget {
    /// Abort after this many complete covers.
    pub max_covers: usize,
    /// Refuse graphs with more nodes than this outright.
    pub max_nodes_exhaustive: usize,
    /// Wall clock cap, checked between covers.
    pub time_budget: Duration,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_covers: 2_000_000,
            max_nodes_exhaustive: 12,
            time_budget: Duration::from_secs(60),
        }
    }
}

impl EnumerationBudget {
    /// Default caps, but admitting graphs with up to `nodes` nodes.
    pub fn for_nodes(nodes: usize) -> Self {
        Self {
            max_nodes_exhaustive: nodes,
            ..Self::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("graph has {nodes} nodes, budget admits at most {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("enumeration exceeded {limit} covers")]
    CoverLimit { limit: usize },
    #[error("time budget exhausted after {covers} covers")]
    TimeLimit { covers: usize },
    #[error("graph has no cycle cover")]
    Infeasible,
}

/// Result of an exhaustive property check that may have been cut short.
#[derive(Debug, Clone)]
pub enum CheckOutcome {
    /// The property held on every cover and enumeration completed.
    Holds,
    /// A counterexample cover was found.
    Fails { witness: CycleCover },
    /// The budget ran out first; no counterexample among the covers seen.
    Partial { covers_checked: usize },
}

impl CheckOutcome {
    /// True only for a completed, counterexample-free check.
    pub fn confirmed(&self) -> bool {
        matches!(self, CheckOutcome::Holds)
    }
}

pub(crate) enum Flow {
    Continue,
    Stop,
}

pub(crate) struct Search<'a> {
    g: &'a Digraph,
    max_covers: usize,
    deadline: Instant,
    /// Arc currently entering each node, NONE while free.
    in_arc: Vec<usize>,
    /// Arc currently leaving each node, NONE above the search frontier.
    choice: Vec<usize>,
    pub(crate) covers: usize,
    kuhn_seen: Vec<bool>,
    kuhn_match: Vec<usize>,
}

impl<'a> Search<'a> {
    pub(crate) fn new(g: &'a Digraph, budget: &EnumerationBudget) -> Result<Self, OracleError> {
        let n = g.node_count();
        if n > budget.max_nodes_exhaustive {
            return Err(OracleError::TooLarge {
                nodes: n,
                limit: budget.max_nodes_exhaustive,
            });
        }
        Ok(Self {
            g,
            max_covers: budget.max_covers,
            deadline: Instant::now() + budget.time_budget,
            in_arc: vec![NONE; n],
            choice: vec![NONE; n],
            covers: 0,
            kuhn_seen: vec![false; n],
            kuhn_match: vec![NONE; n],
        })
    }

    /// Can tails `from..n` still be matched to the free heads?
    pub(crate) fn feasible_from(&mut self, from: usize) -> bool {
        let n = self.g.node_count();
        self.kuhn_match.fill(NONE);
        for t in from..n {
            self.kuhn_seen.fill(false);
            if !self.augment(t) {
                return false;
            }
        }
        true
    }

    fn augment(&mut self, t: usize) -> bool {
        for k in 0..self.g.out_arcs(t).len() {
            let e = self.g.out_arcs(t)[k];
            let j = self.g.head(e);
            if self.in_arc[j] != NONE || self.kuhn_seen[j] {
                continue;
            }
            self.kuhn_seen[j] = true;
            let occupant = self.kuhn_match[j];
            if occupant == NONE || self.augment(occupant) {
                self.kuhn_match[j] = t;
                return true;
            }
        }
        false
    }

    fn leaf(&mut self) -> Result<(), OracleError> {
        self.covers += 1;
        if self.covers > self.max_covers {
            return Err(OracleError::CoverLimit {
                limit: self.max_covers,
            });
        }
        if self.covers.is_multiple_of(256) && Instant::now() > self.deadline {
            return Err(OracleError::TimeLimit {
                covers: self.covers,
            });
        }
        Ok(())
    }

    /// Visit every cover in lexicographic successor order.
    pub(crate) fn enumerate(
        &mut self,
        node: usize,
        f: &mut impl FnMut(&[usize]) -> Flow,
    ) -> Result<Flow, OracleError> {
        if node == self.g.node_count() {
            self.leaf()?;
            return Ok(f(&self.choice));
        }
        for k in 0..self.g.out_arcs(node).len() {
            let e = self.g.out_arcs(node)[k];
            let j = self.g.head(e);
            if self.in_arc[j] != NONE {
                continue;
            }
            self.in_arc[j] = e;
            self.choice[node] = e;
            let flow = if self.feasible_from(node + 1) {
                self.enumerate(node + 1, f)
            } else {
                Ok(Flow::Continue)
            };
            self.in_arc[j] = NONE;
            self.choice[node] = NONE;
            if matches!(flow?, Flow::Stop) {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }
}

/// All cycle covers of `g`, each exactly once, in lexicographic order of
/// successor choice per node.
pub fn enumerate_covers(
    g: &Digraph,
    budget: &EnumerationBudget,
) -> Result<Vec<CycleCover>, OracleError> {
    let mut out = Vec::new();
    let mut search = Search::new(g, budget)?;
    if search.feasible_from(0) {
        search.enumerate(0, &mut |choice| {
            out.push(CycleCover::from_arcs(g, &sorted(choice)).expect("search yields covers"));
            Flow::Continue
        })?;
    }
    Ok(out)
}

/// Certified optimum of a quadratic instance by branch and bound over the
/// successor assignment tree.
///
/// Children are explored cheapest first by their incremental cost, partial
/// assignments are cut with a per node floor on the cost still to come, and
/// ties keep the lexicographically first cover, so the result is
/// deterministic.  On successor-only instances the search first computes
/// the additive-split bound and stops as soon as the incumbent reaches it.
pub fn solve_exact(
    inst: &QccpInstance,
    budget: &EnumerationBudget,
) -> Result<(f64, CycleCover), OracleError> {
    let hint = if inst.support_mode() == SupportMode::SuccessorOnly {
        crate::lbb::lbb1(inst).ok().map(|r| r.value)
    } else {
        None
    };
    solve_exact_with_hint(inst, budget, hint)
}

/// [`solve_exact`] with a known valid lower bound on the optimum.
///
/// The search stops as soon as the incumbent reaches the hint (within
/// `1e-9` relative), which proves optimality without exhausting the tree.
/// A hint above the true optimum voids the certificate, so pass only
/// genuine lower bounds.
pub fn solve_exact_with_hint(
    inst: &QccpInstance,
    budget: &EnumerationBudget,
    lower_bound: Option<f64>,
) -> Result<(f64, CycleCover), OracleError> {
    if inst.support_mode() == SupportMode::General {
        // Incremental pricing only sees consecutive pairs, so matrices with
        // wider support get exhaustive enumeration instead of pruning.
        return solve_exact_general(inst, budget, lower_bound);
    }
    let g = inst.graph();
    let n = g.node_count();
    let mut search = Search::new(g, budget)?;
    if !search.feasible_from(0) {
        return Err(OracleError::Infeasible);
    }

    // floor[j]: the cheapest conceivable contribution of node j's arc, over
    // all its out-arcs, counting each arc's diagonal entry plus only the
    // negative part of the best adjacent pair entries.  Pair entries can be
    // counted at both endpoints, which only lowers the floor.
    let mut arc_floor = vec![0.0f64; g.arc_count()];
    for e in 0..g.arc_count() {
        let mut worst_in = 0.0f64;
        for &f in g.in_arcs(g.tail(e)) {
            worst_in = worst_in.min(inst.q(f, e));
        }
        let mut worst_out = 0.0f64;
        for &f in g.out_arcs(g.head(e)) {
            worst_out = worst_out.min(inst.q(e, f));
        }
        arc_floor[e] = inst.q(e, e) + worst_in + worst_out;
    }
    let mut suffix_floor = vec![0.0f64; n + 1];
    for j in (0..n).rev() {
        let node_floor = g
            .out_arcs(j)
            .iter()
            .map(|&e| arc_floor[e])
            .fold(f64::INFINITY, f64::min);
        let node_floor = if node_floor.is_finite() { node_floor } else { 0.0 };
        suffix_floor[j] = suffix_floor[j + 1] + node_floor;
    }

    let stop_at = lower_bound.map(|lb| lb + 1e-9 * (1.0 + lb.abs()));
    let mut best_value = f64::INFINITY;
    let mut best_choice: Vec<usize> = Vec::new();
    descend(
        inst,
        &mut search,
        0,
        0.0,
        &suffix_floor,
        stop_at,
        &mut best_value,
        &mut best_choice,
    )?;
    if best_choice.is_empty() {
        return Err(OracleError::Infeasible);
    }
    let cover = CycleCover::from_arcs(g, &sorted(&best_choice)).expect("search yields covers");
    let value = inst.objective(&cover).expect("cover fits instance");
    debug_assert!((value - best_value).abs() <= 1e-9 * (1.0 + value.abs()));
    Ok((value, cover))
}

fn solve_exact_general(
    inst: &QccpInstance,
    budget: &EnumerationBudget,
    lower_bound: Option<f64>,
) -> Result<(f64, CycleCover), OracleError> {
    let g = inst.graph();
    let mut search = Search::new(g, budget)?;
    if !search.feasible_from(0) {
        return Err(OracleError::Infeasible);
    }
    let stop_at = lower_bound.map(|lb| lb + 1e-9 * (1.0 + lb.abs()));
    let mut best: Option<(f64, CycleCover)> = None;
    search.enumerate(0, &mut |choice| {
        let cover = CycleCover::from_arcs(g, &sorted(choice)).expect("search yields covers");
        let value = inst.objective(&cover).expect("cover fits instance");
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, cover));
        }
        match (stop_at, &best) {
            (Some(s), Some((b, _))) if *b <= s => Flow::Stop,
            _ => Flow::Continue,
        }
    })?;
    best.ok_or(OracleError::Infeasible)
}

/// Cost added when `e` becomes the out-arc of `tail(e)`: its diagonal entry
/// plus every stored pair entry whose other arc is already assigned.  Each
/// realized ordered pair is charged exactly once, at the later endpoint.
fn assign_delta(inst: &QccpInstance, search: &Search, e: usize) -> f64 {
    let g = inst.graph();
    let mut delta = inst.q(e, e);
    let pred = search.in_arc[g.tail(e)];
    if pred != NONE {
        delta += inst.q(pred, e);
    }
    let succ = search.choice[g.head(e)];
    if succ != NONE {
        delta += inst.q(e, succ);
    }
    delta
}

#[allow(clippy::too_many_arguments)]
fn descend(
    inst: &QccpInstance,
    search: &mut Search,
    node: usize,
    partial: f64,
    suffix_floor: &[f64],
    stop_at: Option<f64>,
    best_value: &mut f64,
    best_choice: &mut Vec<usize>,
) -> Result<Flow, OracleError> {
    let g = inst.graph();
    if node == g.node_count() {
        search.leaf()?;
        if partial < *best_value {
            *best_value = partial;
            best_choice.clear();
            best_choice.extend_from_slice(&search.choice);
            if let Some(limit) = stop_at {
                if partial <= limit {
                    return Ok(Flow::Stop);
                }
            }
        }
        return Ok(Flow::Continue);
    }
    let mut children: Vec<(f64, usize)> = Vec::with_capacity(g.out_arcs(node).len());
    for &e in g.out_arcs(node) {
        if search.in_arc[g.head(e)] == NONE {
            children.push((assign_delta(inst, search, e), e));
        }
    }
    children.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for (delta, e) in children {
        if partial + delta + suffix_floor[node + 1] >= *best_value {
            continue;
        }
        let j = g.head(e);
        search.in_arc[j] = e;
        search.choice[node] = e;
        let flow = if search.feasible_from(node + 1) {
            descend(
                inst,
                search,
                node + 1,
                partial + delta,
                suffix_floor,
                stop_at,
                best_value,
                best_choice,
            )
        } else {
            Ok(Flow::Continue)
        };
        search.in_arc[j] = NONE;
        search.choice[node] = NONE;
        if matches!(flow?, Flow::Stop) {
            return Ok(Flow::Stop);
        }
    }
    Ok(Flow::Continue)
}

/// Does `v` price every cycle cover of `g` identically?
///
/// Compares each cover's total against the first cover found, within
/// `1e-6` relative.  A graph with no cover holds vacuously.  Running out
/// of budget mid-way yields [`CheckOutcome::Partial`] rather than a claim.
pub fn check_cvp(
    g: &Digraph,
    v: &[f64],
    budget: &EnumerationBudget,
) -> Result<CheckOutcome, OracleError> {
    assert_eq!(v.len(), g.arc_count(), "one value per arc");
    let mut search = Search::new(g, budget)?;
    let mut reference: Option<f64> = None;
    let mut witness: Option<Vec<usize>> = None;
    let run = if search.feasible_from(0) {
        search.enumerate(0, &mut |choice| {
            let total: f64 = choice.iter().map(|&e| v[e]).sum();
            match reference {
                None => {
                    reference = Some(total);
                    Flow::Continue
                }
                Some(r) if (total - r).abs() <= 1e-6 * (1.0 + r.abs()) => Flow::Continue,
                Some(_) => {
                    witness = Some(choice.to_vec());
                    Flow::Stop
                }
            }
        })
    } else {
        Ok(Flow::Continue)
    };
    if let Some(w) = witness {
        let cover = CycleCover::from_arcs(g, &sorted(&w)).expect("search yields covers");
        return Ok(CheckOutcome::Fails { witness: cover });
    }
    match run {
        Ok(_) => Ok(CheckOutcome::Holds),
        Err(OracleError::CoverLimit { .. }) | Err(OracleError::TimeLimit { .. }) => {
            Ok(CheckOutcome::Partial {
                covers_checked: search.covers,
            })
        }
        Err(other) => Err(other),
    }
}

fn sorted(choice: &[usize]) -> Vec<usize> {
    let mut arcs = choice.to_vec();
    arcs.sort_unstable();
    arcs
}
