//! Instance model: a digraph plus sparse interaction costs.
//!
//! Costs live on ordered arc pairs. In [`SupportMode::SuccessorOnly`] the
//! support is restricted to successor pairs plus the diagonal `(e, e)`,
//! which carries plain linear arc costs (valid because `x_e² = x_e` for
//! binary `x`). [`SupportMode::General`] admits any pair; the iterative
//! reformulation schemes produce such residual matrices, and some
//! linearizable classes are defined on full support.

mod gen;
mod io;

pub use gen::{
    gen_angle_distance, gen_erdos_renyi, gen_manhattan, gen_qap_reduction, qap_big_m, GenError,
};
pub use io::{read_instance, write_instance, IoError};

use crate::digraph::Digraph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("cost entry ({e}, {f}) out of range for {m} arcs")]
    ArcOutOfRange { e: usize, f: usize, m: usize },
    #[error("cost entry ({e}, {f}) is not a successor pair or diagonal entry")]
    NotSuccessorPair { e: usize, f: usize },
    #[error("cost entry ({e}, {f}) is not finite")]
    NonFiniteCost { e: usize, f: usize },
    #[error("duplicate cost entry ({e}, {f})")]
    DuplicateEntry { e: usize, f: usize },
    #[error("invalid cycle cover: {0}")]
    InvalidCover(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportMode {
    /// Nonzero costs only on successor pairs and the diagonal.
    SuccessorOnly,
    /// Costs on arbitrary ordered arc pairs.
    General,
}

impl SupportMode {
    pub fn token(self) -> &'static str {
        match self {
            SupportMode::SuccessorOnly => "successor-only",
            SupportMode::General => "general",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "successor-only" => Some(SupportMode::SuccessorOnly),
            "general" => Some(SupportMode::General),
            _ => None,
        }
    }
}

/// A QCCP instance: graph plus interaction costs `q(e, f)`.
///
/// Entries are stored row-sorted, so iteration order is deterministic and
/// files written from the same instance are byte-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct QccpInstance {
    graph: Digraph,
    rows: Vec<Vec<(usize, f64)>>,
    support_mode: SupportMode,
}

impl QccpInstance {
    pub fn new(
        graph: Digraph,
        entries: &[(usize, usize, f64)],
        support_mode: SupportMode,
    ) -> Result<Self, InstanceError> {
        let m = graph.arc_count();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for &(e, f, cost) in entries {
            if e >= m || f >= m {
                return Err(InstanceError::ArcOutOfRange { e, f, m });
            }
            if !cost.is_finite() {
                return Err(InstanceError::NonFiniteCost { e, f });
            }
            if support_mode == SupportMode::SuccessorOnly
                && e != f
                && graph.head(e) != graph.tail(f)
            {
                return Err(InstanceError::NotSuccessorPair { e, f });
            }
            rows[e].push((f, cost));
        }
        for (e, row) in rows.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(f, _)| f);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(InstanceError::DuplicateEntry { e, f: w[0].0 });
                }
            }
        }
        Ok(QccpInstance {
            graph,
            rows,
            support_mode,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn support_mode(&self) -> SupportMode {
        self.support_mode
    }

    /// Interaction cost of the ordered pair `(e, f)`; 0 when unset.
    pub fn q(&self, e: usize, f: usize) -> f64 {
        match self.rows[e].binary_search_by_key(&f, |&(g, _)| g) {
            Ok(pos) => self.rows[e][pos].1,
            Err(_) => 0.0,
        }
    }

    /// Stored entries of row `e`, sorted by column.
    pub fn row(&self, e: usize) -> &[(usize, f64)] {
        &self.rows[e]
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(e, row)| row.iter().map(move |&(f, cost)| (e, f, cost)))
    }

    pub fn entry_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `x^T Q x` for a cycle cover, diagonal counted once.
    pub fn objective(&self, cover: &CycleCover) -> Result<f64, InstanceError> {
        cover.validate(&self.graph)?;
        let mut total = 0.0;
        for (e, row) in self.rows.iter().enumerate() {
            if !cover.contains(e) {
                continue;
            }
            for &(f, cost) in row {
                if cover.contains(f) {
                    total += cost;
                }
            }
        }
        Ok(total)
    }
}

/// A disjoint cycle cover: every node on exactly one directed cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover {
    x: Vec<bool>,
    arcs: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl CycleCover {
    /// Builds a cover from selected arc ids, checking that every node has
    /// exactly one selected outgoing and one selected incoming arc.
    pub fn from_arcs(g: &Digraph, selected: &[usize]) -> Result<Self, InstanceError> {
        let mut x = vec![false; g.arc_count()];
        for &e in selected {
            if e >= g.arc_count() {
                return Err(InstanceError::InvalidCover(format!(
                    "arc id {e} out of range"
                )));
            }
            if x[e] {
                return Err(InstanceError::InvalidCover(format!("arc {e} repeated")));
            }
            x[e] = true;
        }
        Self::from_x(g, &x)
    }

    pub fn from_x(g: &Digraph, x: &[bool]) -> Result<Self, InstanceError> {
        if x.len() != g.arc_count() {
            return Err(InstanceError::InvalidCover(format!(
                "vector length {} does not match {} arcs",
                x.len(),
                g.arc_count()
            )));
        }
        let n = g.node_count();
        let mut succ = vec![usize::MAX; n];
        for (e, &sel) in x.iter().enumerate() {
            if !sel {
                continue;
            }
            let t = g.tail(e);
            if succ[t] != usize::MAX {
                return Err(InstanceError::InvalidCover(format!(
                    "node {t} has two outgoing arcs selected"
                )));
            }
            succ[t] = e;
        }
        let mut in_deg = vec![0usize; n];
        for (e, &sel) in x.iter().enumerate() {
            if sel {
                in_deg[g.head(e)] += 1;
            }
        }
        for i in 0..n {
            if succ[i] == usize::MAX {
                return Err(InstanceError::InvalidCover(format!(
                    "node {i} has no outgoing arc selected"
                )));
            }
            if in_deg[i] != 1 {
                return Err(InstanceError::InvalidCover(format!(
                    "node {i} has in-degree {}",
                    in_deg[i]
                )));
            }
        }
        let mut cycles = Vec::new();
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut node = start;
            while !visited[node] {
                visited[node] = true;
                cycle.push(node);
                node = g.head(succ[node]);
            }
            if node != start {
                return Err(InstanceError::InvalidCover(format!(
                    "walk from node {start} does not close"
                )));
            }
            cycles.push(cycle);
        }
        let arcs: Vec<usize> = (0..x.len()).filter(|&e| x[e]).collect();
        Ok(CycleCover {
            x: x.to_vec(),
            arcs,
            cycles,
        })
    }

    fn validate(&self, g: &Digraph) -> Result<(), InstanceError> {
        if self.x.len() != g.arc_count() {
            return Err(InstanceError::InvalidCover(format!(
                "vector length {} does not match {} arcs",
                self.x.len(),
                g.arc_count()
            )));
        }
        if self.arcs.len() != g.node_count() {
            return Err(InstanceError::InvalidCover(format!(
                "{} arcs selected for {} nodes",
                self.arcs.len(),
                g.node_count()
            )));
        }
        Ok(())
    }

    pub fn contains(&self, e: usize) -> bool {
        self.x[e]
    }

    /// Characteristic vector, indexed by arc id.
    pub fn x(&self) -> &[bool] {
        &self.x
    }

    pub fn x_f64(&self) -> Vec<f64> {
        self.x.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    /// Selected arc ids, ascending.
    pub fn arc_ids(&self) -> &[usize] {
        &self.arcs
    }

    /// Node cycles, each starting at its smallest node, ordered by that node.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> Digraph {
        Digraph::new(2, &[(0, 1), (1, 0)]).unwrap()
    }

    fn complete(n: usize) -> Digraph {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    arcs.push((i, j));
                }
            }
        }
        Digraph::new(n, &arcs).unwrap()
    }

    #[test]
    fn objective_two_cycle() {
        let g = two_cycle();
        let inst =
            QccpInstance::new(g.clone(), &[(0, 1, 3.0), (1, 0, 4.0)], SupportMode::SuccessorOnly)
                .unwrap();
        let cover = CycleCover::from_arcs(&g, &[0, 1]).unwrap();
        assert_eq!(inst.objective(&cover).unwrap(), 7.0);
    }

    #[test]
    fn objective_zero_matrix() {
        let g = complete(4);
        let inst = QccpInstance::new(g.clone(), &[], SupportMode::SuccessorOnly).unwrap();
        let cover = CycleCover::from_arcs(
            &g,
            &[
                g.arc_id(0, 1).unwrap(),
                g.arc_id(1, 2).unwrap(),
                g.arc_id(2, 3).unwrap(),
                g.arc_id(3, 0).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(inst.objective(&cover).unwrap(), 0.0);
    }

    #[test]
    fn objective_counts_consecutive_pairs() {
        let g = complete(3);
        let entries: Vec<(usize, usize, f64)> =
            g.succ_pairs().iter().map(|&(e, f)| (e, f, 1.0)).collect();
        assert_eq!(entries.len(), 12);
        let inst = QccpInstance::new(g.clone(), &entries, SupportMode::SuccessorOnly).unwrap();
        for cover_arcs in [
            [(0, 1), (1, 2), (2, 0)],
            [(0, 2), (2, 1), (1, 0)],
        ] {
            let ids: Vec<usize> = cover_arcs
                .iter()
                .map(|&(t, h)| g.arc_id(t, h).unwrap())
                .collect();
            let cover = CycleCover::from_arcs(&g, &ids).unwrap();
            // A 3-cycle realizes exactly its 3 consecutive pairs.
            assert_eq!(inst.objective(&cover).unwrap(), 3.0);
        }
    }

    #[test]
    fn diagonal_counts_once() {
        let g = two_cycle();
        let inst = QccpInstance::new(
            g.clone(),
            &[(0, 0, 5.0), (1, 1, 2.0), (0, 1, 1.0)],
            SupportMode::SuccessorOnly,
        )
        .unwrap();
        let cover = CycleCover::from_arcs(&g, &[0, 1]).unwrap();
        assert_eq!(inst.objective(&cover).unwrap(), 8.0);
    }

    #[test]
    fn successor_only_rejects_off_support() {
        let g = complete(4);
        // (0,1) then (2,3): not consecutive.
        let e = g.arc_id(0, 1).unwrap();
        let f = g.arc_id(2, 3).unwrap();
        let err = QccpInstance::new(g, &[(e, f, 1.0)], SupportMode::SuccessorOnly).unwrap_err();
        assert_eq!(err, InstanceError::NotSuccessorPair { e, f });
    }

    #[test]
    fn general_mode_accepts_any_pair() {
        let g = complete(4);
        let e = g.arc_id(0, 1).unwrap();
        let f = g.arc_id(2, 3).unwrap();
        let inst = QccpInstance::new(g, &[(e, f, 1.0)], SupportMode::General).unwrap();
        assert_eq!(inst.q(e, f), 1.0);
        assert_eq!(inst.q(f, e), 0.0);
    }

    #[test]
    fn rejects_duplicate_entry() {
        let g = two_cycle();
        let err = QccpInstance::new(
            g,
            &[(0, 1, 1.0), (0, 1, 2.0)],
            SupportMode::SuccessorOnly,
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::DuplicateEntry { e: 0, f: 1 });
    }

    #[test]
    fn rejects_non_finite() {
        let g = two_cycle();
        let err = QccpInstance::new(g, &[(0, 1, f64::NAN)], SupportMode::SuccessorOnly).unwrap_err();
        assert_eq!(err, InstanceError::NonFiniteCost { e: 0, f: 1 });
    }

    #[test]
    fn cover_requires_unit_degrees() {
        let g = complete(3);
        let a01 = g.arc_id(0, 1).unwrap();
        let a10 = g.arc_id(1, 0).unwrap();
        // A 2-cycle leaves node 2 uncovered.
        assert!(CycleCover::from_arcs(&g, &[a01, a10]).is_err());
    }

    #[test]
    fn cover_cycles_derived() {
        let g = Digraph::new(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        let cover = CycleCover::from_arcs(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(cover.cycles(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(cover.arc_ids(), &[0, 1, 2, 3]);
    }

    #[test]
    fn objective_rejects_foreign_cover() {
        let g_small = two_cycle();
        let cover = CycleCover::from_arcs(&g_small, &[0, 1]).unwrap();
        let g_big = complete(3);
        let inst = QccpInstance::new(g_big, &[], SupportMode::SuccessorOnly).unwrap();
        assert!(inst.objective(&cover).is_err());
    }
}
