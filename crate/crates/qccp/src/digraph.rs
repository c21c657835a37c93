//! Arc-indexed directed graphs.
//!
//! Arc ids are dense 0-based integers in input order, so cost matrices and
//! LP columns align by index. For an arc `e = (tail, head)`, `tail(e)` is
//! the starting node `e⁺` and `head(e)` the ending node `e⁻`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc {index} is a self-loop at node {node}")]
    SelfLoop { index: usize, node: usize },
    #[error("arc {index} duplicates arc ({tail}, {head})")]
    DuplicateArc {
        index: usize,
        tail: usize,
        head: usize,
    },
    #[error("arc {index} references node {node} but the graph has {n} nodes")]
    NodeOutOfRange {
        index: usize,
        node: usize,
        n: usize,
    },
}

/// Immutable directed graph with successor-pair and incidence queries.
///
/// Parallel arcs and self-loops are rejected at construction: cycle covers
/// never contain loops, and the cost model indexes interaction costs by arc
/// pairs, which parallel arcs would make ambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    succ_pairs: Vec<(usize, usize)>,
}

impl Digraph {
    /// Builds the graph and every derived structure.
    ///
    /// Arc indices follow input order. Rejects self-loops, duplicate arcs
    /// and out-of-range node ids.
    pub fn new(n: usize, arc_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = vec![false; n * n];
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (e, &(tail, head)) in arc_list.iter().enumerate() {
            for node in [tail, head] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { index: e, node, n });
                }
            }
            if tail == head {
                return Err(GraphError::SelfLoop {
                    index: e,
                    node: tail,
                });
            }
            if seen[tail * n + head] {
                return Err(GraphError::DuplicateArc {
                    index: e,
                    tail,
                    head,
                });
            }
            seen[tail * n + head] = true;
            out_arcs[tail].push(e);
            in_arcs[head].push(e);
        }
        let mut succ_pairs = Vec::new();
        for (e, &(_, head)) in arc_list.iter().enumerate() {
            for &f in &out_arcs[head] {
                if f != e {
                    succ_pairs.push((e, f));
                }
            }
        }
        Ok(Digraph {
            n,
            arcs: arc_list.to_vec(),
            out_arcs,
            in_arcs,
            succ_pairs,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Starting node `e⁺`.
    pub fn tail(&self, e: usize) -> usize {
        self.arcs[e].0
    }

    /// Ending node `e⁻`.
    pub fn head(&self, e: usize) -> usize {
        self.arcs[e].1
    }

    /// δ⁺(i): arcs starting at node `i`, in input order.
    pub fn out_arcs(&self, i: usize) -> &[usize] {
        &self.out_arcs[i]
    }

    /// δ⁻(i): arcs ending at node `i`, in input order.
    pub fn in_arcs(&self, i: usize) -> &[usize] {
        &self.in_arcs[i]
    }

    /// All ordered pairs `(e, f)` with `head(e) = tail(f)` and `f ≠ e`.
    pub fn succ_pairs(&self) -> &[(usize, usize)] {
        &self.succ_pairs
    }

    /// Successors of `e`: the arcs of δ⁺(head(e)) other than `e` itself.
    ///
    /// `e` can never be its own successor since self-loops are rejected.
    pub fn successors(&self, e: usize) -> &[usize] {
        &self.out_arcs[self.head(e)]
    }

    /// Looks up the arc id for `(tail, head)`, if present.
    pub fn arc_id(&self, tail: usize, head: usize) -> Option<usize> {
        self.out_arcs[tail]
            .iter()
            .copied()
            .find(|&e| self.head(e) == head)
    }

    pub fn incidence(&self) -> IncidenceMatrices {
        let m = self.arcs.len();
        let mut u = vec![vec![0u8; m]; self.n];
        let mut v = vec![vec![0u8; m]; self.n];
        for (e, &(tail, head)) in self.arcs.iter().enumerate() {
            u[tail][e] = 1;
            v[head][e] = 1;
        }
        IncidenceMatrices { u, v }
    }
}

/// Node-arc incidence of tails (`U`) and heads (`V`).
///
/// `U[i][e] = 1` iff node `i` starts arc `e`; `V[i][e] = 1` iff node `i`
/// ends it. The stacked system `[U; V] x = 1` over binary `x` characterizes
/// disjoint cycle covers, and `[U; V]` is totally unimodular, so the LP
/// relaxation has integral vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrices {
    pub u: Vec<Vec<u8>>,
    pub v: Vec<Vec<u8>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_cycle() -> Digraph {
        Digraph::new(2, &[(0, 1), (1, 0)]).unwrap()
    }

    pub(crate) fn complete(n: usize) -> Digraph {
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
    fn two_cycle_structure() {
        let g = two_cycle();
        assert_eq!(g.arc_count(), 2);
        assert_eq!(g.succ_pairs(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn complete_three_nodes() {
        let g = complete(3);
        assert_eq!(g.arc_count(), 6);
        // Each arc (i,j) has successors δ⁺(j) \ {itself}; with out-degree 2
        // everywhere and no self-loops, that is 2 per arc.
        assert_eq!(g.succ_pairs().len(), 12);
    }

    #[test]
    fn rejects_self_loop() {
        let err = Digraph::new(2, &[(0, 0)]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { index: 0, node: 0 });
    }

    #[test]
    fn rejects_duplicate_arc() {
        let err = Digraph::new(3, &[(0, 1), (1, 2), (0, 1)]).unwrap_err();
        assert_eq!(
            err,
            GraphError::DuplicateArc {
                index: 2,
                tail: 0,
                head: 1
            }
        );
    }

    #[test]
    fn rejects_out_of_range() {
        let err = Digraph::new(2, &[(0, 5)]).unwrap_err();
        assert_eq!(
            err,
            GraphError::NodeOutOfRange {
                index: 0,
                node: 5,
                n: 2
            }
        );
    }

    #[test]
    fn incidence_two_cycle() {
        let g = two_cycle();
        let inc = g.incidence();
        assert_eq!(inc.u, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(inc.v, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn incidence_column_sums_are_one() {
        let g = complete(4);
        let inc = g.incidence();
        for e in 0..g.arc_count() {
            let u_sum: u8 = (0..4).map(|i| inc.u[i][e]).sum();
            let v_sum: u8 = (0..4).map(|i| inc.v[i][e]).sum();
            assert_eq!(u_sum, 1);
            assert_eq!(v_sum, 1);
        }
    }

    #[test]
    fn incidence_row_sums_are_degrees() {
        let g = complete(3);
        let inc = g.incidence();
        for i in 0..3 {
            let row: u8 = inc.u[i].iter().sum();
            assert_eq!(row as usize, g.out_arcs(i).len());
            assert_eq!(row, 2);
        }
    }

    #[test]
    fn degree_sums_equal_arc_count() {
        let g = complete(5);
        let out: usize = (0..5).map(|i| g.out_arcs(i).len()).sum();
        let inn: usize = (0..5).map(|i| g.in_arcs(i).len()).sum();
        assert_eq!(out, g.arc_count());
        assert_eq!(inn, g.arc_count());
    }

    #[test]
    fn succ_pairs_match_incidence_supports() {
        let g = complete(3);
        let inc = g.incidence();
        let mut expected = Vec::new();
        for e in 0..g.arc_count() {
            for f in 0..g.arc_count() {
                if f == e {
                    continue;
                }
                let shared = (0..3).any(|i| inc.v[i][e] == 1 && inc.u[i][f] == 1);
                if shared {
                    expected.push((e, f));
                }
            }
        }
        let mut got = g.succ_pairs().to_vec();
        got.sort_unstable();
        expected.sort_unstable();
        assert_eq!(got, expected);
    }

    #[test]
    fn arc_id_lookup() {
        let g = complete(3);
        for (e, &(t, h)) in g.arcs().iter().enumerate() {
            assert_eq!(g.arc_id(t, h), Some(e));
        }
        assert_eq!(g.arc_id(0, 0), None);
    }
}
