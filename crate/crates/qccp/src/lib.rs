//! Lower bounds for the quadratic cycle cover problem (QCCP).
//!
//! An instance is a directed graph together with interaction costs between
//! pairs of successive arcs. The problem asks for a disjoint cycle cover
//! (a spanning set of node-disjoint directed cycles, i.e. a directed
//! 2-factor) minimizing the total interaction cost
//!
//! ```text
//! OPT(Q) = min { x^T Q x : x characteristic vector of a cycle cover }
//! ```
//!
//! where `Q[e][f]` may be nonzero only when arc `f` starts where arc `e`
//! ends (plus the diagonal, which carries plain linear arc costs).
//!
//! # Orientation convention
//!
//! Throughout the crate, for an arc `e`:
//!
//! * `e⁺` (written `tail(e)` in code) is the **starting** node of `e`,
//! * `e⁻` (written `head(e)` in code) is the **ending** node of `e`.
//!
//! `δ⁺(i)` is the set of arcs starting at node `i`, `δ⁻(i)` the set of arcs
//! ending at `i`. A pair `(e, f)` is a *successor pair* when `head(e) =
//! tail(f)` and `f ≠ e`; these are exactly the pairs a cycle cover can
//! traverse consecutively.
//!
//! # What the crate provides
//!
//! * [`digraph`]: arc-indexed directed graphs with incidence and successor
//!   queries.
//! * [`instance`]: the instance model, a text file format, and four
//!   instance generators (Erdős–Rényi, toroidal Manhattan grids,
//!   angle-distance, and a reduction from the quadratic assignment
//!   problem).
//! * [`lp`]: a self-contained bounded-variable revised simplex solver with
//!   dual extraction; the substrate for every bound.
//! * [`ccp`]: the linear cycle cover problem (minimum-cost directed
//!   2-factor) solved combinatorially via an assignment reduction, with
//!   node potentials and forced-arc variants.
//! * [`oracle`]: exhaustive cover enumeration and an exact QCCP solver at
//!   desk scale; the ground truth for everything else.
//! * [`linearize`]: detection of sufficient linearizability conditions
//!   (constant value property, row/column variants, weak sums, symmetric
//!   products) and construction of linearization vectors.
//! * [`lbb`]: linearization-based bounds over the incident-weak-sum,
//!   restricted and generalized weak-sum classes, plus the skew-symmetric
//!   extension.
//! * [`gl`]: the Gilmore-Lawler bound family (classical, compact LP,
//!   linearization form), a Glover-style MILP relaxation bound, and the
//!   level-1 RLT relaxation.
//! * [`reformulate`]: the iterative reformulation scheme that repeatedly
//!   linearizes part of the cost matrix under an optimized equivalent
//!   representation.
//! * [`bench`]: benchmark harness with dominance auditing, used by the
//!   `qccp` binary.
//!
//! Interaction cost matrices are stored sparsely; all bounds accept any
//! instance whose support is successor pairs plus the diagonal, and the
//! iterative schemes handle general-support residual matrices internally.

// The numeric kernels walk several arc-indexed arrays in lockstep; index
// loops are the clearer spelling there.
#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod ccp;
pub mod digraph;
pub mod gl;
pub mod instance;
pub mod lbb;
pub mod linearize;
pub mod lp;
pub mod oracle;
pub mod reformulate;

pub use ccp::{ccp_lp, solve_ccp, solve_ccp_forced, CcpResult};
pub use digraph::{Digraph, IncidenceMatrices};
pub use gl::{GlVectors, DEFAULT_ETA};
pub use instance::{CycleCover, QccpInstance, SupportMode};
pub use lbb::{BoundError, BoundReport, LpStats};
pub use linearize::{CertificateKind, LinearizationCertificate, Witnesses};
pub use lp::{LpProblem, LpSolution, LpStatus};
pub use oracle::{CheckOutcome, EnumerationBudget, OracleError};
pub use reformulate::{IterationTrace, DEFAULT_MAX_ITERS, DEFAULT_MIN_GAIN};
