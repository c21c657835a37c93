//! Solves a small LP directly and reads the dual multipliers back.
//!
//! The model: maximize 3x + 2y subject to x + y <= 4, x + 3y <= 6,
//! 0 <= x <= 3, y >= 0.

use qccp::lp::{LpProblem, Relation, Sense};
use qccp::LpStatus;

fn main() {
    let mut lp = LpProblem::new(Sense::Max);
    let x = lp.add_var(3.0, 0.0, 3.0);
    let y = lp.add_var(2.0, 0.0, f64::INFINITY);
    lp.name_var(x, "x");
    lp.name_var(y, "y");
    lp.add_row(&[(x, 1.0), (y, 1.0)], Relation::Le, 4.0);
    lp.add_row(&[(x, 1.0), (y, 3.0)], Relation::Le, 6.0);

    println!("{}", lp.dump_lp());

    let sol = lp.solve();
    assert_eq!(sol.status, LpStatus::Optimal);
    println!("objective {}", sol.objective);
    println!("x = {}, y = {}", sol.primal[x], sol.primal[y]);
    println!("row duals {:?}", sol.duals);

    // Strong duality by hand: row prices plus the reduced cost collected
    // by x sitting on its upper bound account for the whole objective.
    let reduced_x = 3.0 - sol.duals[0] - sol.duals[1];
    let accounted = 4.0 * sol.duals[0] + 6.0 * sol.duals[1] + 3.0 * reduced_x;
    println!("b^T lambda + 3 * reduced(x) = {accounted}");
    assert!((accounted - sol.objective).abs() < 1e-6);
}
