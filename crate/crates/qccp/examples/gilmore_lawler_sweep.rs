//! The Gilmore-Lawler family across the mixing weight eta, plus the MILP
//! and RLT strengthenings on top.
//!
//! For each eta the classical bound, its compact LP form, and its
//! weak-sum form are three routes to the same number; the MILP bound
//! dominates all of them, and level-1 RLT dominates in turn.

use qccp::{gl, oracle, EnumerationBudget};

fn main() {
    let inst = qccp::instance::gen_erdos_renyi(8, 0.6, 1, 100, 3).expect("params are valid");
    println!(
        "instance n={} m={}",
        inst.graph().node_count(),
        inst.graph().arc_count()
    );

    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "eta", "classical", "compact", "weak-sum", "milp");
    for eta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let a = gl::gl_classical(&inst, eta).expect("instance is covered");
        let b = gl::gl_compact(&inst, eta).expect("instance is covered");
        let c = gl::gl_as_lbb(&inst, eta).expect("instance is covered");
        let m = gl::milp_bound(&inst, eta).expect("instance is covered");
        assert!((a.value - b.value).abs() <= 1e-6 * (1.0 + a.value.abs()));
        assert!((b.value - c.value).abs() <= 1e-6 * (1.0 + b.value.abs()));
        assert!(a.value <= m.value + 1e-6 * (1.0 + m.value.abs()));
        println!(
            "{eta:>5} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
            a.value, b.value, c.value, m.value
        );
    }

    let rlt = gl::rlt1(&inst).expect("instance is covered");
    let (opt, _) =
        oracle::solve_exact(&inst, &EnumerationBudget::for_nodes(9)).expect("8 nodes fit");
    println!("rlt1 {:.4} <= optimum {opt:.4}", rlt.value);
    assert!(rlt.value <= opt + 1e-6 * (1.0 + opt.abs()));
}
