//! The weak-sum bound ladder on one instance: lbb1 fits the best
//! incident split under Q, lbb2 frees the supports, lbb3 re-prices each
//! arc against its own subproblem, and the skew variant twists lbb1 with
//! an antisymmetric correction.  All of them stay below the optimum.

use qccp::{lbb, oracle, EnumerationBudget};

fn main() {
    let inst = qccp::instance::gen_angle_distance(8, 0.5, 40.0, 500, 1).expect("params are valid");
    println!(
        "angle-distance instance: n={} m={}",
        inst.graph().node_count(),
        inst.graph().arc_count()
    );

    let b1 = lbb::lbb1(&inst).expect("instance is covered");
    let b1s = lbb::lbb1_skew(&inst).expect("instance is covered");
    let b2 = lbb::lbb2(&inst).expect("instance is covered");
    let b3 = lbb::lbb3(&inst).expect("instance is covered");
    let (opt, _) = oracle::solve_exact(&inst, &EnumerationBudget::for_nodes(9))
        .expect("8 nodes fit the budget");

    for r in [&b1, &b1s, &b2, &b3] {
        println!(
            "{:<10} {:>10.3}   ({} lp rows, {} iterations)",
            r.name, r.value, r.lp_stats.rows, r.lp_stats.iterations
        );
    }
    println!("{:<10} {opt:>10.3}", "optimum");

    assert!(b1.value <= b2.value + 1e-6);
    assert!(b2.value <= b3.value + 1e-6);
    assert!(b1.value <= b1s.value + 1e-6);
    assert!(b3.value <= opt + 1e-6 * (1.0 + opt.abs()));

    // Each report carries its certificate: potentials summing to the
    // value and a linearization vector priced by covers.
    let y = b1.dual_y.as_ref().expect("lbb1 certifies");
    let total: f64 = y.iter().sum();
    assert!((total - b1.value).abs() <= 1e-6 * (1.0 + b1.value.abs()));
    println!("lbb1 potentials sum back to {total:.3}");
}
