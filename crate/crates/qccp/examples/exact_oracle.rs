//! Ground truth at desk scale: enumerate every cycle cover of a small
//! graph, then solve the quadratic problem exactly with and without a
//! warm lower bound.

use qccp::{lbb, oracle, EnumerationBudget};

fn main() {
    let inst = qccp::instance::gen_erdos_renyi(7, 0.6, 1, 60, 11).expect("params are valid");
    let g = inst.graph();
    let budget = EnumerationBudget::for_nodes(8);

    let covers = oracle::enumerate_covers(g, &budget).expect("7 nodes fit the budget");
    println!("n={} m={} has {} cycle covers", g.node_count(), g.arc_count(), covers.len());

    let (value, best) = oracle::solve_exact(&inst, &budget).expect("instance is covered");
    println!(
        "optimum {value} via cycles {:?}",
        best.cycles().iter().map(Vec::len).collect::<Vec<_>>()
    );

    // A valid lower bound lets the search stop the moment it is matched.
    let hint = lbb::lbb1(&inst).expect("covered instance").value;
    let (hinted, _) = oracle::solve_exact_with_hint(&inst, &budget, Some(hint))
        .expect("instance is covered");
    assert_eq!(hinted, value);
    println!("hint {hint} reproduces the optimum {hinted}");

    // Brute force agrees: price every enumerated cover by hand.
    let brute = covers
        .iter()
        .map(|c| inst.objective(c).expect("cover fits instance"))
        .fold(f64::INFINITY, f64::min);
    assert_eq!(brute, value);
    println!("exhaustive pricing gives {brute} as well");
}
