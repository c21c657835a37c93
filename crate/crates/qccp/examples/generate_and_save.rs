//! Builds one instance per generator family, saves it to the text format,
//! and reads it back.

use qccp::instance::{
    gen_angle_distance, gen_erdos_renyi, gen_manhattan, gen_qap_reduction, qap_big_m,
    read_instance, write_instance,
};

fn main() {
    let er = gen_erdos_renyi(8, 0.5, 1, 100, 7).expect("params are valid");
    println!(
        "erdos-renyi     n={} m={} entries={}",
        er.graph().node_count(),
        er.graph().arc_count(),
        er.entry_count()
    );

    // A 5x5 torus walked by unit steps; every node keeps degree 2+2.
    let grid = gen_manhattan(&[5, 5], 1, 100, 7).expect("params are valid");
    println!(
        "manhattan 5x5   n={} m={}",
        grid.graph().node_count(),
        grid.graph().arc_count()
    );

    let angle = gen_angle_distance(20, 0.3, 40.0, 500, 7).expect("params are valid");
    println!(
        "angle-distance  n={} m={}",
        angle.graph().node_count(),
        angle.graph().arc_count()
    );

    // A 3x3 assignment problem expressed as a cycle cover instance.
    let w = vec![
        vec![0.0, 3.0, 1.0],
        vec![3.0, 0.0, 2.0],
        vec![1.0, 2.0, 0.0],
    ];
    let d = vec![
        vec![0.0, 2.0, 4.0],
        vec![2.0, 0.0, 1.0],
        vec![4.0, 1.0, 0.0],
    ];
    let big_m = qap_big_m(&w, &d);
    let qap = gen_qap_reduction(&w, &d, big_m).expect("matrices are square");
    println!(
        "qap gadget 3    n={} m={} (big-M {big_m})",
        qap.graph().node_count(),
        qap.graph().arc_count()
    );

    let path = std::env::temp_dir().join("qccp_example_instance.txt");
    write_instance(&er, &path).expect("temp dir is writable");
    let back = read_instance(&path).expect("file just written");
    assert_eq!(back.graph().arcs(), er.graph().arcs());
    assert_eq!(back.entry_count(), er.entry_count());
    println!("roundtrip through {} ok", path.display());
}
