//! The benchmark harness end to end: config, suite run, audit, export.
//!
//! The same pipeline backs the `bench` subcommand of the CLI; here the
//! config is inline and the outputs go to stdout.

use qccp::bench;

const CONFIG: &str = r#"
bounds = ["lbb1", "lbb2", "lbb3", "gl", "gl-compact", "gl-lbb", "milp", "rgl"]
oracle = true

[[suite]]
family = "er"
n = [6, 7]
p = [0.5]
seeds = [1, 2, 3]

[[suite]]
family = "manhattan"
dims = [4, 4]
seeds = [1]
"#;

fn main() {
    let config = bench::parse_config(CONFIG).expect("config parses");
    let rows = bench::run_suite(&config).expect("known bound names");
    println!("{} rows", rows.len());

    let violations = bench::audit(&rows);
    if violations.is_empty() {
        println!("audit: every cross-bound relation holds");
    } else {
        for v in &violations {
            println!(
                "audit: {} violated on {} {}: {} vs {}",
                v.relation, v.family, v.params, v.lhs, v.rhs
            );
        }
    }
    assert!(violations.is_empty());

    // JSONL is the machine format, CSV the spreadsheet one; both carry the
    // same rows.
    let jsonl = bench::to_json_lines(&rows);
    let first = jsonl.lines().next().expect("at least one row");
    println!("\nfirst JSONL row:\n{first}");

    let csv = bench::to_csv(&rows);
    println!("\nCSV head:");
    for line in csv.lines().take(6) {
        println!("{line}");
    }
}
