//! Command line front end: generate instances, run single bounds, drive
//! benchmark suites.
//!
//! Exit codes: 0 success (including bounds that stop on a size cap, which
//! report a status instead), 2 dominance audit violation, 3 internal
//! failure, 64 usage error.  `RAYON_NUM_THREADS` caps the bench worker
//! pool.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qccp::bench::{
    audit, bound_row, parse_config, random_qap, run_suite, to_csv, to_json_lines, validate_bound,
    BoundOptions, InstanceDesc, BOUND_NAMES,
};
use qccp::instance::{
    gen_angle_distance, gen_erdos_renyi, gen_manhattan, gen_qap_reduction, qap_big_m,
    read_instance, write_instance,
};
use qccp::reformulate::{DEFAULT_MAX_ITERS, DEFAULT_MIN_GAIN};

#[derive(Parser)]
#[command(name = "qccp", version, about = "Quadratic cycle cover bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance file and print its size.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Run one bound on an instance file and print a JSON row.
    Bound {
        /// Instance file in the QCCP v1 text format.
        instance: PathBuf,
        /// Bound name.
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(BOUND_NAMES))]
        bound: String,
        /// Representation weight for the Gilmore-Lawler family; pins the
        /// weight of rgl.
        #[arg(long)]
        eta: Option<f64>,
        /// Iteration cap for the reformulation bounds.
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        /// Relative per-round gain under which reformulation stops.
        #[arg(long, default_value_t = DEFAULT_MIN_GAIN)]
        min_gain: f64,
    },
    /// Run the suite described by a TOML config and audit the results.
    Bench {
        config: PathBuf,
        /// Also write the rows as JSON lines.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the CSV table here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Random digraph: every ordered pair becomes an arc with probability p.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        cost_lo: i64,
        #[arg(long, default_value_t = 100)]
        cost_hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Toroidal grid with alternating arc directions per layer.
    Manhattan {
        /// Grid side lengths, comma separated, each at least 2.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        cost_lo: i64,
        #[arg(long, default_value_t = 100)]
        cost_hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Random points in a square; costs mix turn angle and arc length.
    Angle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// Weight of the angle term.
        #[arg(long, default_value_t = 40.0)]
        rho: f64,
        /// Coordinates are integers in [0, coord-hi].
        #[arg(long, default_value_t = 500)]
        coord_hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Assignment-gadget reduction of a random quadratic assignment
    /// instance; its optimal cover cost equals the assignment optimum.
    Qap {
        /// Number of facilities (at least 3 for a coverable gadget).
        #[arg(long)]
        n: usize,
        /// Flow and distance entries are integers in [0, weight-hi].
        #[arg(long, default_value_t = 10)]
        weight_hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 64 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.cmd {
        Cmd::Generate { family } => {
            let (inst, out) = match family {
                Family::Er {
                    n,
                    p,
                    cost_lo,
                    cost_hi,
                    seed,
                    out,
                } => (gen_erdos_renyi(n, p, cost_lo, cost_hi, seed)?, out),
                Family::Manhattan {
                    dims,
                    cost_lo,
                    cost_hi,
                    seed,
                    out,
                } => (gen_manhattan(&dims, cost_lo, cost_hi, seed)?, out),
                Family::Angle {
                    n,
                    p,
                    rho,
                    coord_hi,
                    seed,
                    out,
                } => (gen_angle_distance(n, p, rho, coord_hi, seed)?, out),
                Family::Qap {
                    n,
                    weight_hi,
                    seed,
                    out,
                } => {
                    let (w, d) = random_qap(n, weight_hi, seed);
                    (gen_qap_reduction(&w, &d, qap_big_m(&w, &d))?, out)
                }
            };
            write_instance(&inst, &out)?;
            let g = inst.graph();
            println!("n={} m={}", g.node_count(), g.arc_count());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bound {
            instance,
            bound,
            eta,
            max_iters,
            min_gain,
        } => {
            let opts = BoundOptions {
                eta,
                max_iters,
                min_gain,
            };
            if let Err(err) = validate_bound(&bound, &opts) {
                eprintln!("error: {err}");
                return Ok(ExitCode::from(64));
            }
            let inst = read_instance(&instance)?;
            let g = inst.graph();
            let desc = InstanceDesc {
                family: instance
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "instance".into()),
                params: format!("n={} m={}", g.node_count(), g.arc_count()),
                seed: None,
            };
            let row = bound_row(&desc, &inst, &bound, &opts);
            println!("{}", serde_json::to_string(&row)?);
            if row.is_internal_failure() {
                Ok(ExitCode::from(3))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Cmd::Bench { config, json, csv } => {
            let text = std::fs::read_to_string(&config)?;
            let parsed = parse_config(&text)?;
            let rows = run_suite(&parsed)?;
            if let Some(path) = json {
                std::fs::write(path, to_json_lines(&rows))?;
            }
            let table = to_csv(&rows);
            match csv {
                Some(path) => std::fs::write(path, table)?,
                None => print!("{table}"),
            }
            let violations = audit(&rows);
            for v in &violations {
                let seed = v.seed.map(|s| s.to_string()).unwrap_or_default();
                eprintln!(
                    "audit violation: {} {} seed={} {}: {} vs {}",
                    v.family, v.params, seed, v.relation, v.lhs, v.rhs
                );
            }
            let internal = rows.iter().filter(|r| r.is_internal_failure()).count();
            if internal > 0 {
                eprintln!("{internal} row(s) failed internally");
                Ok(ExitCode::from(3))
            } else if !violations.is_empty() {
                eprintln!("audit: {} violation(s)", violations.len());
                Ok(ExitCode::from(2))
            } else {
                eprintln!("audit: ok ({} rows)", rows.len());
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}
