//! Text file format for instances.
//!
//! Line 1: `QCCP v1 <n> <m> <mode>` with mode `successor-only` or
//! `general`. Then `m` lines `<tail> <head>`, one arc per line; arc ids are
//! the 0-based line order. Then `COSTS <k>` followed by `k` lines
//! `<e> <f> <cost>`. Costs print in shortest round-trip form, so a write
//! followed by a read reproduces the instance exactly.

use super::{InstanceError, QccpInstance, SupportMode};
use crate::digraph::{Digraph, GraphError};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn format_err(line: usize, reason: impl Into<String>) -> IoError {
    IoError::Format {
        line,
        reason: reason.into(),
    }
}

pub fn write_instance(inst: &QccpInstance, path: impl AsRef<Path>) -> Result<(), IoError> {
    let g = inst.graph();
    let mut out = String::new();
    writeln!(
        out,
        "QCCP v1 {} {} {}",
        g.node_count(),
        g.arc_count(),
        inst.support_mode().token()
    )
    .expect("string write");
    for &(t, h) in g.arcs() {
        writeln!(out, "{t} {h}").expect("string write");
    }
    writeln!(out, "COSTS {}", inst.entry_count()).expect("string write");
    for (e, f, cost) in inst.entries() {
        writeln!(out, "{e} {f} {cost}").expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<QccpInstance, IoError> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<QccpInstance, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| format_err(1, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "QCCP" || fields[1] != "v1" {
        return Err(format_err(1, "expected header `QCCP v1 <n> <m> <mode>`"));
    }
    let n: usize = fields[2]
        .parse()
        .map_err(|_| format_err(1, "node count is not an integer"))?;
    let m: usize = fields[3]
        .parse()
        .map_err(|_| format_err(1, "arc count is not an integer"))?;
    let mode = SupportMode::from_token(fields[4])
        .ok_or_else(|| format_err(1, format!("unknown support mode `{}`", fields[4])))?;

    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| format_err(m + 1, "arc section ended early"))?;
        let mut it = line.split_whitespace();
        let parse_node = |tok: Option<&str>| -> Result<usize, IoError> {
            tok.ok_or_else(|| format_err(idx + 1, "expected `<tail> <head>`"))?
                .parse()
                .map_err(|_| format_err(idx + 1, "node id is not an integer"))
        };
        let tail = parse_node(it.next())?;
        let head = parse_node(it.next())?;
        if it.next().is_some() {
            return Err(format_err(idx + 1, "trailing tokens after arc"));
        }
        arcs.push((tail, head));
    }

    let (cost_idx, cost_header) = lines
        .next()
        .ok_or_else(|| format_err(m + 2, "missing COSTS section"))?;
    let fields: Vec<&str> = cost_header.split_whitespace().collect();
    if fields.len() != 2 || fields[0] != "COSTS" {
        return Err(format_err(cost_idx + 1, "expected `COSTS <k>`"));
    }
    let k: usize = fields[1]
        .parse()
        .map_err(|_| format_err(cost_idx + 1, "cost count is not an integer"))?;

    let mut entries = Vec::with_capacity(k);
    for _ in 0..k {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| format_err(cost_idx + 2, "cost section ended early"))?;
        let mut it = line.split_whitespace();
        let mut next = |what: &str| -> Result<&str, IoError> {
            it.next()
                .ok_or_else(|| format_err(idx + 1, format!("expected {what}")))
        };
        let e: usize = next("arc id")?
            .parse()
            .map_err(|_| format_err(idx + 1, "arc id is not an integer"))?;
        let f: usize = next("arc id")?
            .parse()
            .map_err(|_| format_err(idx + 1, "arc id is not an integer"))?;
        let cost: f64 = next("cost")?
            .parse()
            .map_err(|_| format_err(idx + 1, "cost is not a number"))?;
        entries.push((e, f, cost));
    }
    for (idx, line) in lines {
        if !line.trim().is_empty() {
            return Err(format_err(idx + 1, "trailing content after cost section"));
        }
    }

    let graph = Digraph::new(n, &arcs)?;
    Ok(QccpInstance::new(graph, &entries, mode)?)
}

#[cfg(test)]
mod tests {
    use super::super::gen::gen_erdos_renyi;
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("qccp-io-tests");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn round_trip_generated_instance() {
        let inst = gen_erdos_renyi(7, 0.5, 1, 100, 42).unwrap();
        let path = tmp("round_trip.qccp");
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn rejects_cost_off_support_in_successor_only_mode() {
        // Arcs 0=(0,1) and 1=(2,0): head(0)=1 != tail(1)=2.
        let text = "QCCP v1 3 2 successor-only\n0 1\n2 0\nCOSTS 1\n0 1 5\n";
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(
            err,
            IoError::Instance(InstanceError::NotSuccessorPair { e: 0, f: 1 })
        ));
    }

    #[test]
    fn empty_cost_section_is_zero_matrix() {
        let text = "QCCP v1 2 2 successor-only\n0 1\n1 0\nCOSTS 0\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.entry_count(), 0);
        assert_eq!(inst.q(0, 1), 0.0);
    }

    #[test]
    fn rejects_malformed_header() {
        for bad in [
            "",
            "QCCP v2 2 2 successor-only\n",
            "QCCP v1 2 successor-only\n",
            "QCCP v1 2 2 sideways\n",
        ] {
            assert!(matches!(parse_instance(bad), Err(IoError::Format { .. })));
        }
    }

    #[test]
    fn rejects_dangling_arc_id() {
        let text = "QCCP v1 2 2 successor-only\n0 1\n1 0\nCOSTS 1\n0 7 3\n";
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(
            err,
            IoError::Instance(InstanceError::ArcOutOfRange { f: 7, .. })
        ));
    }

    #[test]
    fn preserves_fractional_costs_exactly() {
        let g = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        let q = 0.1 + 0.2; // not representable as a short decimal
        let inst =
            QccpInstance::new(g, &[(0, 1, q), (1, 0, -1e-9)], SupportMode::SuccessorOnly).unwrap();
        let path = tmp("fractional.qccp");
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(back.q(0, 1), q);
        assert_eq!(back.q(1, 0), -1e-9);
    }
}
