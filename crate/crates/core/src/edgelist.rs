//! The plain-text edge-list format.
//!
//! One edge per line: two base-10 non-negative integers separated by
//! whitespace. Lines whose first non-blank character is `#` and blank
//! lines are skipped. Self-loops and repeated edges (in either
//! orientation) are rejected with the offending line number.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

/// Parses one line. `Ok(None)` for comments and blank lines.
pub fn parse_line(line: &str, lineno: usize) -> Result<Option<(u64, u64)>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let mut fields = trimmed.split_whitespace();
    let mut next_id = |what: &str| -> Result<u64> {
        let tok = fields.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("missing {what} vertex"),
        })?;
        tok.parse::<u64>().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("{tok:?} is not a non-negative integer"),
        })
    };
    let a = next_id("first")?;
    let b = next_id("second")?;
    if let Some(extra) = fields.next() {
        return Err(Error::Parse {
            line: lineno,
            message: format!("unexpected trailing field {extra:?}"),
        });
    }
    Ok(Some((a, b)))
}

/// Reads every edge of a source, checking self-loops and duplicates.
/// Returns `(line, a, b)` triples in file order.
pub fn read_validated<R: BufRead>(reader: R) -> Result<Vec<(usize, u64, u64)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if let Some((a, b)) = parse_line(&line, lineno)? {
            check_pair(a, b, lineno, &mut seen)?;
            out.push((lineno, a, b));
        }
    }
    Ok(out)
}

pub(crate) fn check_pair(a: u64, b: u64, lineno: usize, seen: &mut HashSet<(u64, u64)>) -> Result<()> {
    if a == b {
        return Err(Error::Validation {
            line: lineno,
            message: format!("self-loop at vertex {a}"),
        });
    }
    if !seen.insert((a.min(b), a.max(b))) {
        return Err(Error::Validation {
            line: lineno,
            message: format!("duplicate edge {a} {b}"),
        });
    }
    Ok(())
}

/// Parses edge-list text into a graph, remapping ids to `[0, n)` by
/// ascending original id.
pub fn parse_graph(text: &str) -> Result<Graph> {
    graph_from_pairs(read_validated(text.as_bytes())?)
}

/// Loads an edge-list file into memory with dense ids.
pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    graph_from_pairs(read_validated(BufReader::new(file))?)
}

fn graph_from_pairs(pairs: Vec<(usize, u64, u64)>) -> Result<Graph> {
    let labels: Vec<u64> = pairs
        .iter()
        .flat_map(|&(_, a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if labels.len() > VertexId::MAX as usize {
        return Err(Error::Input("too many vertices".into()));
    }
    let dense: HashMap<u64, VertexId> = labels.iter().enumerate().map(|(i, &l)| (l, i as VertexId)).collect();
    let edges = pairs
        .iter()
        .map(|&(_, a, b)| Edge::new(dense[&a], dense[&b]).expect("validated"))
        .collect();
    Ok(Graph::from_canonical(labels.len(), edges).with_labels(labels))
}

/// Writes edges one per line, `u v`.
pub fn write_edges<W: Write>(mut w: W, edges: &[Edge]) -> std::io::Result<()> {
    for e in edges {
        writeln!(w, "{} {}", e.u, e.v)?;
    }
    w.flush()
}

pub fn save_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edges(std::io::BufWriter::new(file), g.edges()).map_err(|e| Error::io(path, e))
}
