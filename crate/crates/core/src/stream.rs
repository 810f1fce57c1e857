//! Replayable, pass-counted edge streams.
//!
//! A stream is the only way the estimators see the graph. Each pass yields
//! every edge exactly once in a fixed order; the pass counter is the
//! resource the estimators are accounted against.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Lines};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::edgelist::{check_pair, parse_line};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

#[derive(Clone, Debug)]
enum Source {
    Memory(Arc<[Edge]>),
    File(PathBuf),
}

enum Cursor {
    Memory(usize),
    File { lines: Lines<BufReader<File>>, lineno: usize },
    Done,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StreamStats {
    pub n: u64,
    pub m: u64,
}

/// A single-consumer cursor over a fixed edge sequence.
///
/// Without an order seed the edges arrive in source order. With a seed
/// they are shuffled once at open, so every pass replays the same
/// permutation. A seeded file stream is therefore held in memory; an
/// unseeded one is re-read from disk on each pass.
pub struct EdgeStream {
    source: Source,
    order_seed: Option<u64>,
    passes: u64,
    cursor: Option<Cursor>,
}

impl EdgeStream {
    /// Opens an edge-list file. The whole file is validated up front.
    pub fn open(path: impl AsRef<Path>, order_seed: Option<u64>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
        let mut seen = HashSet::new();
        let mut shuffled = order_seed.map(|_| Vec::new());
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(&path, e))?;
            if let Some((a, b)) = parse_line(&line, i + 1)? {
                check_pair(a, b, i + 1, &mut seen)?;
                let e = edge_from_ids(a, b, i + 1)?;
                if let Some(buf) = shuffled.as_mut() {
                    buf.push(e);
                }
            }
        }
        drop(seen);
        let source = match shuffled {
            Some(mut edges) => {
                shuffle(&mut edges, order_seed.unwrap());
                Source::Memory(edges.into())
            }
            None => Source::File(path),
        };
        Ok(EdgeStream {
            source,
            order_seed,
            passes: 0,
            cursor: None,
        })
    }

    /// Stream over an in-memory edge list. Edges are canonicalized and
    /// checked for duplicates.
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>, order_seed: Option<u64>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            let e = Edge::new(e.u, e.v)?;
            if !seen.insert(e) {
                return Err(Error::Validation {
                    line: i + 1,
                    message: format!("duplicate edge {e}"),
                });
            }
            list.push(e);
        }
        if let Some(seed) = order_seed {
            shuffle(&mut list, seed);
        }
        Ok(Self::memory(list.into(), order_seed))
    }

    /// Stream over a graph's edges (canonical order, optionally shuffled).
    pub fn from_graph(g: &Graph, order_seed: Option<u64>) -> Self {
        let mut list = g.edges().to_vec();
        if let Some(seed) = order_seed {
            shuffle(&mut list, seed);
        }
        Self::memory(list.into(), order_seed)
    }

    fn memory(edges: Arc<[Edge]>, order_seed: Option<u64>) -> Self {
        EdgeStream {
            source: Source::Memory(edges),
            order_seed,
            passes: 0,
            cursor: None,
        }
    }

    /// An independent cursor over the same source and order, with its own
    /// pass counter starting at zero.
    pub fn fork(&self) -> Self {
        EdgeStream {
            source: self.source.clone(),
            order_seed: self.order_seed,
            passes: 0,
            cursor: None,
        }
    }

    pub fn order_seed(&self) -> Option<u64> {
        self.order_seed
    }

    /// Completed passes so far.
    pub fn passes(&self) -> u64 {
        self.passes
    }

    pub fn in_pass(&self) -> bool {
        self.cursor.is_some()
    }

    pub fn begin_pass(&mut self) -> Result<()> {
        if self.cursor.is_some() {
            return Err(Error::Usage("begin_pass while a pass is active".into()));
        }
        self.cursor = Some(match &self.source {
            Source::Memory(_) => Cursor::Memory(0),
            Source::File(path) => {
                let file = File::open(path).map_err(|e| Error::io(path, e))?;
                Cursor::File {
                    lines: BufReader::new(file).lines(),
                    lineno: 0,
                }
            }
        });
        Ok(())
    }

    /// Next edge of the active pass; `None` once the pass is exhausted.
    pub fn next_edge(&mut self) -> Result<Option<Edge>> {
        let cursor = self
            .cursor
            .as_mut()
            .ok_or_else(|| Error::Usage("next_edge outside a pass".into()))?;
        match cursor {
            Cursor::Memory(i) => {
                let Source::Memory(edges) = &self.source else { unreachable!() };
                match edges.get(*i) {
                    Some(&e) => {
                        *i += 1;
                        Ok(Some(e))
                    }
                    None => {
                        *cursor = Cursor::Done;
                        Ok(None)
                    }
                }
            }
            Cursor::File { lines, lineno } => loop {
                match lines.next() {
                    None => {
                        *cursor = Cursor::Done;
                        return Ok(None);
                    }
                    Some(line) => {
                        *lineno += 1;
                        let line = line.map_err(|e| Error::Parse {
                            line: *lineno,
                            message: e.to_string(),
                        })?;
                        if let Some((a, b)) = parse_line(&line, *lineno)? {
                            return edge_from_ids(a, b, *lineno).map(Some);
                        }
                    }
                }
            },
            Cursor::Done => Ok(None),
        }
    }

    pub fn end_pass(&mut self) -> Result<()> {
        if self.cursor.take().is_none() {
            return Err(Error::Usage("end_pass without an active pass".into()));
        }
        self.passes += 1;
        Ok(())
    }

    /// Runs one full pass, handing each edge to `visit`.
    pub fn pass(&mut self, mut visit: impl FnMut(Edge)) -> Result<()> {
        self.begin_pass()?;
        while let Some(e) = self.next_edge()? {
            visit(e);
        }
        self.end_pass()
    }

    /// Counts vertices (distinct endpoints) and edges. Consumes one pass.
    pub fn stats(&mut self) -> Result<StreamStats> {
        let mut vertices: HashSet<VertexId> = HashSet::new();
        let mut m = 0;
        self.pass(|e| {
            vertices.insert(e.u);
            vertices.insert(e.v);
            m += 1;
        })?;
        Ok(StreamStats {
            n: vertices.len() as u64,
            m,
        })
    }

    /// Collects one pass into a vector. Consumes one pass.
    pub fn collect_pass(&mut self) -> Result<Vec<Edge>> {
        let mut out = Vec::new();
        self.pass(|e| out.push(e))?;
        Ok(out)
    }
}

fn edge_from_ids(a: u64, b: u64, lineno: usize) -> Result<Edge> {
    let conv = |x: u64| {
        VertexId::try_from(x).map_err(|_| Error::Parse {
            line: lineno,
            message: format!("vertex id {x} exceeds {}", VertexId::MAX),
        })
    };
    Edge::new(conv(a)?, conv(b)?).map_err(|_| Error::Validation {
        line: lineno,
        message: format!("self-loop at vertex {a}"),
    })
}

fn shuffle(edges: &mut [Edge], seed: u64) {
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
}
