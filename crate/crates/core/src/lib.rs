//! Multi-pass streaming triangle counting for graphs of low degeneracy.
//!
//! The crate bundles exact oracles ([`triangles`], [`graph`]), a replayable
//! edge stream ([`stream`]), seeded one-pass samplers ([`sampling`]), a
//! three-pass estimator that assumes free degree queries ([`ideal`]), the
//! six-pass estimator ([`estimator`]) with its triangle-to-edge rule
//! ([`assignment`]), and graph generators with exact ground truth
//! ([`generators`]).
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! | example | shows |
//! |---------|-------|
//! | `exact_oracles` | naive vs. ordered triangle counts, degeneracy, edge classes |
//! | `edge_streams` | file-backed streams, pass accounting, shuffled orders |
//! | `samplers` | uniform, weighted, neighbour and closure samplers |
//! | `ideal_estimator` | the degree-oracle estimator and its variance |
//! | `main_estimator` | the six-pass estimator on a book and a wheel |
//! | `assignment_rule` | which edge each triangle is charged to |
//! | `lower_bound_instances` | YES/NO disjointness graphs |
//! | `space_scaling` | storage against `m kappa / T` |
//!
//! ```
//! use triad::{estimator::EstimatorConfig, generators::gen_book, stream::EdgeStream};
//!
//! let (g, truth) = gen_book(998).unwrap();
//! let mut stream = EdgeStream::from_graph(&g, Some(1));
//! let stats = stream.stats().unwrap();
//! let mut cfg = EstimatorConfig::new(0.2, truth.triangles, truth.kappa);
//! cfg.scale = 0.005;
//! let (estimate, report) = triad::estimator::estimate(&mut stream, stats, &cfg).unwrap();
//! assert_eq!(report.passes, 6);
//! assert!(estimate >= 0.0);
//! ```

// `!(x > 0.0)` is how parameter checks reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod bench;
pub mod cli;
pub mod edgelist;
pub mod error;
pub mod estimator;
pub mod generators;
pub mod graph;
pub mod ideal;
pub mod sampling;
pub mod stream;
pub mod triangles;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, VertexId};
pub use stream::EdgeStream;
pub use triangles::Triangle;
