//! Seeded samplers that run inside stream passes.
//!
//! Every sampler here is a plain state machine with an `observe`/`offer`
//! method; a driver feeds it the edges of one pass. Several samplers can be
//! driven by the same physical pass, which is how the estimators keep their
//! pass budgets independent of how many instances they run.

mod closure;
mod keyed;
mod neighbor;
mod reservoir;

use rand::distributions::{Distribution, WeightedIndex};

pub use closure::{closure_check_pass, ClosureAnswer, ClosureQuery};
pub use keyed::{Role, SubstreamKey};
pub use neighbor::{neighbor_sample_pass, NeighborBank, NeighborRequest, Want};
pub use reservoir::{Reservoir, ReservoirBank};

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::stream::EdgeStream;

/// Bank of `r` size-one uniform edge reservoirs; `r` samples with replacement.
pub fn uniform_edge_bank(r: usize, key: SubstreamKey) -> ReservoirBank<Edge> {
    ReservoirBank::new((0..r as u64).map(|i| key.slot(i)).collect())
}

/// `r` independent uniform edges (with replacement) in one pass.
pub fn uniform_edge_sample(stream: &mut EdgeStream, r: usize, seed: u64) -> Result<Vec<Edge>> {
    if r == 0 {
        return Err(Error::Input("sample size must be at least 1".into()));
    }
    let mut bank = uniform_edge_bank(r, SubstreamKey::new(seed, Role::EdgeSample));
    stream.pass(|e| bank.offer(&e, 1))?;
    bank.into_picks()
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Input("cannot sample from an empty stream".into()))
}

/// `count` independent draws of an index with probability proportional to
/// its weight. Consumes no pass.
pub fn weighted_pick(weights: &[u64], count: usize, key: SubstreamKey) -> Result<Vec<usize>> {
    let dist = WeightedIndex::new(weights)
        .map_err(|e| Error::Input(format!("cannot sample from weights: {e}")))?;
    let mut rng = key.rng();
    Ok((0..count).map(|_| dist.sample(&mut rng)).collect())
}
