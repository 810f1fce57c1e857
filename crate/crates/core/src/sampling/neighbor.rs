use std::collections::HashMap;

use super::keyed::SubstreamKey;
use super::reservoir::ReservoirBank;
use crate::error::Result;
use crate::graph::{Edge, VertexId};
use crate::stream::EdgeStream;

/// How many neighbours a request wants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Want {
    /// Independent uniform samples, with replacement.
    Samples(usize),
    /// The whole neighbourhood, in stream order.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborRequest {
    pub edge: Edge,
    /// Endpoint of `edge` whose neighbourhood is sampled.
    pub anchor: VertexId,
    pub want: Want,
}

struct AnchorState {
    bank: ReservoirBank<VertexId>,
    all: Option<Vec<VertexId>>,
    seen: u64,
}

/// Services any number of neighbour requests in a single pass.
///
/// Each `Samples(k)` request owns `k` size-one reservoirs over the edges
/// incident to its anchor, keyed by `(request id, slot)`. Requests sharing
/// an anchor share one bank but never share randomness.
pub struct NeighborBank {
    requests: Vec<NeighborRequest>,
    anchors: Vec<AnchorState>,
    index: HashMap<VertexId, usize>,
    /// For each request: anchor index and the slot range in that bank.
    layout: Vec<(usize, std::ops::Range<usize>)>,
}

impl NeighborBank {
    /// `key` supplies seed and role; request ids are positions in `requests`.
    pub fn new(requests: Vec<NeighborRequest>, key: SubstreamKey) -> Self {
        let mut index: HashMap<VertexId, usize> = HashMap::new();
        let mut slot_keys: Vec<Vec<SubstreamKey>> = Vec::new();
        let mut wants_all: Vec<bool> = Vec::new();
        let mut layout = Vec::with_capacity(requests.len());
        for (id, req) in requests.iter().enumerate() {
            debug_assert!(req.edge.contains(req.anchor));
            let a = *index.entry(req.anchor).or_insert_with(|| {
                slot_keys.push(Vec::new());
                wants_all.push(false);
                slot_keys.len() - 1
            });
            let start = slot_keys[a].len();
            match req.want {
                Want::Samples(k) => {
                    let rk = key.request(id as u64);
                    slot_keys[a].extend((0..k as u64).map(|j| rk.slot(j)));
                }
                Want::All => wants_all[a] = true,
            }
            layout.push((a, start..slot_keys[a].len()));
        }
        let anchors = slot_keys
            .into_iter()
            .zip(wants_all)
            .map(|(keys, all)| AnchorState {
                bank: ReservoirBank::new(keys),
                all: all.then(Vec::new),
                seen: 0,
            })
            .collect();
        NeighborBank {
            requests,
            anchors,
            index,
            layout,
        }
    }

    pub fn observe(&mut self, e: Edge) {
        for x in [e.u, e.v] {
            if let Some(&a) = self.index.get(&x) {
                let st = &mut self.anchors[a];
                let w = e.other(x);
                st.seen += 1;
                st.bank.offer(&w, 1);
                if let Some(all) = st.all.as_mut() {
                    all.push(w);
                }
            }
        }
    }

    /// Reservoir slots plus the length of every full-neighbourhood buffer.
    pub fn stored_items(&self) -> usize {
        self.anchors
            .iter()
            .map(|a| a.bank.len() + a.all.as_ref().map_or(0, Vec::len))
            .sum()
    }

    pub fn requests(&self) -> &[NeighborRequest] {
        &self.requests
    }

    /// Per request, in request order: the sampled vertices (empty when the
    /// anchor had no incident edge) or the full neighbourhood.
    pub fn finish(self) -> Vec<Vec<VertexId>> {
        self.requests
            .iter()
            .zip(&self.layout)
            .map(|(req, (a, range))| {
                let st = &self.anchors[*a];
                match req.want {
                    Want::All => st.all.clone().unwrap_or_default(),
                    Want::Samples(_) if st.seen == 0 => Vec::new(),
                    Want::Samples(_) => st.bank.picks()[range.clone()]
                        .iter()
                        .map(|p| p.expect("anchor saw an edge"))
                        .collect(),
                }
            })
            .collect()
    }
}

/// Answers all requests in one pass.
pub fn neighbor_sample_pass(
    stream: &mut EdgeStream,
    requests: Vec<NeighborRequest>,
    key: SubstreamKey,
) -> Result<Vec<Vec<VertexId>>> {
    let mut bank = NeighborBank::new(requests, key);
    stream.pass(|e| bank.observe(e))?;
    Ok(bank.finish())
}
