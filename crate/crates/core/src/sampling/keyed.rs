use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a pseudo-random substream is used for. Distinct roles never share
/// randomness even under the same seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Role {
    Repetition = 1,
    EdgeSample = 2,
    DegreePick = 3,
    Neighbor = 4,
    AssignmentNeighbor = 5,
    IdealEdge = 6,
    IdealNeighbor = 7,
    Generic = 8,
}

/// Counter-based randomness addressed by `(seed, role, request, slot)`.
///
/// Every sampler slot owns one key and draws words by counter, so batched
/// reservoirs need no shared generator state and replays are bit-exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubstreamKey {
    pub seed: u64,
    pub role: Role,
    pub request: u64,
    pub slot: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn absorb(h: u64, x: u64) -> u64 {
    splitmix(h ^ splitmix(x))
}

impl SubstreamKey {
    pub fn new(seed: u64, role: Role) -> Self {
        SubstreamKey {
            seed,
            role,
            request: 0,
            slot: 0,
        }
    }

    pub fn request(self, request: u64) -> Self {
        SubstreamKey { request, ..self }
    }

    pub fn slot(self, slot: u64) -> Self {
        SubstreamKey { slot, ..self }
    }

    /// The `counter`-th 64-bit word of this substream.
    pub fn word(&self, counter: u64) -> u64 {
        let h = absorb(splitmix(self.seed), self.role as u64);
        let h = absorb(h, self.request);
        let h = absorb(h, self.slot);
        absorb(h, counter)
    }

    /// Uniform in `(0, 1]`.
    pub fn unit(&self, counter: u64) -> f64 {
        ((self.word(counter) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A seed derived from this key, for handing to other generators.
    pub fn derive_seed(&self) -> u64 {
        self.word(u64::MAX)
    }

    /// A conventional generator seeded from this key.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.derive_seed())
    }
}
