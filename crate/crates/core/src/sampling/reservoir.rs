use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;

use super::keyed::SubstreamKey;

/// Classic fixed-capacity reservoir (Algorithm R). Holds a uniform
/// without-replacement sample of everything offered so far.
#[derive(Clone, Debug)]
pub struct Reservoir<T> {
    capacity: usize,
    seen: u64,
    contents: Vec<T>,
    key: SubstreamKey,
}

impl<T> Reservoir<T> {
    pub fn new(capacity: usize, key: SubstreamKey) -> Self {
        Reservoir {
            capacity,
            seen: 0,
            contents: Vec::with_capacity(capacity),
            key,
        }
    }

    pub fn offer(&mut self, item: T) {
        self.seen += 1;
        if self.contents.len() < self.capacity {
            self.contents.push(item);
            return;
        }
        let j = (self.key.unit(self.seen) * self.seen as f64).ceil() as u64 - 1;
        if (j as usize) < self.capacity {
            self.contents[j as usize] = item;
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn contents(&self) -> &[T] {
        &self.contents
    }

    pub fn into_contents(self) -> Vec<T> {
        self.contents
    }
}

/// Many independent weighted size-one reservoirs fed by one stream.
///
/// Slot `i` ends holding item `j` with probability `w_j / W` where `W` is
/// the total weight offered (Chao's scheme with capacity one). Rather than
/// flipping a coin per slot per item, each slot draws the cumulative weight
/// at which it next switches: having switched at total `W_t`, it keeps its
/// item through total `W` with probability `W_t / W`, so the next switch
/// happens once the total passes `W_t / u` for a fresh uniform `u`. Slots
/// wait in a min-heap on that threshold, so a pass costs
/// O(slots * log(total) * log(slots)) instead of O(slots * items).
#[derive(Clone, Debug)]
pub struct ReservoirBank<T> {
    total: f64,
    heap: BinaryHeap<Reverse<(OrderedFloat<f64>, usize)>>,
    picks: Vec<Option<T>>,
    switches: Vec<u64>,
    keys: Vec<SubstreamKey>,
}

impl<T: Clone> ReservoirBank<T> {
    /// One slot per key.
    pub fn new(keys: Vec<SubstreamKey>) -> Self {
        let heap = (0..keys.len()).map(|i| Reverse((OrderedFloat(0.0), i))).collect();
        ReservoirBank {
            total: 0.0,
            heap,
            picks: vec![None; keys.len()],
            switches: vec![0; keys.len()],
            keys,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Offers an item with a non-negative weight. Zero-weight items are never picked.
    pub fn offer(&mut self, item: &T, weight: u64) {
        if weight == 0 {
            return;
        }
        let total = self.total + weight as f64;
        while let Some(&Reverse((threshold, slot))) = self.heap.peek() {
            if threshold.0 >= total {
                break;
            }
            self.heap.pop();
            self.picks[slot] = Some(item.clone());
            self.switches[slot] += 1;
            let u = self.keys[slot].unit(self.switches[slot]);
            self.heap.push(Reverse((OrderedFloat(total / u), slot)));
        }
        self.total = total;
    }

    /// Total weight offered so far.
    pub fn total_weight(&self) -> f64 {
        self.total
    }

    pub fn picks(&self) -> &[Option<T>] {
        &self.picks
    }

    pub fn into_picks(self) -> Vec<Option<T>> {
        self.picks
    }
}

#[cfg(test)]
mod tests {
    use super::super::keyed::Role;
    use super::*;

    fn keys(seed: u64, n: usize) -> Vec<SubstreamKey> {
        let base = SubstreamKey::new(seed, Role::Generic);
        (0..n as u64).map(|i| base.slot(i)).collect()
    }

    #[test]
    fn algorithm_r_inclusion_probability() {
        // each of 10 items kept with probability 3/10
        let mut hits = [0u32; 10];
        let trials = 20_000;
        for t in 0..trials {
            let mut r = Reservoir::new(3, SubstreamKey::new(t, Role::Generic));
            for i in 0..10 {
                r.offer(i);
            }
            assert_eq!(r.contents().len(), 3);
            for &i in r.contents() {
                hits[i] += 1;
            }
        }
        for h in hits {
            let f = h as f64 / trials as f64;
            assert!((f - 0.3).abs() < 0.02, "{f}");
        }
    }

    #[test]
    fn weighted_slots_follow_weights() {
        let mut bank = ReservoirBank::new(keys(3, 40_000));
        for (item, w) in [(0usize, 1u64), (1, 0), (2, 3), (3, 4)] {
            bank.offer(&item, w);
        }
        let mut hist = [0f64; 4];
        for p in bank.picks() {
            hist[p.unwrap()] += 1.0 / 40_000.0;
        }
        assert_eq!(hist[1], 0.0);
        for (got, want) in hist.iter().zip([0.125, 0.0, 0.375, 0.5]) {
            assert!((got - want).abs() < 0.02, "{hist:?}");
        }
    }

    #[test]
    fn single_item_always_picked() {
        let mut bank = ReservoirBank::new(keys(1, 5));
        bank.offer(&7u8, 1);
        assert!(bank.picks().iter().all(|p| *p == Some(7)));
    }

    #[test]
    fn late_items_are_reachable() {
        // last of 1000 unit-weight items should win about 1/1000 * slots times
        let slots = 20_000;
        let mut bank = ReservoirBank::new(keys(9, slots));
        for i in 0..1000u32 {
            bank.offer(&i, 1);
        }
        let tail = bank.picks().iter().filter(|p| p.unwrap() >= 900).count();
        let f = tail as f64 / slots as f64;
        assert!((f - 0.1).abs() < 0.01, "{f}");
    }
}
