/// A subset of `0..capacity` stored as packed 64-bit words.
///
/// Bits at positions `>= capacity` are always zero, so word-level operations
/// (intersection counts, iteration) never report out-of-range vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet {
    capacity: usize,
    words: Vec<u64>,
}

pub(crate) fn word_count(capacity: usize) -> usize {
    capacity.div_ceil(64)
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet { capacity, words: vec![0; word_count(capacity)] }
    }

    pub fn full(capacity: usize) -> Self {
        let mut set = VertexSet::new(capacity);
        for (i, word) in set.words.iter_mut().enumerate() {
            let remaining = capacity - i * 64;
            *word = if remaining >= 64 { u64::MAX } else { (1u64 << remaining) - 1 };
        }
        set
    }

    pub fn from_iter_with_capacity<I: IntoIterator<Item = usize>>(capacity: usize, items: I) -> Self {
        let mut set = VertexSet::new(capacity);
        for v in items {
            set.insert(v);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.capacity, "vertex {v} outside set capacity {}", self.capacity);
        let (w, b) = (v / 64, v % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    /// Returns `true` if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.capacity {
            return false;
        }
        let (w, b) = (v / 64, v % 64);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_words(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Intersects in place with a raw word slice of the same capacity, such
    /// as a graph adjacency row.
    pub fn intersect_words(&mut self, row: &[u64]) {
        debug_assert_eq!(row.len(), self.words.len());
        for (a, b) in self.words.iter_mut().zip(row) {
            *a &= b;
        }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        count_and(&self.words, &other.words)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

pub(crate) fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

pub(crate) fn iter_words(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_has_no_stray_bits() {
        for cap in [0, 1, 63, 64, 65, 130] {
            let s = VertexSet::full(cap);
            assert_eq!(s.len(), cap);
            assert_eq!(s.to_vec(), (0..cap).collect::<Vec<_>>());
        }
    }

    #[test]
    fn insert_remove_roundtrip() {
        let mut s = VertexSet::new(100);
        assert!(s.insert(70));
        assert!(!s.insert(70));
        assert!(s.contains(70));
        assert_eq!(s.first(), Some(70));
        assert!(s.remove(70));
        assert!(s.is_empty());
        assert!(!s.contains(500));
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_iter_with_capacity(10, [1, 2, 3]);
        let b = VertexSet::from_iter_with_capacity(10, [3, 4]);
        assert_eq!(a.intersection_len(&b), 1);
        let mut c = a.clone();
        c.subtract(&b);
        assert_eq!(c.to_vec(), vec![1, 2]);
        assert!(c.is_subset_of(&a));
        assert!(c.is_disjoint_from(&b));
        c.union_with(&b);
        assert_eq!(c.to_vec(), vec![1, 2, 3, 4]);
    }
}
