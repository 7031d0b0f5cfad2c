use std::cmp::Ordering;

/// A fixed-width set of hexagon indices.
///
/// Ordering treats the set as the integer `sum 2^i` over its members, so
/// the minimum over an orbit is well defined and platform independent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HexSet {
    words: Vec<u64>,
    len: usize,
}

impl HexSet {
    pub fn empty(len: usize) -> Self {
        HexSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = HexSet::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    /// The set whose members are the set bits of `mask` (`len <= 64`).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "from_mask needs len <= 64");
        assert!(len == 64 || mask >> len == 0, "mask wider than len");
        let mut s = HexSet::empty(len);
        if len > 0 {
            s.words[0] = mask;
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = HexSet::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "hexagon index {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn is_subset(&self, other: &HexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// The low 64 bits; the whole set when `len <= 64`.
    pub fn low_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl Ord for HexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for HexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
