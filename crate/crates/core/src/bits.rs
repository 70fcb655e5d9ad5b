//! Fixed-width vertex sets backed by 64-bit words.

use serde::{Deserialize, Serialize};

/// A subset of `0..width`, used both for adjacency rows and for selecting
/// vertex-induced subcomplexes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    width: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(width: usize) -> Self {
        Self { width, words: vec![0; width.div_ceil(64)] }
    }

    pub fn full(width: usize) -> Self {
        let mut set = Self::empty(width);
        for v in 0..width {
            set.insert(v);
        }
        set
    }

    /// Builds a set from vertex indices. Indices `>= width` panic.
    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(width);
        for v in indices {
            set.insert(v);
        }
        set
    }

    /// Interprets the low `width` bits of `mask` as a set. Requires `width <= 64`.
    pub fn from_mask(width: usize, mask: u64) -> Self {
        assert!(width <= 64, "from_mask supports at most 64 vertices");
        let mut set = Self::empty(width);
        if width > 0 {
            let keep = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            set.words[0] = mask & keep;
        }
        set
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.width, "vertex {v} out of range {}", self.width);
        let (w, b) = (v / 64, v % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        assert!(v < self.width, "vertex {v} out of range {}", self.width);
        let (w, b) = (v / 64, v % 64);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.width && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.width == other.width && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        Self { width: self.width, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    /// The complement within `0..width`.
    pub fn complement(&self) -> Self {
        let mut out = Self { width: self.width, words: self.words.iter().map(|w| !w).collect() };
        let tail = self.width % 64;
        if tail != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        out
    }

    /// Low 64 bits as an integer mask.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }
}
