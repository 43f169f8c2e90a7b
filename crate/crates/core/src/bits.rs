//! Small helpers for word-packed bit sets.

/// Iterator over the set bits of a `u64`, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct Ones(u64);

impl Iterator for Ones {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

#[inline]
pub(crate) fn ones(mask: u64) -> Ones {
    Ones(mask)
}

#[inline]
pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// A dense `rows x cols` bit matrix, one row per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitRows {
            words,
            data: vec![0; rows * words],
        }
    }

    #[inline]
    pub(crate) fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1u64 << (c % 64);
    }

    /// `row(dst) |= row(src)`.
    pub(crate) fn or_into(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for k in 0..w {
            let v = self.data[src * w + k];
            self.data[dst * w + k] |= v;
        }
    }
}

#[inline]
pub(crate) fn contains(row: &[u64], c: usize) -> bool {
    row[c / 64] >> (c % 64) & 1 == 1
}

pub(crate) fn first_one(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub(crate) fn last_one(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .rev()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}
