//! Bit-packed linear algebra over GF(2).

use std::fmt;

use crate::error::LinalgError;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Position of the lowest set bit.
    #[inline]
    pub fn lowest_one(&self) -> Option<usize> {
        self.lowest_one_from(0)
    }

    #[inline]
    fn lowest_one_from(&self, start_word: usize) -> Option<usize> {
        self.words[start_word..]
            .iter()
            .position(|&w| w != 0)
            .map(|k| (start_word + k) * WORD + self.words[start_word + k].trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + b)
            })
        })
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense GF(2) matrix stored row-major; trailing pad bits of each row stay zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Builds the matrix whose `j`-th column has ones at `columns[j]` (repeated indices cancel).
    pub fn from_column_lists(rows: usize, columns: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for &i in col {
                m.toggle(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec { len: self.cols, words: self.row_words(i).to_vec() }
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Nonzero entries as `(row, col)` pairs in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let row = BitVec { len: self.cols, words: self.row_words(i).to_vec() };
            row.ones().map(move |j| (i, j)).collect::<Vec<_>>()
        })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (i, j) in self.entries() {
            t.set(j, i, true);
        }
        t
    }

    /// Appends `v` as a new last column.
    pub fn with_column(&self, v: &BitVec) -> Result<BitMatrix, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::Dimension { expected: self.rows, found: v.len() });
        }
        let mut m = BitMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            let src = self.row_words(i).to_vec();
            m.row_words_mut(i)[..src.len()].copy_from_slice(&src);
            if v.get(i) {
                m.set(i, self.cols, true);
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Rank by row reduction with word-level XOR.
pub fn rank(m: &BitMatrix) -> usize {
    let mut span = SpanBuilder::new(m.cols());
    (0..m.rows()).filter(|&i| span.insert(m.row(i))).count()
}

/// Whether `v` lies in the column span of `m`, decided as `rank(m) == rank(m | v)`.
pub fn in_span(v: &BitVec, m: &BitMatrix) -> Result<bool, LinalgError> {
    let extended = m.with_column(v)?;
    Ok(rank(m) == rank(&extended))
}

pub fn mul(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix, LinalgError> {
    if a.cols() != b.rows() {
        return Err(LinalgError::Dimension { expected: a.cols(), found: b.rows() });
    }
    let mut c = BitMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        let row = a.row(i);
        let mut acc = vec![0u64; c.stride];
        for k in row.ones() {
            for (x, y) in acc.iter_mut().zip(b.row_words(k)) {
                *x ^= y;
            }
        }
        c.row_words_mut(i).copy_from_slice(&acc);
    }
    Ok(c)
}

/// An incrementally grown echelon basis. Each stored vector has a distinct lowest set bit
/// (its pivot), so membership queries reduce in at most `rank` XOR passes and earlier
/// elimination work is reused as vectors are added.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    len: usize,
    pivot_of: Vec<u32>,
    basis: Vec<BitVec>,
}

const NO_PIVOT: u32 = u32::MAX;

impl SpanBuilder {
    pub fn new(len: usize) -> Self {
        Self { len, pivot_of: vec![NO_PIVOT; len], basis: Vec::new() }
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    /// Cancels the lowest bit of `v` against stored pivots until it is zero or its lowest
    /// bit is not a pivot; returns that bit.
    pub fn reduce_lead(&self, v: &mut BitVec) -> Option<usize> {
        let mut from = 0;
        loop {
            let p = v.lowest_one_from(from)?;
            let slot = self.pivot_of[p];
            if slot == NO_PIVOT {
                return Some(p);
            }
            v.xor_assign(&self.basis[slot as usize]);
            from = p / WORD;
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.len, "ambient dimension mismatch");
        let mut w = v.clone();
        self.reduce_lead(&mut w).is_none()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        assert_eq!(v.len(), self.len, "ambient dimension mismatch");
        match self.reduce_lead(&mut v) {
            None => false,
            Some(p) => {
                self.pivot_of[p] = self.basis.len() as u32;
                self.basis.push(v);
                true
            }
        }
    }
}
