//! Bit-packed GF(2) matrices and Gaussian elimination.
//!
//! Rows are stored as contiguous 64-bit words so that row XOR, the inner
//! loop of every rank and membership computation in the crate, runs a
//! word at a time.

const WORD_BITS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD_BITS).max(1);
        BinaryMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn word(&self, r: usize, c: usize) -> (usize, u64) {
        (r * self.stride + c / WORD_BITS, 1u64 << (c % WORD_BITS))
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let (w, m) = self.word(r, c);
        self.bits[w] & m != 0
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let (w, m) = self.word(r, c);
        if value {
            self.bits[w] |= m;
        } else {
            self.bits[w] &= !m;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.bits.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// XORs row `src` into row `dst`.
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        assert!(dst != src, "xor_rows with identical rows");
        for w in 0..self.stride {
            let v = self.bits[src * self.stride + w];
            self.bits[dst * self.stride + w] ^= v;
        }
    }

    /// XORs a row of `other` into a row of `self`; the column layouts must
    /// match.
    pub fn xor_row_from(&mut self, dst: usize, other: &BinaryMatrix, src: usize) {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        for w in 0..self.stride {
            self.bits[dst * self.stride + w] ^= other.bits[src * other.stride + w];
        }
    }

    pub fn row_is_zero_in_cols(&self, r: usize, col_end: usize) -> bool {
        (0..col_end).all(|c| !self.get(r, c))
    }

    /// In-place reduction to reduced row echelon form over columns
    /// `0..col_limit` (remaining columns ride along, which is how the
    /// membership solver keeps its combination bookkeeping). Returns the
    /// pivot list as (column, row) pairs.
    pub fn reduce_cols(&mut self, col_limit: usize) -> Vec<(usize, usize)> {
        assert!(col_limit <= self.cols);
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for c in 0..col_limit {
            if next_row == self.rows {
                break;
            }
            let Some(p) = (next_row..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next_row, p);
            for r in 0..self.rows {
                if r != next_row && self.get(r, c) {
                    self.xor_rows(r, next_row);
                }
            }
            pivots.push((c, next_row));
            next_row += 1;
        }
        pivots
    }

    /// GF(2) rank. The receiver is not modified.
    pub fn rank(&self) -> usize {
        self.clone().reduce_cols(self.cols).len()
    }
}
