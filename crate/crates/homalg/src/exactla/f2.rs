//! Bit-packed elimination over F_2.

pub(crate) struct BitMat {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMat {
    pub fn from_dense(data: &[u32], rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        let mut bits = vec![0u64; rows * words];
        for i in 0..rows {
            let row = &data[i * cols..(i + 1) * cols];
            let out = &mut bits[i * words..(i + 1) * words];
            for (j, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    out[j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        BitMat { rows, cols, words, bits }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        for k in 0..w {
            self.bits.swap(a * w + k, b * w + k);
        }
    }

    /// Reduced row echelon form in place, same pivot rule as the generic path.
    pub fn rref(&mut self) -> Vec<usize> {
        let w = self.words;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(pr, r);
            let start = c / 64;
            let prow: Vec<u64> = self.bits[r * w + start..(r + 1) * w].to_vec();
            let (word, bit) = (c / 64, c % 64);
            let tail = &mut self.bits[(r + 1) * w..];
            crate::par::for_each_chunk_mut(tail, w, |_, row| {
                if (row[word] >> bit) & 1 == 1 {
                    for (x, y) in row[start..].iter_mut().zip(&prow) {
                        *x ^= *y;
                    }
                }
            });
            pivots.push(c);
            r += 1;
        }
        // back-substitution among the pivot rows
        for (k, &c) in pivots.iter().enumerate().rev() {
            let start = c / 64;
            let prow: Vec<u64> = self.bits[k * w + start..(k + 1) * w].to_vec();
            let (word, bit) = (c / 64, c % 64);
            let head = &mut self.bits[..k * w];
            crate::par::for_each_chunk_mut(head, w, |_, row| {
                if (row[word] >> bit) & 1 == 1 {
                    for (x, y) in row[start..].iter_mut().zip(&prow) {
                        *x ^= *y;
                    }
                }
            });
        }
        pivots
    }

    /// Dense copy of the first `nrows` rows.
    pub fn to_dense_rows(&self, nrows: usize) -> Vec<u32> {
        let mut out = vec![0u32; nrows * self.cols];
        for i in 0..nrows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out[i * self.cols + j] = 1;
                }
            }
        }
        out
    }
}
