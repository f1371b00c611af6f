use super::rational::Rational;

/// Field arithmetic on a concrete element type; elimination is written once against this.
pub(crate) trait Arith: Sync {
    type E: Clone + PartialEq + Send + Sync;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    /// `a - c * b`
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(&self.mul(c, b)))
    }
}

pub(crate) struct ModP(pub u32);

impl Arith for ModP {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0 as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        super::scalar::inv_mod(*a, self.0)
    }
    fn sub_mul(&self, a: &u32, c: &u32, b: &u32) -> u32 {
        let p = self.0 as u64;
        let cb = (*c as u64 * *b as u64) % p;
        ((*a as u64 + p - cb) % p) as u32
    }
}

pub(crate) struct Rat;

impl Arith for Rat {
    type E = Rational;
    fn zero(&self) -> Rational {
        Rational::ZERO
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
    fn sub_mul(&self, a: &Rational, c: &Rational, b: &Rational) -> Rational {
        if b.is_zero() {
            a.clone()
        } else {
            a - &(c * b)
        }
    }
}

/// In-place reduced row echelon form of a row-major `rows x cols` block.
///
/// Pivot search: columns left to right, first nonzero row top to bottom.
/// Returns the pivot column of each of the leading `rank` rows.
pub(crate) fn rref<A: Arith>(a: &A, data: &mut [A::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = a.inv(&data[r * cols + c]);
        for j in c..cols {
            let v = &data[r * cols + j];
            if !a.is_zero(v) {
                data[r * cols + j] = a.mul(v, &inv);
            }
        }
        let prow: Vec<A::E> = data[r * cols..(r + 1) * cols].to_vec();
        let nz: Vec<usize> = (c..cols).filter(|&j| !a.is_zero(&prow[j])).collect();
        let rr = r;
        crate::par::for_each_chunk_mut(data, cols, |i, row| {
            if i == rr {
                return;
            }
            let f = row[c].clone();
            if a.is_zero(&f) {
                return;
            }
            for &j in &nz {
                row[j] = a.sub_mul(&row[j], &f, &prow[j]);
            }
        });
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row-major product of `a (n x k)` and `b (k x m)`.
pub(crate) fn matmul<A: Arith>(
    ar: &A,
    a: &[A::E],
    b: &[A::E],
    n: usize,
    k: usize,
    m: usize,
) -> Vec<A::E> {
    let mut out = vec![ar.zero(); n * m];
    crate::par::for_each_chunk_mut(&mut out, m.max(1), |i, row| {
        if m == 0 {
            return;
        }
        for t in 0..k {
            let x = &a[i * k + t];
            if ar.is_zero(x) {
                continue;
            }
            let brow = &b[t * m..(t + 1) * m];
            for j in 0..m {
                if !ar.is_zero(&brow[j]) {
                    row[j] = ar.add(&row[j], &ar.mul(x, &brow[j]));
                }
            }
        }
    });
    out
}

/// Specialised mod-p product with a single reduction per entry.
pub(crate) fn matmul_modp(p: u32, a: &[u32], b: &[u32], n: usize, k: usize, m: usize) -> Vec<u32> {
    let mut out = vec![0u32; n * m];
    if m == 0 {
        return out;
    }
    let p64 = p as u64;
    // keep the accumulator below 2^63 between reductions
    let batch = ((1u64 << 62) / ((p64 - 1) * (p64 - 1)).max(1)).max(1) as usize;
    crate::par::for_each_chunk_mut(&mut out, m, |i, row| {
        let mut acc = vec![0u64; m];
        let mut pending = 0usize;
        for t in 0..k {
            let x = a[i * k + t] as u64;
            if x == 0 {
                continue;
            }
            let brow = &b[t * m..(t + 1) * m];
            for j in 0..m {
                acc[j] += x * brow[j] as u64;
            }
            pending += 1;
            if pending == batch {
                for v in acc.iter_mut() {
                    *v %= p64;
                }
                pending = 0;
            }
        }
        for j in 0..m {
            row[j] = (acc[j] % p64) as u32;
        }
    });
    out
}
