use super::CochainComplex;
use crate::exactla::Matrix;

/// `Cw ⊗ Cv` with its block layout: degree `n` holds blocks `(p, q = n - p)` in
/// increasing `p`; inside a block the index of `w_i ⊗ v_j` is `i * dim Cv^q + j`.
#[derive(Clone, Debug)]
pub struct TensorComplex {
    pub complex: CochainComplex,
    offsets: Vec<Vec<(i64, usize)>>,
    left: CochainComplex,
    right: CochainComplex,
}

impl TensorComplex {
    /// Coordinate of `w_i ⊗ v_j` with `w_i ∈ Cw^p`, `v_j ∈ Cv^q`.
    pub fn index(&self, p: i64, q: i64, i: usize, j: usize) -> usize {
        self.offset(p, q).expect("block present") + i * self.right.dim(q) + j
    }

    pub fn offset(&self, p: i64, q: i64) -> Option<usize> {
        let n = p + q;
        if n < self.complex.lo() || n > self.complex.hi() {
            return None;
        }
        self.offsets[(n - self.complex.lo()) as usize]
            .iter()
            .find(|(pp, _)| *pp == p)
            .map(|&(_, o)| o)
    }

    pub fn blocks(&self, n: i64) -> Vec<(i64, i64, usize)> {
        if n < self.complex.lo() || n > self.complex.hi() {
            return vec![];
        }
        self.offsets[(n - self.complex.lo()) as usize].iter().map(|&(p, o)| (p, n - p, o)).collect()
    }

    pub fn left(&self) -> &CochainComplex {
        &self.left
    }

    pub fn right(&self) -> &CochainComplex {
        &self.right
    }
}

/// Koszul-signed tensor product: `d(w⊗v) = dw⊗v + (-1)^p w⊗dv`.
pub fn tensor(cw: &CochainComplex, cv: &CochainComplex) -> TensorComplex {
    assert_eq!(cw.field(), cv.field(), "tensor: field mismatch");
    let field = cw.field();
    let lo = cw.lo() + cv.lo();
    let hi = cw.hi() + cv.hi();
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    for n in lo..=hi {
        let mut off = 0;
        let mut bl = Vec::new();
        for p in cw.degrees() {
            let q = n - p;
            let sz = cw.dim(p) * cv.dim(q);
            if sz > 0 {
                bl.push((p, off));
                off += sz;
            }
        }
        dims.push(off);
        offsets.push(bl);
    }
    let mut tc = TensorComplex {
        complex: CochainComplex::concentrated(field, 0, 0),
        offsets,
        left: cw.clone(),
        right: cv.clone(),
    };
    let find = |offs: &Vec<Vec<(i64, usize)>>, n: i64, p: i64| -> Option<usize> {
        if n < lo || n > hi {
            return None;
        }
        offs[(n - lo) as usize].iter().find(|(pp, _)| *pp == p).map(|&(_, o)| o)
    };
    let mut diffs = Vec::new();
    for n in lo..hi {
        let k = (n - lo) as usize;
        let mut d = Matrix::zeros(field, dims[k + 1], dims[k]);
        for &(p, off) in &tc.offsets[k] {
            let q = n - p;
            let (dw, dv) = (cw.dim(p), cv.dim(q));
            if let (Some(m), Some(t)) = (cw.d_ref(p), find(&tc.offsets, n + 1, p + 1)) {
                for i in 0..dw {
                    for j in 0..dv {
                        for i2 in 0..cw.dim(p + 1) {
                            let x = m.get(i2, i);
                            if !x.is_zero() {
                                d.add_at(t + i2 * dv + j, off + i * dv + j, &x);
                            }
                        }
                    }
                }
            }
            if let (Some(m), Some(t)) = (cv.d_ref(q), find(&tc.offsets, n + 1, p)) {
                let dv2 = cv.dim(q + 1);
                for i in 0..dw {
                    for j in 0..dv {
                        for j2 in 0..dv2 {
                            let x = m.get(j2, j);
                            if !x.is_zero() {
                                d.add_at(t + i * dv2 + j2, off + i * dv + j, &x.signed(p));
                            }
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    tc.complex = CochainComplex::new(field, lo, dims, diffs).expect("tensor shapes");
    tc
}
