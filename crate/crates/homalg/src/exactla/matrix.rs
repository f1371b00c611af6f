use std::fmt;

use super::arith::{self, ModP, Rat};
use super::f2::BitMat;
use super::rational::Rational;
use super::scalar::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Store {
    P(Vec<u32>),
    Q(Vec<Rational>),
}

/// Dense matrix over an exact field, row-major, entries in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Store,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let data = match field {
            FieldSpec::Rationals => Store::Q(vec![Rational::ZERO; rows * cols]),
            FieldSpec::PrimeField(_) => Store::P(vec![0; rows * cols]),
        };
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, &field.one());
        }
        m
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, &field.from_i64(v));
            }
        }
        m
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: FieldSpec, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Row-major entries; `entries.len()` must equal `rows * cols`.
    pub fn from_entries(field: FieldSpec, rows: usize, cols: usize, entries: &[Scalar]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Self::zeros(field, rows, cols);
        for (k, v) in entries.iter().enumerate() {
            m.set(k / cols.max(1), k % cols.max(1), v);
        }
        m
    }

    pub(crate) fn from_residues(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { field: FieldSpec::PrimeField(p), rows, cols, data: Store::P(data) }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        let k = i * self.cols + j;
        match (&self.data, self.field) {
            (Store::P(d), FieldSpec::PrimeField(p)) => Scalar::Fp(d[k], p),
            (Store::Q(d), _) => Scalar::Q(d[k].clone()),
            _ => unreachable!(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let k = i * self.cols + j;
        match (&mut self.data, v) {
            (Store::P(d), Scalar::Fp(x, p)) if FieldSpec::PrimeField(*p) == self.field => d[k] = *x,
            (Store::Q(d), Scalar::Q(x)) => d[k] = x.clone(),
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let s = self.get(i, j) + v;
        self.set(i, j, &s);
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Store::P(d) => d.iter().all(|&x| x == 0),
            Store::Q(d) => d.iter().all(Rational::is_zero),
        }
    }

    pub fn entries(&self) -> Vec<Scalar> {
        (0..self.rows * self.cols)
            .map(|k| self.get(k / self.cols, k % self.cols))
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        macro_rules! tr {
            ($src:expr, $dst:expr) => {
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        $dst[j * self.rows + i] = $src[i * self.cols + j].clone();
                    }
                }
            };
        }
        match (&self.data, &mut t.data) {
            (Store::P(s), Store::P(d)) => tr!(s, d),
            (Store::Q(s), Store::Q(d)) => tr!(s, d),
            _ => unreachable!(),
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.field, o.field, "field mismatch");
        assert_eq!(self.cols, o.rows, "shape mismatch {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols);
        let (n, k, m) = (self.rows, self.cols, o.cols);
        let data = match (&self.data, &o.data, self.field) {
            (Store::P(a), Store::P(b), FieldSpec::PrimeField(p)) => Store::P(arith::matmul_modp(p, a, b, n, k, m)),
            (Store::Q(a), Store::Q(b), _) => Store::Q(arith::matmul(&Rat, a, b, n, k, m)),
            _ => unreachable!(),
        };
        Matrix { field: self.field, rows: n, cols: m, data }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        if let (Store::P(d), FieldSpec::PrimeField(p)) = (&self.data, self.field) {
            let nz: Vec<(usize, u64)> = v
                .iter()
                .enumerate()
                .filter_map(|(j, s)| match s {
                    Scalar::Fp(0, q) if *q == p => None,
                    Scalar::Fp(a, q) if *q == p => Some((j, *a as u64)),
                    _ => panic!("scalar field mismatch"),
                })
                .collect();
            return (0..self.rows)
                .map(|i| {
                    let row = &d[i * self.cols..(i + 1) * self.cols];
                    let mut acc = 0u64;
                    for &(j, b) in &nz {
                        acc = (acc + row[j] as u64 * b) % p as u64;
                    }
                    Scalar::Fp(acc as u32, p)
                })
                .collect();
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = self.field.zero();
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, j);
                if !a.is_zero() {
                    acc += &(a * x);
                }
            }
            *o = acc;
        }
        out
    }

    fn zip_with(&self, o: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!(self.field, o.field);
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, &f(&self.get(i, j), &o.get(i, j)));
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.set(i, j, &(c * &v));
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-self.field.one())
    }

    /// `(-1)^e` times this matrix.
    pub fn signed(&self, e: i64) -> Matrix {
        if e.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + o.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, o);
        out
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        let mut out = Matrix::zeros(self.field, self.rows + o.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, o);
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = b.get(i, j);
                self.set(r0 + i, c0 + j, &v);
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = b.get(i, j);
                self.add_at(r0 + i, c0 + j, &v);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, h, w);
        for i in 0..h {
            for j in 0..w {
                out.set(i, j, &self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, idx.len(), self.cols);
        for (a, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(a, j, &self.get(i, j));
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (b, &j) in idx.iter().enumerate() {
                out.set(i, b, &self.get(i, j));
            }
        }
        out
    }

    /// Reduced row echelon form. F_2 inputs take the bit-packed path.
    pub fn rref(&self) -> Echelon {
        let (rows, cols) = (self.rows, self.cols);
        match (&self.data, self.field) {
            (Store::P(d), FieldSpec::PrimeField(2)) => {
                let mut b = BitMat::from_dense(d, rows, cols);
                let pivots = b.rref();
                let mut full = b.to_dense_rows(pivots.len());
                full.resize(rows * cols, 0);
                Echelon { reduced: Matrix::from_residues(2, rows, cols, full), pivots }
            }
            (Store::P(d), FieldSpec::PrimeField(p)) => {
                let mut d = d.clone();
                let pivots = arith::rref(&ModP(p), &mut d, rows, cols);
                Echelon { reduced: Matrix::from_residues(p, rows, cols, d), pivots }
            }
            (Store::Q(d), _) => {
                let mut d = d.clone();
                let pivots = arith::rref(&Rat, &mut d, rows, cols);
                let reduced = Matrix { field: self.field, rows, cols, data: Store::Q(d) };
                Echelon { reduced, pivots }
            }
            _ => unreachable!(),
        }
    }

    /// Pivot columns only; avoids materialising the reduced matrix for F_2.
    pub fn pivot_columns(&self) -> Vec<usize> {
        if let (Store::P(d), FieldSpec::PrimeField(2)) = (&self.data, self.field) {
            let mut b = BitMat::from_dense(d, self.rows, self.cols);
            return b.rref();
        }
        self.rref().pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows < self.cols && self.rows > 0 {
            // eliminating the short side is cheaper
            return self.transpose().pivot_columns().len();
        }
        self.pivot_columns().len()
    }

    /// Columns form a basis of the null space, one per free column, in increasing order.
    pub fn kernel_basis(&self) -> Matrix {
        let e = self.rref();
        let n = self.cols;
        let free: Vec<usize> = {
            let mut is_piv = vec![false; n];
            for &c in &e.pivots {
                is_piv[c] = true;
            }
            (0..n).filter(|&c| !is_piv[c]).collect()
        };
        let mut k = Matrix::zeros(self.field, n, free.len());
        for (b, &f) in free.iter().enumerate() {
            k.set(f, b, &self.field.one());
            for (r, &pc) in e.pivots.iter().enumerate() {
                let v = e.reduced.get(r, f);
                if !v.is_zero() {
                    k.set(pc, b, &-v);
                }
            }
        }
        k
    }

    /// Solves `self * X = B` column by column; `None` if some column is unreachable.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve shape mismatch");
        let aug = self.hstack(b);
        let e = aug.rref();
        let n = self.cols;
        let rank_a = e.pivots.iter().take_while(|&&c| c < n).count();
        if rank_a < e.pivots.len() {
            return None;
        }
        let mut x = Matrix::zeros(self.field, n, b.cols);
        for (r, &pc) in e.pivots.iter().enumerate() {
            for j in 0..b.cols {
                let v = e.reduced.get(r, n + j);
                if !v.is_zero() {
                    x.set(pc, j, &v);
                }
            }
        }
        Some(x)
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let bm = Matrix::from_cols(self.field, self.rows, &[b.to_vec()]);
        self.solve_matrix(&bm).map(|x| x.col(0))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.field, self.rows))?;
        Some(x)
    }

    /// Indices of a maximal independent subset of columns, greedy from the left.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.pivot_columns()
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows.min(24) {
            let row: Vec<String> = (0..self.cols.min(24)).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(Q, 3).rank(), 3);
        assert_eq!(Matrix::zeros(Q, 2, 5).rank(), 0);
        assert_eq!(Matrix::from_i64_rows(Q, &[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::zeros(Q, 3, 3).kernel_basis().cols(), 3);
        assert_eq!(Matrix::identity(Q, 2).kernel_basis().cols(), 0);
        let f2 = FieldSpec::PrimeField(2);
        let k = Matrix::from_i64_rows(f2, &[vec![1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0), vec![f2.one(), f2.one()]);
    }

    #[test]
    fn solve_examples() {
        let f5 = FieldSpec::PrimeField(5);
        let m = Matrix::from_i64_rows(f5, &[vec![2]]);
        assert_eq!(m.solve(&[f5.from_i64(3)]), Some(vec![f5.from_i64(4)]));
        let z = Matrix::from_i64_rows(Q, &[vec![0]]);
        assert_eq!(z.solve(&[Q.one()]), None);
        let b = vec![Q.from_i64(3), Q.from_i64(-1)];
        assert_eq!(Matrix::identity(Q, 2).solve(&b), Some(b));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64_rows(Q, &[vec![2, 1], vec![7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(Q, 2));
        assert!(Matrix::from_i64_rows(Q, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn modp_rref_matches_bitpacked() {
        let rows = vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1], vec![0, 1, 1, 0]];
        let a = Matrix::from_i64_rows(FieldSpec::PrimeField(2), &rows);
        let e = a.rref();
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.reduced.row(0).iter().map(|s| s.to_string()).collect::<Vec<_>>(), vec!["1", "0", "1", "1"]);
        assert_eq!(e.reduced.row(1).iter().map(|s| s.to_string()).collect::<Vec<_>>(), vec!["0", "1", "1", "0"]);
    }
}
