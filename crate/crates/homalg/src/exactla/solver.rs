use super::matrix::Matrix;
use super::scalar::{vecops, FieldSpec, Scalar};

/// Factorisation of `A` for repeated solves of `A x = b`.
///
/// Stores `T` with `T A = R` in reduced echelon form, so each solve is one
/// matrix-vector product plus a consistency check on the zero rows of `R`.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    cols: usize,
    transform: Matrix,
    pivots: Vec<usize>,
}

impl LinearSolver {
    pub fn new(a: &Matrix) -> Self {
        let n = a.rows();
        let aug = a.hstack(&Matrix::identity(a.field(), n));
        let e = aug.rref();
        let pivots: Vec<usize> = e.pivots.iter().copied().take_while(|&c| c < a.cols()).collect();
        let transform = e.reduced.block(0, a.cols(), n, n);
        LinearSolver { cols: a.cols(), transform, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let tb = self.transform.mul_vec(b);
        if tb[self.pivots.len()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let f = self.transform.field();
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = tb[r].clone();
        }
        Some(x)
    }
}

/// Row-echelon basis grown one vector at a time.
///
/// Each stored row is normalised at its pivot and vanishes at every earlier
/// pivot, so reducing against the rows in insertion order clears all pivots.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: FieldSpec,
    dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBasis {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        EchelonBasis { field, dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (p, r) in &self.rows {
            if !w[*p].is_zero() {
                let c = -&w[*p];
                vecops::axpy(&mut w, &c, r);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        vecops::is_zero(&self.reduce(v))
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let w = self.reduce(v);
        match w.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = w[p].inv();
                self.rows.push((p, vecops::scale(&inv, &w)));
                true
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_direct_solve() {
        for f in [FieldSpec::Rationals, FieldSpec::PrimeField(2), FieldSpec::PrimeField(5)] {
            let a = Matrix::from_i64_rows(f, &[vec![1, 2, 0], vec![2, 4, 1], vec![3, 6, 1]]);
            let s = LinearSolver::new(&a);
            let x = vec![f.from_i64(1), f.from_i64(-1), f.from_i64(2)];
            let b = a.mul_vec(&x);
            let y = s.solve(&b).unwrap();
            assert_eq!(a.mul_vec(&y), b);
            assert_eq!(Some(y), a.solve(&b));
            let miss = vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)];
            assert_eq!(s.solve(&miss).is_some(), a.solve(&miss).is_some());
        }
    }

    #[test]
    fn echelon_basis_tracks_rank() {
        let f = FieldSpec::PrimeField(3);
        let mut e = EchelonBasis::new(f, 3);
        let v = |a: i64, b: i64, c: i64| vec![f.from_i64(a), f.from_i64(b), f.from_i64(c)];
        assert!(e.insert(&v(0, 1, 2)));
        assert!(e.insert(&v(1, 1, 0)));
        assert!(!e.insert(&v(1, 2, 2)));
        assert!(e.contains(&v(2, 0, 2)));
        assert!(!e.contains(&v(0, 0, 1)));
        assert_eq!(e.rank(), 2);
    }
}
