//! Exact linear algebra over the rationals and prime fields.

mod arith;
mod f2;
mod matrix;
mod rational;
mod scalar;
mod solver;

pub use matrix::{Echelon, Matrix};
pub use rational::{ParseRationalError, Rational};
pub use scalar::{vecops, FieldError, FieldSpec, Scalar};
pub use solver::{EchelonBasis, LinearSolver};

/// A subspace of `k^ambient_dim`, stored as a matrix with independent columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Matrix,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(field, ambient_dim, 0) }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(field, ambient_dim) }
    }

    /// Span of arbitrary columns; dependent columns are dropped.
    pub fn span(m: &Matrix) -> Self {
        let keep = m.independent_columns();
        Subspace { ambient_dim: m.rows(), basis: m.select_cols(&keep) }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.basis.solve(v)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        self.basis.hstack(&other.basis).rank() == self.dim()
    }
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn kernel(m: &Matrix) -> Subspace {
    Subspace { ambient_dim: m.cols(), basis: m.kernel_basis() }
}

pub fn image(m: &Matrix) -> Subspace {
    Subspace::span(m)
}

pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    m.solve(b)
}

/// Projection onto `k^ambient / sub` and a section of it.
///
/// The section consists of the standard basis vectors that complete `sub` in
/// echelon order; the projection reads off their coefficients.
pub fn quotient(ambient_dim: usize, sub: &Subspace) -> (Matrix, Matrix) {
    assert_eq!(sub.ambient_dim, ambient_dim, "ambient dimension mismatch");
    let field = sub.field();
    let (_, section, inv) = complete_basis(sub, &Matrix::identity(field, ambient_dim));
    let k = sub.dim();
    let projection = inv.block(k, 0, ambient_dim - k, ambient_dim);
    (projection, section)
}

/// Extends the basis of `sub` greedily by columns of `candidates`.
///
/// Returns the chosen candidate indices, the chosen columns, and the inverse of
/// the square matrix `[sub | chosen | pad]`, where `pad` are standard vectors.
/// Rows `0..dim sub` of the inverse give `sub` coordinates, the next rows give
/// coordinates along the chosen columns.
pub fn complete_basis(sub: &Subspace, candidates: &Matrix) -> (Vec<usize>, Matrix, Matrix) {
    let field = sub.field();
    let n = sub.ambient_dim;
    let k = sub.dim();
    let aug = sub.basis.hstack(candidates);
    let piv = aug.independent_columns();
    debug_assert!(piv.iter().take(k).copied().eq(0..k));
    let chosen: Vec<usize> = piv.iter().filter(|&&c| c >= k).map(|&c| c - k).collect();
    let cols = candidates.select_cols(&chosen);
    let mut square = sub.basis.hstack(&cols);
    if square.cols() < n {
        let pad = square.hstack(&Matrix::identity(field, n));
        let piv2 = pad.independent_columns();
        square = pad.select_cols(&piv2);
    }
    let inv = square.inverse().expect("completed basis is invertible");
    (chosen, cols, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn quotient_examples() {
        let (p, s) = quotient(2, &Subspace::zero(Q, 2));
        assert_eq!(p, Matrix::identity(Q, 2));
        assert_eq!(p.mul(&s), Matrix::identity(Q, 2));
        let (p, _) = quotient(2, &Subspace::full(Q, 2));
        assert_eq!(p.rows(), 0);
        // (1,1): projection must kill it and split the section
        let sub = Subspace::span(&Matrix::from_i64_rows(Q, &[vec![1], vec![1]]));
        let (p, s) = quotient(2, &sub);
        assert_eq!(p.rows(), 1);
        assert!(p.mul(&sub.basis).is_zero());
        assert_eq!(p.mul(&s), Matrix::identity(Q, 1));
        assert_eq!(kernel(&p).dim(), 1);
    }

    fn small_matrix(field: FieldSpec) -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = v.chunks(c).map(|x| x.to_vec()).collect();
                Matrix::from_i64_rows(field, &rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_q(m in small_matrix(Q)) {
            let k = kernel(&m);
            prop_assert_eq!(rank(&m) + k.dim(), m.cols());
            prop_assert!(m.mul(&k.basis).is_zero());
            prop_assert_eq!(k.basis.rank(), k.dim());
        }

        #[test]
        fn rank_nullity_f2(m in small_matrix(FieldSpec::PrimeField(2))) {
            let k = kernel(&m);
            prop_assert_eq!(rank(&m) + k.dim(), m.cols());
            prop_assert!(m.mul(&k.basis).is_zero());
        }

        #[test]
        fn rank_nullity_f7(m in small_matrix(FieldSpec::PrimeField(7))) {
            prop_assert_eq!(rank(&m) + kernel(&m).dim(), m.cols());
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn solve_is_exact(m in small_matrix(Q), seed in proptest::collection::vec(-2i64..3, 6)) {
            let x: Vec<Scalar> = (0..m.cols()).map(|i| Q.from_i64(seed[i])).collect();
            let b = m.mul_vec(&x);
            let y = solve(&m, &b).expect("b is in the image");
            prop_assert_eq!(m.mul_vec(&y), b.clone());
            prop_assert_eq!(solve(&m, &b), Some(y));
        }

        #[test]
        fn quotient_splits(m in small_matrix(FieldSpec::PrimeField(3))) {
            let sub = image(&m);
            let (p, s) = quotient(m.rows(), &sub);
            prop_assert_eq!(p.rows(), m.rows() - sub.dim());
            prop_assert!(p.mul(&sub.basis).is_zero());
            prop_assert_eq!(p.mul(&s), Matrix::identity(m.field(), p.rows()));
            prop_assert_eq!(kernel(&p).dim(), sub.dim());
        }
    }
}
