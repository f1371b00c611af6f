use super::CochainComplex;
use crate::exactla::{complete_basis, kernel, Matrix, Scalar, Subspace};

/// `H^n` as an explicit subquotient of `C^n`.
///
/// `cocycle_reps` columns, appended to an echelon basis of the coboundaries,
/// form a basis of the cocycles. `class_projection` sends any cocycle to its
/// class coordinates and kills coboundaries.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degree: i64,
    pub dim: usize,
    pub cocycle_reps: Matrix,
    pub class_projection: Matrix,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
}

impl CohomologySpace {
    pub fn classify(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.class_projection.mul_vec(v)
    }

    pub fn classify_matrix(&self, m: &Matrix) -> Matrix {
        self.class_projection.mul(m)
    }

    pub fn rep(&self, i: usize) -> Vec<Scalar> {
        self.cocycle_reps.col(i)
    }

    pub fn reps(&self) -> Vec<Vec<Scalar>> {
        self.cocycle_reps.columns()
    }

    pub fn is_coboundary(&self, v: &[Scalar]) -> bool {
        self.coboundaries.contains(v)
    }
}

/// Subquotient `Z/B` given spanning sets of both; `b ⊆ z` is assumed.
pub fn subquotient(degree: i64, z: Subspace, b: Subspace) -> CohomologySpace {
    let field = z.field();
    let n = z.ambient_dim;
    let (_, reps, inv) = complete_basis(&b, &z.basis);
    let h = reps.cols();
    let class_projection = if h == 0 {
        Matrix::zeros(field, 0, n)
    } else {
        inv.block(b.dim(), 0, h, n)
    };
    CohomologySpace { degree, dim: h, cocycle_reps: reps, class_projection, cocycles: z, coboundaries: b }
}

pub fn cohomology(c: &CochainComplex, n: i64) -> CohomologySpace {
    let field = c.field();
    let z = match c.d_ref(n) {
        Some(d) => kernel(d),
        None => Subspace::full(field, c.dim(n)),
    };
    let b = match c.d_ref(n - 1) {
        Some(d) => Subspace::span(d),
        None => Subspace::zero(field, c.dim(n)),
    };
    subquotient(n, z, b)
}
