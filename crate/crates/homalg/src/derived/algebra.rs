use crate::exactla::{vecops, FieldSpec, Matrix, Scalar};

use super::DerivedError;

/// Finite-dimensional associative unital algebra given by sparse structure
/// constants: `b_i b_j = Σ_k c_ijk b_k`.
///
/// `idempotents` lists basis indices `e` with `e e = e`, pairwise orthogonal,
/// summing to the unit, such that every basis element satisfies `b e ∈ {b, 0}`
/// and `e b ∈ {b, 0}`. Projectives are built from these.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    field: FieldSpec,
    dim: usize,
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
    idempotents: Vec<usize>,
}

impl AlgebraSpec {
    pub fn new(
        field: FieldSpec,
        dim: usize,
        table: Vec<Vec<(usize, Scalar)>>,
        unit: Vec<Scalar>,
        idempotents: Vec<usize>,
    ) -> Result<Self, DerivedError> {
        if table.len() != dim * dim || unit.len() != dim {
            return Err(DerivedError::Malformed("structure constant table has wrong size".into()));
        }
        let a = AlgebraSpec { field, dim, table, unit, idempotents };
        a.check()?;
        Ok(a)
    }

    /// The group algebra from a multiplication table on `0..m`.
    pub fn group_algebra(field: FieldSpec, mul: &[Vec<usize>], identity: usize) -> Result<Self, DerivedError> {
        let m = mul.len();
        let table = (0..m * m).map(|ij| vec![(mul[ij / m][ij % m], field.one())]).collect();
        Self::new(field, m, table, vecops::unit(field, m, identity), vec![identity])
    }

    /// The algebra with basis `e_{x→y}` for `x ≤ y`, product `e_{y→z} e_{x→y} = e_{x→z}`.
    /// `pairs` lists the comparable pairs; `le(x, y)` must be a partial order on `0..n`.
    pub fn incidence_algebra(field: FieldSpec, pairs: &[(usize, usize)]) -> Result<Self, DerivedError> {
        let d = pairs.len();
        let index: std::collections::HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut table = vec![Vec::new(); d * d];
        for (i, &(y, z)) in pairs.iter().enumerate() {
            for (j, &(x, y2)) in pairs.iter().enumerate() {
                if y == y2 {
                    let k = *index.get(&(x, z)).ok_or_else(|| DerivedError::Malformed("order is not transitive".into()))?;
                    table[i * d + j].push((k, field.one()));
                }
            }
        }
        let idempotents: Vec<usize> = pairs.iter().enumerate().filter(|(_, &(x, y))| x == y).map(|(i, _)| i).collect();
        let mut unit = vecops::zeros(field, d);
        for &e in &idempotents {
            unit[e] = field.one();
        }
        Self::new(field, d, table, unit, idempotents)
    }

    /// The field itself.
    pub fn ground(field: FieldSpec) -> Self {
        Self::new(field, 1, vec![vec![(0, field.one())]], vec![field.one()], vec![0]).expect("ground field")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn basis_mul(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim + j]
    }

    /// Whether `b_i b_e = b_i` (otherwise it is 0).
    pub fn fixes_right(&self, i: usize, e: usize) -> bool {
        matches!(self.basis_mul(i, e), [(k, c)] if *k == i && c.is_one())
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vecops::zeros(self.field, self.dim);
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.basis_mul(i, j) {
                    out[*k] += &(c * &xy);
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by the basis element `i`.
    pub fn left_regular(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.basis_mul(i, j) {
                m.add_at(*k, j, c);
            }
        }
        m
    }

    fn check(&self) -> Result<(), DerivedError> {
        let f = self.field;
        let d = self.dim;
        for i in 0..d {
            let bi = vecops::unit(f, d, i);
            if self.mul(&self.unit, &bi) != bi || self.mul(&bi, &self.unit) != bi {
                return Err(DerivedError::NotAnAlgebra(format!("unit fails on basis element {i}")));
            }
        }
        // both sides vanish unless b_i b_j ≠ 0 or b_j b_k ≠ 0
        let nz = |i: usize, j: usize| !self.basis_mul(i, j).is_empty();
        let bad = crate::par::map_range(d, |j| {
            let left: Vec<usize> = (0..d).filter(|&i| nz(i, j)).collect();
            let right: Vec<usize> = (0..d).filter(|&k| nz(j, k)).collect();
            let triples = left.iter().flat_map(|&i| (0..d).map(move |k| (i, k)));
            let triples = triples.chain(right.iter().flat_map(|&k| (0..d).map(move |i| (i, k))));
            for (i, k) in triples {
                let mut lhs = std::collections::BTreeMap::new();
                for (l, c) in self.basis_mul(i, j) {
                    for (m, c2) in self.basis_mul(*l, k) {
                        *lhs.entry(*m).or_insert_with(|| f.zero()) += &(c * c2);
                    }
                }
                let mut rhs = std::collections::BTreeMap::new();
                for (l, c) in self.basis_mul(j, k) {
                    for (m, c2) in self.basis_mul(i, *l) {
                        *rhs.entry(*m).or_insert_with(|| f.zero()) += &(c * c2);
                    }
                }
                lhs.retain(|_, v: &mut Scalar| !v.is_zero());
                rhs.retain(|_, v: &mut Scalar| !v.is_zero());
                if lhs != rhs {
                    return Some((i, j, k));
                }
            }
            None
        });
        if let Some((i, j, k)) = bad.into_iter().flatten().next() {
            return Err(DerivedError::NotAnAlgebra(format!("associativity fails on ({i},{j},{k})")));
        }
        let mut sum = vecops::zeros(f, d);
        for &e in &self.idempotents {
            sum[e] += &f.one();
            for b in 0..d {
                let r = self.basis_mul(b, e);
                let l = self.basis_mul(e, b);
                let ok = |v: &[(usize, Scalar)]| v.is_empty() || matches!(v, [(k, c)] if *k == b && c.is_one());
                if !ok(r) || !ok(l) {
                    return Err(DerivedError::NotAnAlgebra(format!("idempotent {e} is not diagonal on basis element {b}")));
                }
            }
        }
        if sum != self.unit {
            return Err(DerivedError::NotAnAlgebra("idempotents do not sum to the unit".into()));
        }
        Ok(())
    }
}
