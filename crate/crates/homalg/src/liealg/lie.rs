use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::exactla::{vecops, FieldSpec, Matrix, Scalar, Subspace};

use super::LieError;

/// A finite-dimensional Lie algebra over a field of characteristic 0, by
/// structure constants `[x_i, x_j] = Σ_k c_ij^k x_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    field: FieldSpec,
    dim: usize,
    /// `c[i * dim + j]` is the coordinate vector of `[x_i, x_j]`.
    c: Vec<Vec<Scalar>>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LieJson {
    pub field: FieldSpec,
    pub dim: usize,
    /// Keys `"[i,j]"`; unlisted brackets vanish, `[j,i]` is implied.
    #[serde(default)]
    pub brackets: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LieModuleJson {
    pub dim: usize,
    /// One row-major matrix per basis element of the algebra.
    pub action: Vec<Vec<Vec<String>>>,
}

impl LieAlgebra {
    /// Checks characteristic 0, antisymmetry and the Jacobi identity on basis triples.
    pub fn new(field: FieldSpec, dim: usize, c: Vec<Vec<Scalar>>) -> Result<Self, LieError> {
        if field.characteristic() != 0 {
            return Err(LieError::CharacteristicNotZero);
        }
        if c.len() != dim * dim || c.iter().any(|v| v.len() != dim) {
            return Err(LieError::NotALieAlgebra("structure constants have the wrong shape".into()));
        }
        let labels = (0..dim).map(|i| format!("x{i}")).collect();
        let g = LieAlgebra { field, dim, c, labels };
        for i in 0..dim {
            for j in 0..dim {
                if g.c[i * dim + j] != vecops::neg(&g.c[j * dim + i]) {
                    return Err(LieError::NotALieAlgebra(format!("[x{i},x{j}] ≠ -[x{j},x{i}]")));
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let e = |a: usize| vecops::unit(field, dim, a);
                    let mut s = g.bracket(&e(i), &g.bracket(&e(j), &e(k)));
                    vecops::add_into(&mut s, &g.bracket(&e(j), &g.bracket(&e(k), &e(i))));
                    vecops::add_into(&mut s, &g.bracket(&e(k), &g.bracket(&e(i), &e(j))));
                    if !vecops::is_zero(&s) {
                        return Err(LieError::NotALieAlgebra(format!("Jacobi fails on ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn abelian(field: FieldSpec, dim: usize) -> Result<Self, LieError> {
        Self::new(field, dim, vec![vecops::zeros(field, dim); dim * dim])
    }

    /// `[x, y] = z`.
    pub fn heisenberg(field: FieldSpec) -> Result<Self, LieError> {
        Self::from_brackets(field, 3, &[(0, 1, vec![0, 0, 1])]).map(|g| g.with_labels(&["x", "y", "z"]))
    }

    /// Basis `e, h, f` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2(field: FieldSpec) -> Result<Self, LieError> {
        Self::from_brackets(field, 3, &[(1, 0, vec![2, 0, 0]), (1, 2, vec![0, 0, -2]), (0, 2, vec![0, 1, 0])])
            .map(|g| g.with_labels(&["e", "h", "f"]))
    }

    /// From integer brackets `[x_i, x_j]` for listed `(i, j)`, extended antisymmetrically.
    pub fn from_brackets(field: FieldSpec, dim: usize, br: &[(usize, usize, Vec<i64>)]) -> Result<Self, LieError> {
        let mut c = vec![vecops::zeros(field, dim); dim * dim];
        for (i, j, v) in br {
            let v: Vec<Scalar> = v.iter().map(|&x| field.from_i64(x)).collect();
            c[i * dim + j] = v.clone();
            c[j * dim + i] = vecops::neg(&v);
        }
        Self::new(field, dim, c)
    }

    pub fn from_json(j: &LieJson) -> Result<Self, LieError> {
        let f = j.field;
        let mut c = vec![vecops::zeros(f, j.dim); j.dim * j.dim];
        for (key, coeffs) in &j.brackets {
            let inner = key.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']'));
            let (a, b) = inner.and_then(|s| s.split_once(',')).ok_or_else(|| LieError::Parse(format!("bad bracket key {key:?}")))?;
            let idx = |s: &str| s.trim().parse::<usize>().ok().filter(|&i| i < j.dim).ok_or_else(|| LieError::Parse(format!("bad index in {key:?}")));
            let (a, b) = (idx(a)?, idx(b)?);
            if coeffs.len() != j.dim {
                return Err(LieError::Parse(format!("{key:?} needs {} coefficients", j.dim)));
            }
            let v = coeffs.iter().map(|s| f.parse_scalar(s)).collect::<Result<Vec<_>, _>>().map_err(|e| LieError::Parse(e.to_string()))?;
            if a == b && !vecops::is_zero(&v) {
                return Err(LieError::NotALieAlgebra(format!("[x{a},x{a}] ≠ 0")));
            }
            c[a * j.dim + b] = v.clone();
            c[b * j.dim + a] = vecops::neg(&v);
        }
        let g = Self::new(f, j.dim, c)?;
        Ok(if j.labels.len() == j.dim { LieAlgebra { labels: j.labels.clone(), ..g } } else { g })
    }

    pub fn to_json(&self) -> LieJson {
        let mut brackets = BTreeMap::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = &self.c[i * self.dim + j];
                if !vecops::is_zero(v) {
                    brackets.insert(format!("[{i},{j}]"), v.iter().map(|x| x.to_string()).collect());
                }
            }
        }
        LieJson { field: self.field, dim: self.dim, brackets, labels: self.labels.clone() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[x_i, x_j]` in coordinates.
    pub fn structure(&self, i: usize, j: usize) -> &[Scalar] {
        &self.c[i * self.dim + j]
    }

    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vecops::zeros(self.field, self.dim);
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                vecops::axpy(&mut out, &(a * b), self.structure(i, j));
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|v| vecops::is_zero(v))
    }

    /// `ad(x_i)` as a matrix.
    pub fn ad(&self, i: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.structure(i, j).to_vec()).collect();
        Matrix::from_cols(self.field, self.dim, &cols)
    }
}

/// A representation `ρ: 𝔤 → gl(V)` by the images of the basis.
#[derive(Clone, Debug)]
pub struct LieModule {
    algebra: Arc<LieAlgebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl LieModule {
    /// Checks `ρ([x_i,x_j]) = [ρ(x_i), ρ(x_j)]` on basis pairs.
    pub fn new(algebra: Arc<LieAlgebra>, dim: usize, action: Vec<Matrix>) -> Result<Self, LieError> {
        let f = algebra.field();
        if action.len() != algebra.dim() || action.iter().any(|m| m.rows() != dim || m.cols() != dim || m.field() != f) {
            return Err(LieError::NotAModule("one dim×dim matrix per basis element".into()));
        }
        let m = LieModule { algebra, dim, action };
        let d = m.algebra.dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = m.rho_of(m.algebra.structure(i, j));
                let rhs = m.action[i].mul(&m.action[j]).sub(&m.action[j].mul(&m.action[i]));
                if lhs != rhs {
                    return Err(LieError::NotAModule(format!("ρ fails on [x{i},x{j}]")));
                }
            }
        }
        Ok(m)
    }

    pub fn trivial(algebra: Arc<LieAlgebra>, dim: usize) -> Self {
        let f = algebra.field();
        let action = vec![Matrix::zeros(f, dim, dim); algebra.dim()];
        LieModule { algebra, dim, action }
    }

    pub fn adjoint(algebra: Arc<LieAlgebra>) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.ad(i)).collect();
        LieModule::new(algebra.clone(), algebra.dim(), action).expect("Jacobi makes ad a representation")
    }

    pub fn from_json(algebra: Arc<LieAlgebra>, j: &LieModuleJson) -> Result<Self, LieError> {
        let f = algebra.field();
        let mut mats = Vec::new();
        for rows in &j.action {
            if rows.len() != j.dim || rows.iter().any(|r| r.len() != j.dim) {
                return Err(LieError::NotAModule(format!("action matrices must be {0}×{0}", j.dim)));
            }
            let e = rows.iter().flatten().map(|s| f.parse_scalar(s)).collect::<Result<Vec<_>, _>>().map_err(|e| LieError::Parse(e.to_string()))?;
            mats.push(Matrix::from_entries(f, j.dim, j.dim, &e));
        }
        Self::new(algebra, j.dim, mats)
    }

    pub fn to_json(&self) -> LieModuleJson {
        LieModuleJson { dim: self.dim, action: self.action.iter().map(|m| m.to_string_rows()).collect() }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// `ρ(u)` for `u ∈ 𝔤` in coordinates.
    pub fn rho_of(&self, u: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim, self.dim);
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            m = m.add(&self.action[i].scale(a));
        }
        m
    }

    pub fn is_trivial(&self) -> bool {
        self.action.iter().all(|m| m.is_zero())
    }
}

/// `(𝔤, 𝔨)` with `𝔨` given by a basis (columns) closed under the bracket.
#[derive(Clone, Debug)]
pub struct LieSubalgebraPair {
    pub g: Arc<LieAlgebra>,
    pub k: Subspace,
}

impl LieSubalgebraPair {
    pub fn new(g: Arc<LieAlgebra>, k_basis: &Matrix) -> Result<Self, LieError> {
        let k = Subspace::span(k_basis);
        let b = k.basis.columns();
        for u in &b {
            for v in &b {
                if !k.contains(&g.bracket(u, v)) {
                    return Err(LieError::NotClosed);
                }
            }
        }
        Ok(LieSubalgebraPair { g, k })
    }

    pub fn absolute(g: Arc<LieAlgebra>) -> Self {
        let f = g.field();
        let d = g.dim();
        LieSubalgebraPair { g, k: Subspace::zero(f, d) }
    }

    pub fn is_absolute(&self) -> bool {
        self.k.dim() == 0
    }
}
