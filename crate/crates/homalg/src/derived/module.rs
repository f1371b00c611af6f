use std::fmt;
use std::sync::Arc;

use crate::exactla::{vecops, FieldSpec, Matrix, Scalar, Subspace};

use super::{AlgebraSpec, DerivedError};

/// Action of basis elements computed on demand, for modules too large to store densely.
pub trait ImplicitAction: Send + Sync + fmt::Debug {
    fn act(&self, b: usize, v: &[Scalar]) -> Vec<Scalar>;
}

/// Coordinates split into blocks; basis element `b` sends block `src` into block
/// `dst` through `pool[m]` for each `(src, dst, m)` in `ops[b]`.
#[derive(Clone, Debug)]
pub struct BlockAction {
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
    pub pool: Vec<Matrix>,
    pub ops: Vec<Vec<(usize, usize, usize)>>,
}

#[derive(Clone, Debug)]
pub enum Action {
    Dense(Vec<Matrix>),
    Blocks(Arc<BlockAction>),
    Implicit(Arc<dyn ImplicitAction>),
}

/// A finite-dimensional left module. The basis is adapted to the algebra's
/// idempotents: each acts on coordinates as a 0/1 diagonal.
#[derive(Clone)]
pub struct ModuleOverAlgebra {
    algebra: Arc<AlgebraSpec>,
    dim: usize,
    action: Action,
    idem_coords: Vec<Vec<usize>>,
}

impl fmt::Debug for ModuleOverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dim {} over algebra of dim {})", self.dim, self.algebra.dim())
    }
}

impl ModuleOverAlgebra {
    /// Module from explicit matrices, checked against the structure constants.
    pub fn dense(algebra: Arc<AlgebraSpec>, mats: Vec<Matrix>) -> Result<Self, DerivedError> {
        if mats.len() != algebra.dim() {
            return Err(DerivedError::Malformed("one matrix per algebra basis element expected".into()));
        }
        let dim = mats.first().map_or(0, |m| m.rows());
        if mats.iter().any(|m| m.rows() != dim || m.cols() != dim || m.field() != algebra.field()) {
            return Err(DerivedError::Malformed("action matrices must be square of the module dimension".into()));
        }
        let m = Self::build(algebra, dim, Action::Dense(mats))?;
        m.check_axioms()?;
        Ok(m)
    }

    /// Module from a block action; axioms are not checked here (see `check_axioms`).
    pub fn blocks(algebra: Arc<AlgebraSpec>, blocks: BlockAction) -> Result<Self, DerivedError> {
        let dim = blocks.sizes.iter().sum();
        Self::build(algebra, dim, Action::Blocks(Arc::new(blocks)))
    }

    pub fn implicit(algebra: Arc<AlgebraSpec>, dim: usize, act: Arc<dyn ImplicitAction>) -> Result<Self, DerivedError> {
        Self::build(algebra, dim, Action::Implicit(act))
    }

    /// The module `k^dim` on which every basis element acts by `coeff(b)` times the identity.
    pub fn scalar(algebra: Arc<AlgebraSpec>, dim: usize, coeff: impl Fn(usize) -> Scalar) -> Result<Self, DerivedError> {
        let f = algebra.field();
        let mats = (0..algebra.dim()).map(|b| Matrix::identity(f, dim).scale(&coeff(b))).collect();
        Self::dense(algebra, mats)
    }

    fn build(algebra: Arc<AlgebraSpec>, dim: usize, action: Action) -> Result<Self, DerivedError> {
        let mut m = ModuleOverAlgebra { algebra, dim, action, idem_coords: vec![] };
        let f = m.field();
        let whole = m.algebra.idempotents().len() == 1;
        let mut idem = Vec::new();
        let mut seen = vec![false; dim];
        for &e in m.algebra.idempotents().to_vec().iter() {
            if whole {
                idem.push((0..dim).collect());
                continue;
            }
            let mut fixed = Vec::new();
            for i in 0..dim {
                let img = m.act_basis(e, &vecops::unit(f, dim, i));
                if img.iter().enumerate().all(|(k, x)| x.is_zero() || (k == i && x.is_one())) {
                    if !img[i].is_zero() {
                        fixed.push(i);
                        seen[i] = true;
                    }
                } else {
                    return Err(DerivedError::NotAdapted(e));
                }
            }
            idem.push(fixed);
        }
        if !whole && seen.iter().any(|s| !s) {
            return Err(DerivedError::Malformed("idempotents do not cover every coordinate".into()));
        }
        m.idem_coords = idem;
        Ok(m)
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    /// Coordinates on which the idempotent `algebra.idempotents()[pos]` acts as 1.
    pub fn idempotent_coords(&self, pos: usize) -> &[usize] {
        &self.idem_coords[pos]
    }

    /// Position of basis index `e` in the idempotent list.
    pub fn idempotent_position(&self, e: usize) -> usize {
        self.algebra.idempotents().iter().position(|&x| x == e).expect("not a listed idempotent")
    }

    pub fn act_basis(&self, b: usize, v: &[Scalar]) -> Vec<Scalar> {
        match &self.action {
            Action::Dense(m) => m[b].mul_vec(v),
            Action::Blocks(ba) => {
                let mut out = vecops::zeros(self.field(), self.dim);
                for &(s, t, k) in &ba.ops[b] {
                    let (so, to) = (ba.offsets[s], ba.offsets[t]);
                    let src = &v[so..so + ba.sizes[s]];
                    if vecops::is_zero(src) {
                        continue;
                    }
                    let img = ba.pool[k].mul_vec(src);
                    vecops::add_into(&mut out[to..to + ba.sizes[t]], &img);
                }
                out
            }
            Action::Implicit(a) => a.act(b, v),
        }
    }

    /// `b · u_c` for the coordinate vector `u_c`.
    pub fn act_unit(&self, b: usize, c: usize) -> Vec<Scalar> {
        match &self.action {
            Action::Dense(m) => m[b].col(c),
            _ => self.act_basis(b, &vecops::unit(self.field(), self.dim, c)),
        }
    }

    /// Action of an arbitrary algebra element.
    pub fn act(&self, a: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vecops::zeros(self.field(), self.dim);
        for (b, c) in a.iter().enumerate() {
            if !c.is_zero() {
                vecops::axpy(&mut out, c, &self.act_basis(b, v));
            }
        }
        out
    }

    /// `e·v` for the idempotent at `pos`: keeps the coordinates it fixes.
    pub fn project(&self, pos: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vecops::zeros(self.field(), self.dim);
        for &i in &self.idem_coords[pos] {
            out[i] = v[i].clone();
        }
        out
    }

    pub fn matrix(&self, b: usize) -> Matrix {
        if let Action::Dense(m) = &self.action {
            return m[b].clone();
        }
        let f = self.field();
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|i| self.act_basis(b, &vecops::unit(f, self.dim, i))).collect();
        Matrix::from_cols(f, self.dim, &cols)
    }

    /// Checks `ρ(b_i)ρ(b_j) = Σ c_ijk ρ(b_k)` and `ρ(1) = id` on all basis vectors.
    pub fn check_axioms(&self) -> Result<(), DerivedError> {
        let a = &self.algebra;
        let mats: Vec<Matrix> = (0..a.dim()).map(|b| self.matrix(b)).collect();
        let mut unit = Matrix::zeros(self.field(), self.dim, self.dim);
        for (b, c) in a.unit().iter().enumerate() {
            if !c.is_zero() {
                unit = unit.add(&mats[b].scale(c));
            }
        }
        if unit != Matrix::identity(self.field(), self.dim) {
            return Err(DerivedError::NotAModule("unit does not act as the identity".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let mut want = Matrix::zeros(self.field(), self.dim, self.dim);
                for (k, c) in a.basis_mul(i, j) {
                    want = want.add(&mats[*k].scale(c));
                }
                if mats[i].mul(&mats[j]) != want {
                    return Err(DerivedError::NotAModule(format!("action fails on ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// Whether `f: self → target` commutes with every basis element.
    pub fn is_module_map(&self, f: &Matrix, target: &ModuleOverAlgebra) -> bool {
        if f.rows() != target.dim || f.cols() != self.dim {
            return false;
        }
        let fs = self.field();
        let cols = f.columns();
        let ok = crate::par::map_range(self.algebra.dim(), |b| {
            (0..self.dim).all(|i| {
                let u = self.act_unit(b, i);
                let mut lhs = vecops::zeros(fs, target.dim);
                for (j, c) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    vecops::axpy(&mut lhs, c, &cols[j]);
                }
                lhs == target.act_basis(b, &cols[i])
            })
        });
        ok.into_iter().all(|x| x)
    }

    /// The submodule spanned by the columns of `span` (assumed stable), in a basis
    /// adapted to the idempotents. Returns the module and its inclusion matrix.
    pub fn submodule(&self, span: &Matrix) -> Result<(ModuleOverAlgebra, Matrix), DerivedError> {
        let f = self.field();
        let mut cols = Vec::new();
        for pos in 0..self.algebra.idempotents().len() {
            let proj: Vec<Vec<Scalar>> = span.columns().iter().map(|c| self.project(pos, c)).collect();
            let s = Subspace::span(&Matrix::from_cols(f, self.dim, &proj));
            cols.extend(s.basis.columns());
        }
        let inc = Matrix::from_cols(f, self.dim, &cols);
        let mut mats = Vec::new();
        for b in 0..self.algebra.dim() {
            let img: Vec<Vec<Scalar>> = cols.iter().map(|c| self.act_basis(b, c)).collect();
            let img = Matrix::from_cols(f, self.dim, &img);
            let m = inc.solve_matrix(&img).ok_or_else(|| DerivedError::NotAModule("span is not a submodule".into()))?;
            mats.push(m);
        }
        let sub = if cols.is_empty() {
            Self::build(self.algebra.clone(), 0, Action::Dense(vec![Matrix::zeros(f, 0, 0); self.algebra.dim()]))?
        } else {
            Self::dense(self.algebra.clone(), mats)?
        };
        Ok((sub, inc))
    }

    /// `self / span` with the projection matrix.
    pub fn quotient(&self, span: &Matrix) -> Result<(ModuleOverAlgebra, Matrix), DerivedError> {
        let f = self.field();
        let sub = Subspace::span(span);
        let mut chosen = Vec::new();
        for pos in 0..self.algebra.idempotents().len() {
            for &i in &self.idem_coords[pos] {
                chosen.push(i);
            }
        }
        // a complement spanned by unit vectors, kept adapted since units are
        let mut acc = sub.basis.clone();
        let mut comp = Vec::new();
        for i in chosen {
            let u = vecops::unit(f, self.dim, i);
            let t = acc.hstack(&Matrix::from_cols(f, self.dim, &[u.clone()]));
            if t.rank() > acc.cols() {
                acc = t;
                comp.push(u);
            }
        }
        let full = acc.inverse().expect("completed basis");
        let q = comp.len();
        let proj = full.block(sub.dim(), 0, q, self.dim);
        let mut mats = Vec::new();
        for b in 0..self.algebra.dim() {
            let img: Vec<Vec<Scalar>> = comp.iter().map(|c| proj.mul_vec(&self.act_basis(b, c))).collect();
            mats.push(Matrix::from_cols(f, q, &img));
        }
        let m = if q == 0 {
            Self::build(self.algebra.clone(), 0, Action::Dense(vec![Matrix::zeros(f, 0, 0); self.algebra.dim()]))?
        } else {
            Self::dense(self.algebra.clone(), mats)?
        };
        Ok((m, proj))
    }

    pub fn direct_sum(&self, other: &ModuleOverAlgebra) -> Result<ModuleOverAlgebra, DerivedError> {
        let f = self.field();
        let (m, n) = (self.dim, other.dim);
        let mats = (0..self.algebra.dim())
            .map(|b| {
                let mut x = Matrix::zeros(f, m + n, m + n);
                x.set_block(0, 0, &self.matrix(b));
                x.set_block(m, m, &other.matrix(b));
                x
            })
            .collect();
        Self::dense(self.algebra.clone(), mats)
    }
}
