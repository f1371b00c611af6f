use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::exactla::{vecops, EchelonBasis, LinearSolver, Matrix, Scalar};

use super::module::ImplicitAction;
use super::{AlgebraSpec, DerivedError, ModuleOverAlgebra};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// `⊕_j R e_j`: coordinate `(j, t)` is the basis element `span[j][t]`, those `b` with `b e_j = b`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    algebra: Arc<AlgebraSpec>,
    gens: Vec<usize>,
    offsets: Vec<usize>,
    span: Vec<Arc<Vec<usize>>>,
    pos: Vec<Arc<Vec<Option<usize>>>>,
    dim: usize,
}

impl FreeModule {
    pub fn new(algebra: Arc<AlgebraSpec>, gens: Vec<usize>) -> Self {
        let d = algebra.dim();
        let mut per_idem: Vec<Option<(Arc<Vec<usize>>, Arc<Vec<Option<usize>>>)>> = vec![None; d];
        let (mut offsets, mut span, mut pos) = (Vec::new(), Vec::new(), Vec::new());
        let mut dim = 0;
        for &e in &gens {
            let (s, p) = per_idem[e]
                .get_or_insert_with(|| {
                    let s: Vec<usize> = (0..d).filter(|&b| algebra.fixes_right(b, e)).collect();
                    let mut p = vec![None; d];
                    for (t, &b) in s.iter().enumerate() {
                        p[b] = Some(t);
                    }
                    (Arc::new(s), Arc::new(p))
                })
                .clone();
            offsets.push(dim);
            dim += s.len();
            span.push(s);
            pos.push(p);
        }
        FreeModule { algebra, gens, offsets, span, pos, dim }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Idempotent basis index of generator `j`.
    pub fn generator_idempotent(&self, j: usize) -> usize {
        self.gens[j]
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Coordinates of the generator `e_j` itself.
    pub fn generator_vector(&self, j: usize) -> Vec<Scalar> {
        let f = self.algebra.field();
        let mut v = vecops::zeros(f, self.dim);
        v[self.offsets[j] + self.pos[j][self.gens[j]].expect("e e = e")] = f.one();
        v
    }

    pub fn module(&self) -> Result<ModuleOverAlgebra, DerivedError> {
        ModuleOverAlgebra::implicit(self.algebra.clone(), self.dim, Arc::new(self.clone()))
    }

    /// The module map `P → target` sending generator `j` to `images[j]`.
    pub fn apply(&self, x: &[Scalar], images: &[Vec<Scalar>], target: &ModuleOverAlgebra) -> Vec<Scalar> {
        let mut out = vecops::zeros(target.field(), target.dim());
        for j in 0..self.gens.len() {
            if vecops::is_zero(&images[j]) {
                continue;
            }
            for (t, &b) in self.span[j].iter().enumerate() {
                let c = &x[self.offsets[j] + t];
                if !c.is_zero() {
                    vecops::axpy(&mut out, c, &target.act_basis(b, &images[j]));
                }
            }
        }
        out
    }

    /// Matrix of the map `P → target` given by generator images.
    pub fn matrix_of(&self, images: &[Vec<Scalar>], target: &ModuleOverAlgebra) -> Matrix {
        let mut cols = Vec::with_capacity(self.dim);
        for j in 0..self.gens.len() {
            for &b in self.span[j].iter() {
                cols.push(target.act_basis(b, &images[j]));
            }
        }
        Matrix::from_cols(target.field(), target.dim(), &cols)
    }

    /// Nonzero entries of `x` in block `j` as `(algebra basis element, coefficient)`.
    pub fn block_terms<'a>(&'a self, x: &'a [Scalar], j: usize) -> impl Iterator<Item = (usize, &'a Scalar)> + 'a {
        let o = self.offsets[j];
        self.span[j].iter().enumerate().filter_map(move |(t, &b)| {
            let c = &x[o + t];
            (!c.is_zero()).then_some((b, c))
        })
    }
}

impl ImplicitAction for FreeModule {
    fn act(&self, a: usize, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.algebra.field();
        let mut out = vecops::zeros(f, self.dim);
        for j in 0..self.gens.len() {
            let o = self.offsets[j];
            for (t, &b) in self.span[j].iter().enumerate() {
                let x = &v[o + t];
                if x.is_zero() {
                    continue;
                }
                for (k, c) in self.algebra.basis_mul(a, b) {
                    let tk = self.pos[j][*k].expect("(ab)e = ab");
                    out[o + tk] += &(c * x);
                }
            }
        }
        out
    }
}

/// A free resolution `P_L → ⋯ → P_0 → V`, exact at `V, P_0, …, P_{L-1}`.
#[derive(Debug)]
pub struct ProjectiveResolution {
    id: u64,
    object: Arc<ModuleOverAlgebra>,
    terms: Vec<FreeModule>,
    modules: Vec<ModuleOverAlgebra>,
    /// `images[0][j] = ε(e_j) ∈ V`; `images[i][j] = ∂_i(e_j) ∈ P_{i-1}`.
    images: Vec<Vec<Vec<Scalar>>>,
    maps: Vec<Matrix>,
    solvers: Vec<OnceLock<LinearSolver>>,
}

impl ProjectiveResolution {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn object(&self) -> &Arc<ModuleOverAlgebra> {
        &self.object
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.object.algebra()
    }

    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, i: usize) -> &FreeModule {
        &self.terms[i]
    }

    pub fn term_module(&self, i: usize) -> &ModuleOverAlgebra {
        &self.modules[i]
    }

    /// Target of the map out of `P_i`: `V` for `i = 0`, else `P_{i-1}`.
    pub fn below(&self, i: usize) -> &ModuleOverAlgebra {
        if i == 0 {
            &self.object
        } else {
            &self.modules[i - 1]
        }
    }

    /// `ε(e_j)` for `i = 0`, `∂_i(e_j)` otherwise.
    pub fn boundary_of_generator(&self, i: usize, j: usize) -> &[Scalar] {
        &self.images[i][j]
    }

    /// Matrix of `ε` (`i = 0`) or `∂_i`.
    pub fn map_matrix(&self, i: usize) -> &Matrix {
        &self.maps[i]
    }

    /// Some `x ∈ P_i` with `ε x = y` (`i = 0`) or `∂_i x = y`.
    pub fn lift(&self, i: usize, y: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solvers[i].get_or_init(|| LinearSolver::new(&self.maps[i])).solve(y)
    }

    /// Applies `ε` or `∂_i`.
    pub fn apply_map(&self, i: usize, x: &[Scalar]) -> Vec<Scalar> {
        self.terms[i].apply(x, &self.images[i], self.below(i))
    }
}

/// Order in which candidate generators are scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GeneratorOrder {
    #[default]
    Forward,
    Reverse,
}

/// Greedy generators for the submodule `K ⊆ M` spanned by `kernel` columns.
fn choose_generators(m: &ModuleOverAlgebra, kernel: &[Vec<Scalar>], order: GeneratorOrder) -> (Vec<usize>, Vec<Vec<Scalar>>) {
    let alg = m.algebra();
    let target = EchelonBasis::new(m.field(), m.dim());
    let mut want = target.clone();
    for v in kernel {
        want.insert(v);
    }
    let mut covered = target;
    let (mut gens, mut imgs) = (Vec::new(), Vec::new());
    let mut idems: Vec<(usize, usize)> = alg.idempotents().iter().copied().enumerate().collect();
    let mut cands: Vec<&Vec<Scalar>> = kernel.iter().collect();
    if order == GeneratorOrder::Reverse {
        idems.reverse();
        cands.reverse();
    }
    'outer: for (pos, e) in idems {
        for v in cands.iter().copied() {
            if covered.rank() == want.rank() {
                break 'outer;
            }
            let c = m.project(pos, v);
            if vecops::is_zero(&c) || covered.contains(&c) {
                continue;
            }
            for b in (0..alg.dim()).filter(|&b| alg.fixes_right(b, e)) {
                covered.insert(&m.act_basis(b, &c));
            }
            gens.push(e);
            imgs.push(c);
        }
    }
    (gens, imgs)
}

/// A free resolution of `V` of length `L` (terms `P_0..P_L`).
pub fn free_resolution(v: &Arc<ModuleOverAlgebra>, length: usize) -> Result<ProjectiveResolution, DerivedError> {
    free_resolution_ordered(v, length, GeneratorOrder::Forward)
}

pub fn free_resolution_ordered(
    v: &Arc<ModuleOverAlgebra>,
    length: usize,
    order: GeneratorOrder,
) -> Result<ProjectiveResolution, DerivedError> {
    let alg = v.algebra().clone();
    let f = v.field();
    let mut terms = Vec::new();
    let mut modules = Vec::new();
    let mut images = Vec::new();
    let mut maps: Vec<Matrix> = Vec::new();
    let mut kernel: Vec<Vec<Scalar>> = (0..v.dim()).map(|i| vecops::unit(f, v.dim(), i)).collect();
    for i in 0..=length {
        let below: &ModuleOverAlgebra = if i == 0 { v } else { &modules[i - 1] };
        let (gens, imgs) = choose_generators(below, &kernel, order);
        let p = FreeModule::new(alg.clone(), gens);
        let map = p.matrix_of(&imgs, below);
        let image_rank = map.rank();
        let expected = want_rank(below, &kernel);
        if image_rank != expected {
            return Err(DerivedError::NotExact(i));
        }
        kernel = map.kernel_basis().columns();
        modules.push(p.module()?);
        terms.push(p);
        images.push(imgs);
        maps.push(map);
    }
    let solvers = (0..=length).map(|_| OnceLock::new()).collect();
    Ok(ProjectiveResolution {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        object: v.clone(),
        terms,
        modules,
        images,
        maps,
        solvers,
    })
}

fn want_rank(m: &ModuleOverAlgebra, kernel: &[Vec<Scalar>]) -> usize {
    let mut e = EchelonBasis::new(m.field(), m.dim());
    kernel.iter().filter(|v| e.insert(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::FieldSpec;

    fn cyclic(f: FieldSpec, n: usize) -> Arc<AlgebraSpec> {
        let mul: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Arc::new(AlgebraSpec::group_algebra(f, &mul, 0).unwrap())
    }

    fn trivial(a: &Arc<AlgebraSpec>) -> Arc<ModuleOverAlgebra> {
        let f = a.field();
        Arc::new(ModuleOverAlgebra::scalar(a.clone(), 1, |_| f.one()).unwrap())
    }

    #[test]
    fn free_module_resolves_itself() {
        let a = cyclic(FieldSpec::Rationals, 3);
        let reg = Arc::new(ModuleOverAlgebra::dense(a.clone(), (0..3).map(|b| a.left_regular(b)).collect()).unwrap());
        let p = free_resolution(&reg, 3).unwrap();
        assert_eq!(p.term(0).rank(), 1);
        for i in 1..=3 {
            assert_eq!(p.term(i).rank(), 0);
        }
    }

    #[test]
    fn ground_field_is_semisimple() {
        let a = Arc::new(AlgebraSpec::ground(FieldSpec::PrimeField(5)));
        let v = Arc::new(ModuleOverAlgebra::scalar(a, 3, |_| FieldSpec::PrimeField(5).one()).unwrap());
        let p = free_resolution(&v, 2).unwrap();
        assert_eq!((p.term(0).rank(), p.term(1).rank(), p.term(2).rank()), (3, 0, 0));
    }

    #[test]
    fn periodic_resolution_over_f2_z2() {
        let f = FieldSpec::PrimeField(2);
        let a = cyclic(f, 2);
        let p = free_resolution(&trivial(&a), 6).unwrap();
        let one_plus_g = Matrix::from_i64_rows(f, &[vec![1, 1], vec![1, 1]]);
        for i in 0..=6 {
            assert_eq!(p.term(i).rank(), 1);
            if i > 0 {
                assert_eq!(p.map_matrix(i), &one_plus_g);
            }
        }
        for i in 1..=6 {
            assert!(p.map_matrix(i - 1).mul(p.map_matrix(i)).is_zero());
        }
    }
}
