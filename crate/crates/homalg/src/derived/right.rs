use std::sync::{Arc, OnceLock};

use crate::complexes::CochainComplex;
use crate::exactla::{vecops, LinearSolver, Matrix, Scalar};

use super::ext::HomLayout;
use super::{DerivedError, ModuleOverAlgebra, ProjectiveResolution};

/// An augmented complex `V' → A^0 → A^1 → ⋯ → A^top` of modules, exact below `top`.
pub trait RightResolution: Send + Sync {
    /// The resolved module `V'`.
    fn object(&self) -> &Arc<ModuleOverAlgebra>;
    fn top(&self) -> usize;
    fn term(&self, q: usize) -> &ModuleOverAlgebra;
    fn augment(&self, v: &[Scalar]) -> Vec<Scalar>;
    fn d(&self, q: usize, x: &[Scalar]) -> Vec<Scalar>;
    /// For a cocycle `y ∈ A^q`, `q ≥ 1`: some `x ∈ A^{q-1}` with `dx = y`.
    fn contract(&self, q: usize, y: &[Scalar]) -> Option<Vec<Scalar>>;
    /// For `y ∈ Z^0`: the unique `v` with `ε v = y`.
    fn unaugment(&self, y: &[Scalar]) -> Option<Vec<Scalar>>;
}

/// A right resolution with every term and map stored explicitly.
#[derive(Debug)]
pub struct DenseResolution {
    object: Arc<ModuleOverAlgebra>,
    terms: Vec<Arc<ModuleOverAlgebra>>,
    augmentation: Matrix,
    diffs: Vec<Matrix>,
    solvers: Vec<OnceLock<LinearSolver>>,
}

impl DenseResolution {
    /// Checks module maps, `d∘d = 0`, `d^0 ε = 0`, `ε` injective and exactness at `A^0..A^{top-1}`.
    pub fn new(
        object: Arc<ModuleOverAlgebra>,
        terms: Vec<Arc<ModuleOverAlgebra>>,
        augmentation: Matrix,
        diffs: Vec<Matrix>,
    ) -> Result<Self, DerivedError> {
        if terms.is_empty() || diffs.len() + 1 != terms.len() {
            return Err(DerivedError::Malformed("need one differential between consecutive terms".into()));
        }
        if !object.is_module_map(&augmentation, &terms[0]) {
            return Err(DerivedError::Malformed("augmentation is not a module map".into()));
        }
        for (q, d) in diffs.iter().enumerate() {
            if !terms[q].is_module_map(d, &terms[q + 1]) {
                return Err(DerivedError::Malformed(format!("d^{q} is not a module map")));
            }
        }
        let mut prev = augmentation.clone();
        if prev.rank() != object.dim() {
            return Err(DerivedError::NotExact(0));
        }
        for (q, d) in diffs.iter().enumerate() {
            if !d.mul(&prev).is_zero() {
                return Err(DerivedError::Malformed(format!("d^{q} does not kill the previous image")));
            }
            if d.cols() - d.rank() != prev.rank() {
                return Err(DerivedError::NotExact(q));
            }
            prev = d.clone();
        }
        let solvers = (0..terms.len()).map(|_| OnceLock::new()).collect();
        Ok(DenseResolution { object, terms, augmentation, diffs, solvers })
    }

    pub fn augmentation(&self) -> &Matrix {
        &self.augmentation
    }

    pub fn differential(&self, q: usize) -> &Matrix {
        &self.diffs[q]
    }

    pub fn term_arc(&self, q: usize) -> &Arc<ModuleOverAlgebra> {
        &self.terms[q]
    }

    /// The underlying complex of vector spaces, degrees `0..=top`.
    pub fn complex(&self) -> CochainComplex {
        CochainComplex::new(self.object.field(), 0, self.terms.iter().map(|t| t.dim()).collect(), self.diffs.clone())
            .expect("resolution shapes")
    }

    fn solver(&self, q: usize) -> &LinearSolver {
        self.solvers[q].get_or_init(|| if q == 0 { LinearSolver::new(&self.augmentation) } else { LinearSolver::new(&self.diffs[q - 1]) })
    }
}

impl RightResolution for DenseResolution {
    fn object(&self) -> &Arc<ModuleOverAlgebra> {
        &self.object
    }
    fn top(&self) -> usize {
        self.terms.len() - 1
    }
    fn term(&self, q: usize) -> &ModuleOverAlgebra {
        &self.terms[q]
    }
    fn augment(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.augmentation.mul_vec(v)
    }
    fn d(&self, q: usize, x: &[Scalar]) -> Vec<Scalar> {
        match self.diffs.get(q) {
            Some(m) => m.mul_vec(x),
            None => vec![],
        }
    }
    fn contract(&self, q: usize, y: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solver(q).solve(y)
    }
    fn unaugment(&self, y: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solver(0).solve(y)
    }
}

/// The complex `⟨V, A⟩^q = Hom_R(V, A^q)` in explicit coordinates.
pub trait HomIntoResolution: Send + Sync {
    fn complex(&self) -> &CochainComplex;
    /// The map `V → A^q` of the element `coords`, as images of the basis of `V`.
    fn as_map(&self, q: usize, coords: &[Scalar]) -> Vec<Vec<Scalar>>;
}

/// `⟨V, A⟩` computed from a free resolution `P → V`: `Hom_R(V, M) = ker(Hom(P_0,M) → Hom(P_1,M))`.
pub struct GenericHomInto {
    p: Arc<ProjectiveResolution>,
    a: Arc<dyn RightResolution>,
    complex: CochainComplex,
    layouts: Vec<HomLayout>,
    bases: Vec<Matrix>,
}

impl GenericHomInto {
    pub fn new(p: &Arc<ProjectiveResolution>, a: &Arc<dyn RightResolution>) -> Result<Self, DerivedError> {
        if p.length() < 1 {
            return Err(DerivedError::TruncationTooShort { needed: 1, have: p.length() });
        }
        let f = p.object().field();
        let top = a.top();
        let layouts: Vec<HomLayout> = (0..=top).map(|q| HomLayout::new(p.term(0), a.term(q))).collect();
        let bases: Vec<Matrix> = crate::par::map_range(top + 1, |q| {
            let w = a.term(q);
            let lay = [layouts[q].clone(), HomLayout::new(p.term(1), w)];
            super::ext::hom_differential_matrix(p, 0, w, &lay).kernel_basis()
        });
        let mut diffs = Vec::new();
        for q in 0..top {
            let next = LinearSolver::new(&bases[q + 1]);
            let cols: Vec<Vec<Scalar>> = bases[q]
                .columns()
                .iter()
                .map(|g| {
                    let imgs = layouts[q].to_images(g, f);
                    let pushed: Vec<Vec<Scalar>> = imgs.iter().map(|v| a.d(q, v)).collect();
                    next.solve(&layouts[q + 1].from_images(&pushed)).expect("d_A preserves module maps")
                })
                .collect();
            diffs.push(Matrix::from_cols(f, bases[q + 1].cols(), &cols));
        }
        let dims = bases.iter().map(|b| b.cols()).collect();
        let complex = CochainComplex::new(f, 0, dims, diffs).expect("hom shapes");
        Ok(GenericHomInto { p: p.clone(), a: a.clone(), complex, layouts, bases })
    }

    /// Generator images on `P_0` of the element `coords`, i.e. `x∘ε`.
    pub fn on_generators(&self, q: usize, coords: &[Scalar]) -> Vec<Vec<Scalar>> {
        self.layouts[q].to_images(&self.bases[q].mul_vec(coords), self.p.object().field())
    }
}

impl HomIntoResolution for GenericHomInto {
    fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    fn as_map(&self, q: usize, coords: &[Scalar]) -> Vec<Vec<Scalar>> {
        let imgs = self.on_generators(q, coords);
        let v = self.p.object();
        let f = v.field();
        (0..v.dim())
            .map(|i| {
                let x = self.p.lift(0, &vecops::unit(f, v.dim(), i)).expect("ε is onto");
                self.p.term(0).apply(&x, &imgs, self.a.term(q))
            })
            .collect()
    }
}
