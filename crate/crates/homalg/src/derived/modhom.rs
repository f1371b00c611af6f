use std::sync::Arc;

use crate::complexes::{hom_complex, CochainComplex, GradedMap, HomComplex};
use crate::exactla::{vecops, LinearSolver, Matrix, Scalar};

use super::right::HomIntoResolution;
use super::{DenseResolution, DerivedError, ModuleOverAlgebra};

/// A bounded complex of modules with module-map differentials.
#[derive(Clone, Debug)]
pub struct ModuleComplex {
    pub lo: i64,
    pub terms: Vec<Arc<ModuleOverAlgebra>>,
    pub diffs: Vec<Matrix>,
}

impl ModuleComplex {
    pub fn concentrated(m: Arc<ModuleOverAlgebra>) -> Self {
        ModuleComplex { lo: 0, terms: vec![m], diffs: vec![] }
    }

    pub fn of_resolution(a: &DenseResolution) -> Self {
        let top = super::RightResolution::top(a);
        ModuleComplex {
            lo: 0,
            terms: (0..=top).map(|q| a.term_arc(q).clone()).collect(),
            diffs: (0..top).map(|q| a.differential(q).clone()).collect(),
        }
    }

    pub fn complex(&self) -> CochainComplex {
        let f = self.terms[0].field();
        CochainComplex::new(f, self.lo, self.terms.iter().map(|t| t.dim()).collect(), self.diffs.clone()).expect("module complex shapes")
    }

    pub fn term(&self, n: i64) -> Option<&Arc<ModuleOverAlgebra>> {
        if n < self.lo {
            return None;
        }
        self.terms.get((n - self.lo) as usize)
    }
}

/// Basis of `Hom_R(M, N)` inside `Hom_k(M, N)`, vectorised column-major
/// (entry `(t, s)` at `s·dim N + t`), from `ρ_N(b) X = X ρ_M(b)` for every basis `b`.
pub fn module_hom_basis(m: &ModuleOverAlgebra, n: &ModuleOverAlgebra) -> Matrix {
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let alg = m.algebra();
    let mut rows = Vec::new();
    for b in 0..alg.dim() {
        let (rm, rn) = (m.matrix(b), n.matrix(b));
        for s in 0..dm {
            for t in 0..dn {
                // (ρ_N X - X ρ_M)_{t,s} = Σ_u ρ_N[t,u] X[u,s] - Σ_u X[t,u] ρ_M[u,s]
                let mut row = vecops::zeros(f, dm * dn);
                for u in 0..dn {
                    row[s * dn + u] += &rn.get(t, u);
                }
                for u in 0..dm {
                    row[u * dn + t] -= &rm.get(u, s);
                }
                if !vecops::is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Matrix::identity(f, dm * dn);
    }
    Matrix::from_rows(f, dm * dn, &rows).kernel_basis()
}

/// `⟨X, Y⟩_R`: graded module maps, as a subcomplex of the hom-complex of the
/// underlying vector-space complexes.
pub struct ModuleHomComplex {
    pub complex: CochainComplex,
    pub hom: Arc<HomComplex>,
    /// Columns: basis of degree `n` in `hom` coordinates.
    pub embed: Vec<Matrix>,
    solvers: Vec<LinearSolver>,
}

impl ModuleHomComplex {
    fn idx(&self, n: i64) -> usize {
        (n - self.complex.lo()) as usize
    }

    pub fn to_graded_map(&self, n: i64, coords: &[Scalar]) -> GradedMap {
        self.hom.from_vector(n, &self.embed[self.idx(n)].mul_vec(coords))
    }

    /// Coordinates of a graded map known to consist of module maps.
    pub fn coords_of(&self, g: &GradedMap) -> Option<Vec<Scalar>> {
        self.solvers[self.idx(g.degree)].solve(&self.hom.to_vector(g))
    }
}

pub fn module_hom_complex(x: &ModuleComplex, y: &ModuleComplex) -> ModuleHomComplex {
    let (cx, cy) = (Arc::new(x.complex()), Arc::new(y.complex()));
    let hom = Arc::new(hom_complex(&cx, &cy));
    let f = cx.field();
    let hc = &hom.complex;
    let degrees: Vec<i64> = hc.degrees().collect();
    let embed: Vec<Matrix> = crate::par::map(&degrees, |&n| {
        let mut cols = Vec::new();
        for b in hom.blocks(n) {
            let (Some(mx), Some(my)) = (x.term(b.p), y.term(b.p + n)) else { continue };
            let basis = module_hom_basis(mx, my);
            for c in basis.columns() {
                let mut v = vecops::zeros(f, hom.dim(n));
                v[b.offset..b.offset + c.len()].clone_from_slice(&c);
                cols.push(v);
            }
        }
        Matrix::from_cols(f, hom.dim(n), &cols)
    });
    let solvers: Vec<LinearSolver> = embed.iter().map(LinearSolver::new).collect();
    let mut diffs = Vec::new();
    for (k, &n) in degrees.iter().enumerate().take(degrees.len().saturating_sub(1)) {
        let img = hc.d(n).mul(&embed[k]);
        let cols: Vec<Vec<Scalar>> = img.columns().iter().map(|c| solvers[k + 1].solve(c).expect("d preserves module maps")).collect();
        diffs.push(Matrix::from_cols(f, embed[k + 1].cols(), &cols));
    }
    let dims = embed.iter().map(|e| e.cols()).collect();
    let complex = CochainComplex::new(f, hc.lo(), dims, diffs).expect("module hom shapes");
    ModuleHomComplex { complex, hom, embed, solvers }
}

/// `⟨V, A⟩` for a module `V` and a dense resolution, in degrees `0..=top`.
pub struct DenseHomInto {
    inner: ModuleHomComplex,
    complex: CochainComplex,
}

impl DenseHomInto {
    pub fn new(v: &Arc<ModuleOverAlgebra>, a: &DenseResolution) -> Result<Self, DerivedError> {
        let inner = module_hom_complex(&ModuleComplex::concentrated(v.clone()), &ModuleComplex::of_resolution(a));
        let top = super::RightResolution::top(a) as i64;
        let complex = inner.complex.restrict(0, top);
        Ok(DenseHomInto { inner, complex })
    }

    pub fn module_hom(&self) -> &ModuleHomComplex {
        &self.inner
    }
}

impl HomIntoResolution for DenseHomInto {
    fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    fn as_map(&self, q: usize, coords: &[Scalar]) -> Vec<Vec<Scalar>> {
        self.inner.to_graded_map(q as i64, coords).component(0).columns()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{cohomology, compose};
    use crate::derived::lemma::tests::periodic_injective;
    use crate::derived::{can_class, can_zigzag, free_resolution, yoneda, ExtSpace, GenericHomInto, HomLayout, RightResolution};

    #[test]
    fn hom_of_regular_is_regular() {
        let (_, a) = periodic_injective(3, 2);
        let r = a.term(0);
        assert_eq!(module_hom_basis(r, r).cols(), 3);
        let k = a.object();
        assert_eq!(module_hom_basis(k, r).cols(), 1);
    }

    #[test]
    fn dense_and_generic_hom_agree() {
        let (k, a) = periodic_injective(3, 5);
        let p = Arc::new(free_resolution(&k, 6).unwrap());
        let ar: Arc<dyn RightResolution> = a.clone();
        let g = GenericHomInto::new(&p, &ar).unwrap();
        let d = DenseHomInto::new(&k, &a).unwrap();
        let ext = ExtSpace::new(&p, &k);
        for n in 0..=4 {
            let (hg, hd) = (cohomology(g.complex(), n), cohomology(d.complex(), n));
            assert_eq!(hg.dim, hd.dim);
            for i in 0..hd.dim {
                assert!(can_class(&d, a.as_ref(), &ext, n as usize, &hd.rep(i)).is_ok());
            }
        }
    }

    /// `can(g∘f) = can(g∘ε) · can(f)` for `f ∈ [k, I]^p`, `g ∈ [I, I]^q`, `I` periodic over `𝔽_3[ℤ/3]`.
    #[test]
    fn composition_square() {
        let (k, a) = periodic_injective(3, 6);
        let p = Arc::new(free_resolution(&k, 7).unwrap());
        let ext = ExtSpace::new(&p, &k);
        let kc = ModuleComplex::concentrated(k.clone());
        let ic = ModuleComplex::of_resolution(&a);
        let hki = module_hom_complex(&kc, &ic);
        let hii = module_hom_complex(&ic, &ic);
        let lay = |n: usize| HomLayout::new(p.term(n), &k);
        let eps = GradedMap::from_fn(Arc::new(kc.complex()), Arc::new(ic.complex()), 0, |d| {
            if d == 0 {
                a.augmentation().clone()
            } else {
                Matrix::zeros(a.object().field(), 0, 0)
            }
        });
        let can_of = |g: &GradedMap, n: usize| -> Vec<Scalar> {
            let imgs = can_zigzag(&p, a.as_ref(), n, &g.component(0).columns()).unwrap();
            ext.classify(n, &lay(n).from_images(&imgs)).unwrap()
        };
        let mut checked = 0;
        for pp in 0..=2i64 {
            for q in 0..=2i64 {
                let hf = cohomology(&hki.complex, pp);
                let hg = cohomology(&hii.complex, q);
                for fi in hf.reps() {
                    let fm = hki.to_graded_map(pp, &fi);
                    for gi in hg.reps() {
                        let gm = hii.to_graded_map(q, &gi);
                        let lhs = can_of(&compose(&gm, &fm).unwrap(), (pp + q) as usize);
                        let cg = can_of(&compose(&gm, &eps).unwrap(), q as usize);
                        let cf = can_of(&fm, pp as usize);
                        let x = ext.from_cocycle(q as usize, ext.space(q as usize).unwrap().cocycle_reps.mul_vec(&cg));
                        let y = ext.from_cocycle(pp as usize, ext.space(pp as usize).unwrap().cocycle_reps.mul_vec(&cf));
                        let rhs = ext.classify((pp + q) as usize, &yoneda(&x, &y).unwrap().cocycle).unwrap();
                        assert_eq!(lhs, rhs, "p = {pp}, q = {q}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked >= 9);
    }
}
