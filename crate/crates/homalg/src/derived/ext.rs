use std::sync::Arc;

use crate::complexes::{cohomology, CochainComplex, CohomologySpace};
use crate::exactla::{vecops, Matrix, Scalar};

use super::{DerivedError, FreeModule, ModuleOverAlgebra, ProjectiveResolution};

/// Coordinates of `Hom_R(P_i, W) ≅ ⊕_j e_j W`: the block of generator `j` lists
/// the coordinates of `W` fixed by its idempotent.
#[derive(Clone, Debug)]
pub struct HomLayout {
    offsets: Vec<usize>,
    coords: Vec<Vec<usize>>,
    dim: usize,
    target_dim: usize,
}

impl HomLayout {
    pub fn new(p: &FreeModule, w: &ModuleOverAlgebra) -> Self {
        let mut offsets = Vec::new();
        let mut coords = Vec::new();
        let mut dim = 0;
        for &e in p.generators() {
            let c = w.idempotent_coords(w.idempotent_position(e)).to_vec();
            offsets.push(dim);
            dim += c.len();
            coords.push(c);
        }
        HomLayout { offsets, coords, dim, target_dim: w.dim() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generator images in `W`.
    pub fn to_images(&self, f: &[Scalar], field: crate::exactla::FieldSpec) -> Vec<Vec<Scalar>> {
        self.coords
            .iter()
            .zip(&self.offsets)
            .map(|(c, &o)| {
                let mut v = vecops::zeros(field, self.target_dim);
                for (t, &i) in c.iter().enumerate() {
                    v[i] = f[o + t].clone();
                }
                v
            })
            .collect()
    }

    /// Inverse of `to_images`; entries outside `e_j W` are dropped.
    pub fn from_images(&self, imgs: &[Vec<Scalar>]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.dim);
        for (c, img) in self.coords.iter().zip(imgs) {
            out.extend(c.iter().map(|&i| img[i].clone()));
        }
        out
    }
}

/// `D f = -(-1)^p f∘∂_{p+1}` on generator images.
pub fn hom_differential_images(
    p: &ProjectiveResolution,
    deg: usize,
    w: &ModuleOverAlgebra,
    f_images: &[Vec<Scalar>],
) -> Vec<Vec<Scalar>> {
    let sign = -w.field().one().signed(deg as i64);
    let src = p.term(deg);
    (0..p.term(deg + 1).rank())
        .map(|i| vecops::scale(&sign, &src.apply(p.boundary_of_generator(deg + 1, i), f_images, w)))
        .collect()
}

pub(crate) fn hom_differential_matrix(p: &ProjectiveResolution, deg: usize, w: &ModuleOverAlgebra, lay: &[HomLayout]) -> Matrix {
    let f = w.field();
    let sign = -f.one().signed(deg as i64);
    let (src, tgt) = (&lay[deg], &lay[deg + 1]);
    let pf = p.term(deg);
    let mut d = Matrix::zeros(f, tgt.dim(), src.dim());
    for (j, cj) in src.coords.iter().enumerate() {
        for (t, &c) in cj.iter().enumerate() {
            let col = src.offsets[j] + t;
            for i in 0..p.term(deg + 1).rank() {
                let x = p.boundary_of_generator(deg + 1, i);
                let mut val = vecops::zeros(f, w.dim());
                for (b, coef) in pf.block_terms(x, j) {
                    vecops::axpy(&mut val, coef, &w.act_unit(b, c));
                }
                for (s, &r) in tgt.coords[i].iter().enumerate() {
                    if !val[r].is_zero() {
                        d.add_at(tgt.offsets[i] + s, col, &(&sign * &val[r]));
                    }
                }
            }
        }
    }
    d
}

/// `Ext^•(V, W)` as the cohomology of `Hom_R(P_•, W)`, degrees `0..=L`.
#[derive(Debug)]
pub struct ExtSpace {
    pub resolution: Arc<ProjectiveResolution>,
    pub target: Arc<ModuleOverAlgebra>,
    pub complex: CochainComplex,
    layouts: Vec<HomLayout>,
    spaces: Vec<CohomologySpace>,
}

impl ExtSpace {
    pub fn new(p: &Arc<ProjectiveResolution>, w: &Arc<ModuleOverAlgebra>) -> Self {
        let l = p.length();
        let layouts: Vec<HomLayout> = (0..=l).map(|i| HomLayout::new(p.term(i), w)).collect();
        let diffs: Vec<Matrix> = crate::par::map_range(l, |i| hom_differential_matrix(p, i, w, &layouts));
        let dims = layouts.iter().map(|h| h.dim()).collect();
        let complex = CochainComplex::new(w.field(), 0, dims, diffs).expect("hom complex shapes");
        let spaces = (0..l).map(|n| cohomology(&complex, n as i64)).collect();
        ExtSpace { resolution: p.clone(), target: w.clone(), complex, layouts, spaces }
    }

    /// Highest degree with a computed cohomology space.
    pub fn max_degree(&self) -> usize {
        self.spaces.len().saturating_sub(1)
    }

    pub fn layout(&self, n: usize) -> &HomLayout {
        &self.layouts[n]
    }

    pub fn space(&self, n: usize) -> Result<&CohomologySpace, DerivedError> {
        self.spaces.get(n).ok_or(DerivedError::TruncationTooShort { needed: n + 1, have: self.resolution.length() })
    }

    pub fn dim(&self, n: usize) -> Result<usize, DerivedError> {
        Ok(self.space(n)?.dim)
    }

    pub fn classify(&self, n: usize, cocycle: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        Ok(self.space(n)?.classify(cocycle))
    }

    pub fn is_cocycle(&self, n: usize, f: &[Scalar]) -> bool {
        vecops::is_zero(&self.complex.apply_d(n as i64, f))
    }

    pub fn class(&self, n: usize, i: usize) -> Result<ExtClass, DerivedError> {
        Ok(ExtClass { resolution: self.resolution.clone(), target: self.target.clone(), degree: n, cocycle: self.space(n)?.rep(i) })
    }

    pub fn from_cocycle(&self, n: usize, cocycle: Vec<Scalar>) -> ExtClass {
        ExtClass { resolution: self.resolution.clone(), target: self.target.clone(), degree: n, cocycle }
    }

    pub fn images(&self, n: usize, f: &[Scalar]) -> Vec<Vec<Scalar>> {
        self.layouts[n].to_images(f, self.target.field())
    }
}

/// An element of `Ext^n(V, W)` as a cocycle `P_n → W` on a fixed resolution of `V`.
#[derive(Clone, Debug)]
pub struct ExtClass {
    pub resolution: Arc<ProjectiveResolution>,
    pub target: Arc<ModuleOverAlgebra>,
    pub degree: usize,
    pub cocycle: Vec<Scalar>,
}

impl ExtClass {
    pub fn resolution_id(&self) -> u64 {
        self.resolution.id()
    }

    pub fn images(&self) -> Vec<Vec<Scalar>> {
        HomLayout::new(self.resolution.term(self.degree), &self.target).to_images(&self.cocycle, self.target.field())
    }
}

/// `Ext^n(V, W)` on a fresh resolution of length `n + 1`.
pub fn ext(v: &Arc<ModuleOverAlgebra>, w: &Arc<ModuleOverAlgebra>, n: usize) -> Result<CohomologySpace, DerivedError> {
    let p = Arc::new(super::free_resolution(v, n + 1)?);
    Ok(ExtSpace::new(&p, w).space(n)?.clone())
}

/// Lifts a cocycle `f: P_{A,p} → V_2` (generator images) to `F_i: P_{A,p+i} → P_{B,i}`,
/// `i = 0..=q`, with `ε_B F_0 = f` and `∂_B F_i = (-1)^p F_{i-1} ∂_A`.
pub fn lift_cocycle(
    pa: &ProjectiveResolution,
    p: usize,
    f_images: &[Vec<Scalar>],
    pb: &ProjectiveResolution,
    q: usize,
) -> Result<Vec<Vec<Vec<Scalar>>>, DerivedError> {
    if p + q > pa.length() || q > pb.length() {
        return Err(DerivedError::TruncationTooShort { needed: (p + q).max(q), have: pa.length().min(pb.length()) });
    }
    let field = pa.object().field();
    let sign = field.one().signed(p as i64);
    let mut out: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(q + 1);
    for i in 0..=q {
        let src = pa.term(p + i);
        let mut level = Vec::with_capacity(src.rank());
        for j in 0..src.rank() {
            let want = if i == 0 {
                f_images[j].clone()
            } else {
                let x = pa.boundary_of_generator(p + i, j);
                vecops::scale(&sign, &pa.term(p + i - 1).apply(x, &out[i - 1], pb.term_module(i - 1)))
            };
            let x = pb.lift(i, &want).ok_or(DerivedError::LiftFailed(i))?;
            let m = pb.term_module(i);
            let pos = m.idempotent_position(src.generator_idempotent(j));
            level.push(m.project(pos, &x));
        }
        out.push(level);
    }
    Ok(out)
}

/// The composite `e2 ∘ e1 ∈ Ext^{p+q}(V_1, V_3)` for `e1 ∈ Ext^p(V_1, V_2)`, `e2 ∈ Ext^q(V_2, V_3)`.
pub fn yoneda(e2: &ExtClass, e1: &ExtClass) -> Result<ExtClass, DerivedError> {
    let (pa, pb) = (&e1.resolution, &e2.resolution);
    if !Arc::ptr_eq(pb.object(), &e1.target) {
        return Err(DerivedError::Malformed("yoneda: middle modules differ".into()));
    }
    let (p, q) = (e1.degree, e2.degree);
    let lifts = lift_cocycle(pa, p, &e1.images(), pb, q)?;
    let g = e2.images();
    let fq = &lifts[q];
    let v3 = &e2.target;
    let vals: Vec<Vec<Scalar>> = fq.iter().map(|x| pb.term(q).apply(x, &g, v3)).collect();
    let lay = HomLayout::new(pa.term(p + q), v3);
    Ok(ExtClass { resolution: pa.clone(), target: v3.clone(), degree: p + q, cocycle: lay.from_images(&vals) })
}

/// Pushforward along a module map `u: W → W'` (matrix).
pub fn ext_map(e: &ExtClass, u: &Matrix, w2: &Arc<ModuleOverAlgebra>) -> ExtClass {
    let vals: Vec<Vec<Scalar>> = e.images().iter().map(|v| u.mul_vec(v)).collect();
    let lay = HomLayout::new(e.resolution.term(e.degree), w2);
    ExtClass { resolution: e.resolution.clone(), target: w2.clone(), degree: e.degree, cocycle: lay.from_images(&vals) }
}

/// `Ext^n(V,u)` as a matrix in class coordinates.
pub fn ext_map_matrix(src: &ExtSpace, dst: &ExtSpace, n: usize, u: &Matrix) -> Result<Matrix, DerivedError> {
    let s = src.space(n)?;
    let t = dst.space(n)?;
    let f = src.target.field();
    let cols: Vec<Vec<Scalar>> = (0..s.dim)
        .map(|i| {
            let c = ext_map(&src.from_cocycle(n, s.rep(i)), u, &dst.target);
            t.classify(&c.cocycle)
        })
        .collect();
    Ok(Matrix::from_cols(f, t.dim, &cols))
}
