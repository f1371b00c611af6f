use std::sync::Arc;

use crate::complexes::CochainComplex;
use crate::derived::{AlgebraSpec, BlockAction, DenseResolution, DerivedError, HomIntoResolution, ModuleOverAlgebra};
use crate::exactla::{vecops, FieldSpec, Matrix, Scalar};

use super::poset::ChainIndex;
use super::SheafOnPoset;

/// Functions on a list of strict chains `y_0 < ⋯ < y_n`, valued in `S_{y_n}`.
#[derive(Clone, Debug)]
pub struct ChainSpace {
    pub index: ChainIndex,
    pub offsets: Vec<usize>,
    pub dim: usize,
    pub degree: usize,
}

impl ChainSpace {
    pub fn new(s: &SheafOnPoset, chains: Vec<Vec<usize>>, degree: usize) -> Self {
        let mut offsets = Vec::with_capacity(chains.len());
        let mut dim = 0;
        for c in &chains {
            offsets.push(dim);
            dim += s.stalk(*c.last().expect("nonempty chain"));
        }
        ChainSpace { index: ChainIndex::new(chains), offsets, dim, degree }
    }

    /// Chains inside the up-set `u` (sorted).
    pub fn on(s: &SheafOnPoset, u: &[usize], degree: usize) -> Self {
        Self::new(s, s.poset().chains_in(u, degree), degree)
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.index.chains
    }

    pub fn range(&self, s: &SheafOnPoset, c: &[usize]) -> Option<std::ops::Range<usize>> {
        let i = self.index.get(c)?;
        let o = self.offsets[i];
        Some(o..o + s.stalk(*c.last().unwrap()))
    }

    /// Values of `f` restricted to the chains of `sub` (which must all belong here).
    pub fn restrict_to(&self, s: &SheafOnPoset, sub: &ChainSpace, f: &[Scalar]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(sub.dim);
        for c in sub.chains() {
            out.extend_from_slice(&f[self.range(s, c).expect("sub-domain")]);
        }
        out
    }
}

/// `(df)(y_0..y_{n+1}) = Σ_{i≤n} (-1)^i f(..ŷ_i..) + (-1)^{n+1} r_{y_n≤y_{n+1}} f(y_0..y_n)`.
pub fn chain_coboundary(s: &SheafOnPoset, src: &ChainSpace, dst: &ChainSpace, f: &[Scalar]) -> Vec<Scalar> {
    let field = s.field();
    let n = src.degree;
    let mut out = vecops::zeros(field, dst.dim);
    let mut face = Vec::with_capacity(n + 1);
    for (k, c) in dst.chains().iter().enumerate() {
        let o = dst.offsets[k];
        let last = c[n + 1];
        let sz = s.stalk(last);
        if sz == 0 {
            continue;
        }
        let slot = &mut out[o..o + sz];
        for i in 0..=n {
            face.clear();
            face.extend(c.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y));
            let v = &f[src.range(s, &face).expect("faces stay in the domain")];
            if i % 2 == 0 {
                vecops::add_into(slot, v);
            } else {
                for (a, b) in slot.iter_mut().zip(v) {
                    *a -= b;
                }
            }
        }
        let v = &f[src.range(s, &c[..=n]).expect("faces stay in the domain")];
        if !vecops::is_zero(v) {
            let img = s.restriction(c[n], last).mul_vec(v);
            vecops::axpy(slot, &field.one().signed(n as i64 + 1), &img);
        }
    }
    out
}

pub fn chain_coboundary_matrix(s: &SheafOnPoset, src: &ChainSpace, dst: &ChainSpace) -> Matrix {
    let f = s.field();
    let cols: Vec<Vec<Scalar>> = crate::par::map_range(src.dim, |i| chain_coboundary(s, src, dst, &vecops::unit(f, src.dim, i)));
    Matrix::from_cols(f, dst.dim, &cols)
}

/// Alexander–Whitney product of an `S`-valued `f` (degree `p`) with a scalar `g`
/// (degree `q`): `(f∪g)(y_0..y_{p+q}) = r_{y_p≤y_{p+q}} f(y_0..y_p) · g(y_p..y_{p+q})`.
pub fn aw_cup(
    s: &SheafOnPoset,
    k: &SheafOnPoset,
    left: &ChainSpace,
    f: &[Scalar],
    right: &ChainSpace,
    g: &[Scalar],
    out: &ChainSpace,
) -> Vec<Scalar> {
    let p = left.degree;
    let mut res = vecops::zeros(s.field(), out.dim);
    for (i, c) in out.chains().iter().enumerate() {
        let last = *c.last().unwrap();
        let sz = s.stalk(last);
        if sz == 0 {
            continue;
        }
        let gr = right.range(k, &c[p..]).expect("back face in the right domain");
        let gv = &g[gr.start];
        if gv.is_zero() {
            continue;
        }
        let fv = &f[left.range(s, &c[..=p]).expect("front face in the left domain")];
        if vecops::is_zero(fv) {
            continue;
        }
        let img = s.restriction(c[p], last).mul_vec(fv);
        let o = out.offsets[i];
        for (a, b) in res[o..o + sz].iter_mut().zip(&img) {
            *a = b * gv;
        }
    }
    res
}

/// One term `A^n(S)`: at `x`, functions on chains starting at or above `x`;
/// restriction along `x ≤ x'` keeps the chains above `x'`.
#[derive(Clone, Debug)]
pub struct GodementTerm {
    pub degree: usize,
    pub stalks: Vec<ChainSpace>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

impl GodementTerm {
    fn new(s: &SheafOnPoset, n: usize) -> Self {
        let p = s.poset();
        let stalks: Vec<ChainSpace> = (0..p.size()).map(|x| ChainSpace::on(s, &p.up_set(x), n)).collect();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for st in &stalks {
            offsets.push(dim);
            dim += st.dim;
        }
        GodementTerm { degree: n, stalks, offsets, dim }
    }

    pub fn stalk_slice<'a>(&self, x: usize, v: &'a [Scalar]) -> &'a [Scalar] {
        &v[self.offsets[x]..self.offsets[x] + self.stalks[x].dim]
    }

    fn module(&self, s: &SheafOnPoset, algebra: &Arc<AlgebraSpec>, pairs: &[(usize, usize)]) -> ModuleOverAlgebra {
        let f = s.field();
        let mut offsets = Vec::new();
        let mut sizes = Vec::new();
        let mut first_block = Vec::new();
        for (x, st) in self.stalks.iter().enumerate() {
            first_block.push(offsets.len());
            for (i, c) in st.chains().iter().enumerate() {
                offsets.push(self.offsets[x] + st.offsets[i]);
                sizes.push(s.stalk(*c.last().unwrap()));
            }
        }
        let maxs = sizes.iter().copied().max().unwrap_or(0);
        let pool: Vec<Matrix> = (0..=maxs).map(|d| Matrix::identity(f, d)).collect();
        let ops = pairs
            .iter()
            .map(|&(x, y)| {
                let (sx, sy) = (&self.stalks[x], &self.stalks[y]);
                sy.chains()
                    .iter()
                    .enumerate()
                    .filter_map(|(j, c)| {
                        let i = sx.index.get(c).expect("chains above y are above x");
                        let (src, dst) = (first_block[x] + i, first_block[y] + j);
                        (sizes[src] > 0).then_some((src, dst, sizes[src]))
                    })
                    .collect()
            })
            .collect();
        ModuleOverAlgebra::blocks(algebra.clone(), BlockAction { offsets, sizes, pool, ops }).expect("chain blocks are adapted")
    }

    /// Stalkwise coboundary into `next`.
    fn coboundary(&self, s: &SheafOnPoset, next: &GodementTerm, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(next.dim);
        for x in 0..self.stalks.len() {
            out.extend(chain_coboundary(s, &self.stalks[x], &next.stalks[x], self.stalk_slice(x, v)));
        }
        out
    }
}

/// Godement-type resolution `S → A^0 → ⋯ → A^top` by chain functions on stalks,
/// with global sections `Γ(X, A^n)` = functions on all chains of the poset.
pub struct Godement {
    pub sheaf: SheafOnPoset,
    pub algebra: Arc<AlgebraSpec>,
    pub pairs: Vec<(usize, usize)>,
    pub terms: Vec<GodementTerm>,
    pub sections: Vec<ChainSpace>,
    pub resolution: Arc<DenseResolution>,
    gamma: CochainComplex,
}

impl Godement {
    pub fn new(s: &SheafOnPoset, algebra: &Arc<AlgebraSpec>, pairs: &[(usize, usize)], top: usize) -> Result<Self, DerivedError> {
        let f = s.field();
        let p = s.poset();
        let all: Vec<usize> = (0..p.size()).collect();
        let terms: Vec<GodementTerm> = (0..=top + 1).map(|n| GodementTerm::new(s, n)).collect();
        let sections: Vec<ChainSpace> = (0..=top + 1).map(|n| ChainSpace::on(s, &all, n)).collect();
        let modules: Vec<Arc<ModuleOverAlgebra>> = terms[..=top].iter().map(|t| Arc::new(t.module(s, algebra, pairs))).collect();
        let object = Arc::new(s.as_module(algebra, pairs));
        let sd: usize = s.stalks().iter().sum();
        let mut eps = Matrix::zeros(f, terms[0].dim, sd);
        let mut col = 0;
        for x in 0..p.size() {
            let st = &terms[0].stalks[x];
            for a in 0..s.stalk(x) {
                for (i, c) in st.chains().iter().enumerate() {
                    let r = s.restriction(x, c[0]);
                    for b in 0..s.stalk(c[0]) {
                        let v = r.get(b, a);
                        if !v.is_zero() {
                            eps.set(terms[0].offsets[x] + st.offsets[i] + b, col, &v);
                        }
                    }
                }
                col += 1;
            }
        }
        let diffs: Vec<Matrix> = (0..top)
            .map(|n| {
                let (t, t2) = (&terms[n], &terms[n + 1]);
                let cols: Vec<Vec<Scalar>> = crate::par::map_range(t.dim, |i| t.coboundary(s, t2, &vecops::unit(f, t.dim, i)));
                Matrix::from_cols(f, t2.dim, &cols)
            })
            .collect();
        let resolution = Arc::new(DenseResolution::new(object, modules, eps, diffs)?);
        let gd: Vec<Matrix> = (0..top).map(|n| chain_coboundary_matrix(s, &sections[n], &sections[n + 1])).collect();
        let gamma = CochainComplex::new(f, 0, sections[..=top].iter().map(|c| c.dim).collect(), gd).expect("section shapes");
        Ok(Godement { sheaf: s.clone(), algebra: algebra.clone(), pairs: pairs.to_vec(), terms, sections, resolution, gamma })
    }

    pub fn top(&self) -> usize {
        self.gamma.hi() as usize
    }

    pub fn field(&self) -> FieldSpec {
        self.sheaf.field()
    }

    /// `Γ(X, A^•)`, i.e. `⟨C, A⟩`.
    pub fn gamma(&self) -> &CochainComplex {
        &self.gamma
    }

    /// The stalk at `x` of a global section.
    pub fn section_at(&self, n: usize, x: usize, alpha: &[Scalar]) -> Vec<Scalar> {
        self.sections[n].restrict_to(&self.sheaf, &self.terms[n].stalks[x], alpha)
    }

    /// A global section as a vector of the module `A^n` (its family of stalks).
    pub fn section_family(&self, n: usize, alpha: &[Scalar]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.terms[n].dim);
        for x in 0..self.terms[n].stalks.len() {
            out.extend(self.section_at(n, x, alpha));
        }
        out
    }

    /// Module-level coboundary `A^n → A^{n+1}` in any degree up to `top + 1`.
    pub fn module_d(&self, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.terms[n].coboundary(&self.sheaf, &self.terms[n + 1], v)
    }
}

/// `μ` on stalks at `x`: `A^p(S)_x ⊗ A^q(C)_x → A^{p+q}(S)_x`.
pub fn godement_mu(b: &Godement, a: &Godement, x: usize, p: usize, f: &[Scalar], q: usize, g: &[Scalar]) -> Vec<Scalar> {
    aw_cup(&b.sheaf, &a.sheaf, &b.terms[p].stalks[x], f, &a.terms[q].stalks[x], g, &b.terms[p + q].stalks[x])
}

/// `φ(α)(ξ) = μ(α(x) ⊗ ξ_x)` at every `x`: a global section `α ∈ Γ(B^n)` acting
/// on a module vector `ξ ∈ A^m(C)`.
pub fn section_times_module(b: &Godement, a: &Godement, n: usize, alpha: &[Scalar], m: usize, xi: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(b.terms[n + m].dim);
    for x in 0..b.terms[n].stalks.len() {
        let ax = b.section_at(n, x, alpha);
        out.extend(godement_mu(b, a, x, n, &ax, m, a.terms[m].stalk_slice(x, xi)));
    }
    out
}

/// Cup of global sections, `Γ(B^q) ⊗ Γ(A^p) → Γ(B^{p+q})`.
pub fn section_cup(b: &Godement, a: &Godement, q: usize, alpha: &[Scalar], p: usize, beta: &[Scalar]) -> Vec<Scalar> {
    aw_cup(&b.sheaf, &a.sheaf, &b.sections[q], alpha, &a.sections[p], beta, &b.sections[p + q])
}

/// `⟨C, A⟩` as maps out of the constant sheaf: the image of `1_x` is the stalk at `x`.
pub struct GodementSections<'a> {
    pub godement: &'a Godement,
}

impl HomIntoResolution for GodementSections<'_> {
    fn complex(&self) -> &CochainComplex {
        self.godement.gamma()
    }

    fn as_map(&self, q: usize, coords: &[Scalar]) -> Vec<Vec<Scalar>> {
        let g = self.godement;
        let n = g.terms[q].stalks.len();
        (0..n)
            .map(|x| {
                let mut v = vecops::zeros(g.field(), g.terms[q].dim);
                let o = g.terms[q].offsets[x];
                let sx = g.section_at(q, x, coords);
                v[o..o + sx.len()].clone_from_slice(&sx);
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cechposet::{face_poset, incidence_algebra, FinPoset};
    use crate::complexes::cohomology;
    use crate::derived::RightResolution;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn build(p: FinPoset, s: impl Fn(Arc<FinPoset>) -> SheafOnPoset, top: usize) -> Godement {
        let p = Arc::new(p);
        let (alg, pairs) = incidence_algebra(&p, Q);
        Godement::new(&s(p), &alg, &pairs, top).unwrap()
    }

    fn circle() -> FinPoset {
        face_poset(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn one_point_space() {
        let g = build(FinPoset::new(vec![vec![true]]).unwrap(), |p| SheafOnPoset::constant(p, Q), 2);
        assert_eq!(g.terms[0].dim, 1);
        assert_eq!(g.terms[1].dim, 0);
        assert_eq!(cohomology(g.gamma(), 0).dim, 1);
    }

    #[test]
    fn edge_poset_stalks() {
        let g = build(face_poset(&[vec![1, 2]]).unwrap(), |p| SheafOnPoset::constant(p, Q), 2);
        let dims: Vec<usize> = g.terms[0].stalks.iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![2, 2, 1]);
    }

    #[test]
    fn circle_cohomology() {
        let g = build(circle(), |p| SheafOnPoset::constant(p, Q), 3);
        let h: Vec<usize> = (0..=2).map(|n| cohomology(g.gamma(), n).dim).collect();
        assert_eq!(h, vec![1, 1, 0]);
        assert_eq!(g.resolution.top(), 3);
    }

    #[test]
    fn mu_is_unital_associative_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = Arc::new(face_poset(&[vec![0, 1, 2]]).unwrap());
        let (alg, pairs) = incidence_algebra(&p, Q);
        let a = Godement::new(&SheafOnPoset::constant(p.clone(), Q), &alg, &pairs, 2).unwrap();
        let rnd = |rng: &mut ChaCha8Rng, n: usize| -> Vec<Scalar> { (0..n).map(|_| Q.from_i64(rng.gen_range(-2..3))).collect() };
        for x in 0..p.size() {
            let one = vecops::unit(Q, 1, 0);
            let unit = a.resolution.augment(&{
                let mut e = vecops::zeros(Q, p.size());
                e[x] = Q.one();
                e
            });
            let unit_x = a.terms[0].stalk_slice(x, &unit).to_vec();
            let _ = one;
            for (pp, qq) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
                let f = rnd(&mut rng, a.terms[pp].stalks[x].dim);
                let g = rnd(&mut rng, a.terms[qq].stalks[x].dim);
                assert_eq!(godement_mu(&a, &a, x, pp, &f, 0, &unit_x), f);
                assert_eq!(godement_mu(&a, &a, x, 0, &unit_x, pp, &f), f);
                let h = rnd(&mut rng, a.terms[1].stalks[x].dim);
                if pp + qq + 1 <= 2 {
                    let l = godement_mu(&a, &a, x, pp + qq, &godement_mu(&a, &a, x, pp, &f, qq, &g), 1, &h);
                    let r = godement_mu(&a, &a, x, pp, &f, qq + 1, &godement_mu(&a, &a, x, qq, &g, 1, &h));
                    assert_eq!(l, r);
                }
                let st = |n: usize| &a.terms[n].stalks[x];
                let d = |n: usize, v: &[Scalar]| chain_coboundary(&a.sheaf, st(n), st(n + 1), v);
                let lhs = d(pp + qq, &godement_mu(&a, &a, x, pp, &f, qq, &g));
                let mut rhs = godement_mu(&a, &a, x, pp + 1, &d(pp, &f), qq, &g);
                vecops::axpy(&mut rhs, &Q.one().signed(pp as i64), &godement_mu(&a, &a, x, pp, &f, qq + 1, &d(qq, &g)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sections_agree_with_module_hom() {
        let g = build(circle(), |p| SheafOnPoset::constant(p, Q), 2);
        let sec = GodementSections { godement: &g };
        let c = g.resolution.object().clone();
        for n in 0..2usize {
            for i in 0..g.gamma().dim(n as i64) {
                let alpha = vecops::unit(Q, g.gamma().dim(n as i64), i);
                let imgs = sec.as_map(n, &alpha);
                let mut m = Matrix::zeros(Q, g.terms[n].dim, c.dim());
                for (j, v) in imgs.iter().enumerate() {
                    for (r, x) in v.iter().enumerate() {
                        m.set(r, j, x);
                    }
                }
                assert!(c.is_module_map(&m, g.resolution.term(n)));
                let family = g.section_family(n + 1, &g.gamma().apply_d(n as i64, &alpha));
                assert_eq!(g.module_d(n, &g.section_family(n, &alpha)), family);
            }
        }
    }
}
