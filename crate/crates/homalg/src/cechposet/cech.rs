use crate::complexes::{cohomology, CochainComplex};
use crate::exactla::{vecops, FieldSpec, Matrix, Scalar, Subspace};

use super::godement::{chain_coboundary, ChainSpace, Godement};
use super::{CechError, OpenCover, SheafOnPoset};

/// Coordinates of a family `(s_x)_{x∈U}` restricted to `W ⊆ U` (both sorted).
fn restrict_family(s: &SheafOnPoset, from: &[usize], to: &[usize], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::new();
    let mut off = 0;
    let mut it = to.iter().peekable();
    for &x in from {
        let d = s.stalk(x);
        if it.peek() == Some(&&x) {
            out.extend_from_slice(&v[off..off + d]);
            it.next();
        }
        off += d;
    }
    debug_assert!(it.next().is_none(), "target not contained in source");
    out
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, len, &mut Vec::new(), &mut out);
    out
}

fn drop(t: &[usize], j: usize) -> Vec<usize> {
    t.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect()
}

/// The alternating Čech complex `Č^p = ⊕_{i_0<⋯<i_p} Γ(U_{i_0⋯i_p}, S)`.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub sheaf: SheafOnPoset,
    pub cover: OpenCover,
    /// `tuples[p]`: index tuples of length `p + 1`.
    pub tuples: Vec<Vec<Vec<usize>>>,
    pub domains: Vec<Vec<Vec<usize>>>,
    pub sections: Vec<Vec<Subspace>>,
    pub offsets: Vec<Vec<usize>>,
    pub complex: CochainComplex,
}

impl CechComplex {
    pub fn field(&self) -> FieldSpec {
        self.sheaf.field()
    }

    /// The family on `U_I` of the `t`-th component of `c ∈ Č^p`.
    pub fn family(&self, p: usize, t: usize, c: &[Scalar]) -> Vec<Scalar> {
        let b = &self.sections[p][t];
        let o = self.offsets[p][t];
        b.basis.mul_vec(&c[o..o + b.dim()])
    }

    fn tuple_index(&self, p: usize, t: &[usize]) -> usize {
        self.tuples[p].binary_search_by(|u| u.as_slice().cmp(t)).expect("tuple present")
    }

    /// Assembles a cochain from families on each `U_I`.
    fn from_families(&self, p: usize, fams: &[Vec<Scalar>]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.complex.dim(p as i64));
        for (t, v) in fams.iter().enumerate() {
            out.extend(self.sections[p][t].coords(v).expect("a compatible family"));
        }
        out
    }
}

/// `Č(U, S)` in degrees `0..=top` (further truncated by the number of opens).
pub fn cech_complex(s: &SheafOnPoset, cover: &OpenCover, top: usize) -> Result<CechComplex, CechError> {
    let f = s.field();
    let top = top.min(cover.len().saturating_sub(1));
    let mut tup = Vec::new();
    let mut domains = Vec::new();
    let mut sections = Vec::new();
    let mut offsets = Vec::new();
    for p in 0..=top {
        let ts = tuples(cover.len(), p + 1);
        let doms: Vec<Vec<usize>> = ts.iter().map(|t| cover.intersection(t)).collect();
        let secs = doms.iter().map(|d| s.global_sections(d)).collect::<Result<Vec<_>, _>>()?;
        let mut off = Vec::new();
        let mut acc = 0;
        for b in &secs {
            off.push(acc);
            acc += b.dim();
        }
        tup.push(ts);
        domains.push(doms);
        sections.push(secs);
        offsets.push(off);
    }
    let mut c = CechComplex {
        sheaf: s.clone(),
        cover: cover.clone(),
        tuples: tup,
        domains,
        sections,
        offsets,
        complex: CochainComplex::zero(f),
    };
    let dims: Vec<usize> = (0..=top).map(|p| c.sections[p].iter().map(|b| b.dim()).sum()).collect();
    let diffs: Vec<Matrix> = (0..top)
        .map(|p| {
            let cols: Vec<Vec<Scalar>> = crate::par::map_range(dims[p], |i| {
                let v = vecops::unit(f, dims[p], i);
                let fams: Vec<Vec<Scalar>> = (0..c.tuples[p + 1].len())
                    .map(|t| {
                        let big = &c.tuples[p + 1][t];
                        let dom = &c.domains[p + 1][t];
                        let mut acc = vecops::zeros(f, dom.iter().map(|&x| s.stalk(x)).sum());
                        for j in 0..big.len() {
                            let face = drop(big, j);
                            let ft = c.tuple_index(p, &face);
                            let r = restrict_family(s, &c.domains[p][ft], dom, &c.family(p, ft, &v));
                            vecops::axpy(&mut acc, &f.one().signed(j as i64), &r);
                        }
                        acc
                    })
                    .collect();
                c.from_families(p + 1, &fams)
            });
            Matrix::from_cols(f, dims[p + 1], &cols)
        })
        .collect();
    c.complex = CochainComplex::new(f, 0, dims, diffs).expect("cech shapes");
    Ok(c)
}

/// `(α⌣β)_{i_0⋯i_{p+q}} = α_{i_0⋯i_p}|·β_{i_p⋯i_{p+q}}|` for `S`-valued `α` and scalar `β`.
pub fn cech_cup(cs: &CechComplex, ck: &CechComplex, alpha: &[Scalar], p: usize, beta: &[Scalar], q: usize) -> Result<Vec<Scalar>, CechError> {
    if !ck.sheaf.is_constant_k() || cs.cover.opens() != ck.cover.opens() || cs.field() != ck.field() {
        return Err(CechError::CoefficientMismatch);
    }
    let n = p + q;
    if n >= cs.tuples.len() {
        return Ok(vec![]);
    }
    let s = &cs.sheaf;
    let fams: Vec<Vec<Scalar>> = cs.tuples[n]
        .iter()
        .enumerate()
        .map(|(t, big)| {
            let dom = &cs.domains[n][t];
            let ta = cs.tuple_index(p, &big[..=p]);
            let tb = ck.tuple_index(q, &big[p..]);
            let a = restrict_family(s, &cs.domains[p][ta], dom, &cs.family(p, ta, alpha));
            let b = restrict_family(&ck.sheaf, &ck.domains[q][tb], dom, &ck.family(q, tb, beta));
            let mut out = Vec::with_capacity(a.len());
            let mut off = 0;
            for (k, &x) in dom.iter().enumerate() {
                let d = s.stalk(x);
                out.extend(a[off..off + d].iter().map(|v| v * &b[k]));
                off += d;
            }
            out
        })
        .collect();
    Ok(cs.from_families(n, &fams))
}

/// The double complex `K^{p,q} = ⊕_I Γ(U_I, B^q)` with `D = δ + (-1)^p d`,
/// receiving `Č(U, S)` along `q = 0` and `Γ(X, B)` along `p = 0`.
struct Tot<'a> {
    b: &'a Godement,
    cech: &'a CechComplex,
    /// `spaces[p][t][q]`: chain functions on chains of `U_I` of length `q + 1`.
    spaces: Vec<Vec<Vec<ChainSpace>>>,
    /// Offsets of the `(p, t)` blocks inside total degree `p + q`.
    offsets: Vec<Vec<Vec<usize>>>,
    dims: Vec<usize>,
    qmax: usize,
}

impl<'a> Tot<'a> {
    fn new(b: &'a Godement, cech: &'a CechComplex, nmax: usize) -> Self {
        let s = &b.sheaf;
        let pmax = cech.tuples.len() - 1;
        let qmax = nmax.min(b.sections.len() - 1);
        let spaces: Vec<Vec<Vec<ChainSpace>>> = (0..=pmax)
            .map(|p| cech.domains[p].iter().map(|d| (0..=qmax).map(|q| ChainSpace::on(s, d, q)).collect()).collect())
            .collect();
        let mut dims = vec![0; nmax + 1];
        let mut offsets = vec![vec![vec![usize::MAX; qmax + 1]; 0]; pmax + 1];
        for p in 0..=pmax {
            offsets[p] = vec![vec![usize::MAX; qmax + 1]; cech.tuples[p].len()];
        }
        for n in 0..=nmax {
            for p in 0..=n.min(pmax) {
                let q = n - p;
                if q > qmax {
                    continue;
                }
                for t in 0..cech.tuples[p].len() {
                    offsets[p][t][q] = dims[n];
                    dims[n] += spaces[p][t][q].dim;
                }
            }
        }
        Tot { b, cech, spaces, offsets, dims, qmax }
    }

    fn d(&self, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        let s = &self.b.sheaf;
        let f = s.field();
        let mut out = vecops::zeros(f, self.dims[n + 1]);
        let pmax = self.cech.tuples.len() - 1;
        for p in 0..=n.min(pmax) {
            let q = n - p;
            if q > self.qmax {
                continue;
            }
            for t in 0..self.cech.tuples[p].len() {
                let sp = &self.spaces[p][t][q];
                let o = self.offsets[p][t][q];
                let x = &v[o..o + sp.dim];
                if vecops::is_zero(x) {
                    continue;
                }
                if q < self.qmax {
                    let dx = chain_coboundary(s, sp, &self.spaces[p][t][q + 1], x);
                    let o2 = self.offsets[p][t][q + 1];
                    vecops::axpy(&mut out[o2..o2 + dx.len()], &f.one().signed(p as i64), &dx);
                }
                if p < pmax {
                    let me = &self.cech.tuples[p][t];
                    for (t2, big) in self.cech.tuples[p + 1].iter().enumerate() {
                        if let Some(j) = (0..big.len()).find(|&j| drop(big, j) == *me) {
                            let tgt = &self.spaces[p + 1][t2][q];
                            let r = sp.restrict_to(s, tgt, x);
                            let o2 = self.offsets[p + 1][t2][q];
                            vecops::axpy(&mut out[o2..o2 + r.len()], &f.one().signed(j as i64), &r);
                        }
                    }
                }
            }
        }
        out
    }

    fn complex(&self) -> CochainComplex {
        let f = self.b.field();
        let n = self.dims.len() - 1;
        let diffs: Vec<Matrix> = (0..n)
            .map(|k| {
                let cols: Vec<Vec<Scalar>> = crate::par::map_range(self.dims[k], |i| self.d(k, &vecops::unit(f, self.dims[k], i)));
                Matrix::from_cols(f, self.dims[k + 1], &cols)
            })
            .collect();
        CochainComplex::new(f, 0, self.dims.clone(), diffs).expect("tot shapes")
    }

    /// `Č^n → K^{n,0}`.
    fn from_cech(&self, n: usize, c: &[Scalar]) -> Vec<Scalar> {
        let s = &self.b.sheaf;
        let mut out = vecops::zeros(s.field(), self.dims[n]);
        for t in 0..self.cech.tuples[n].len() {
            let fam = self.cech.family(n, t, c);
            let dom = &self.cech.domains[n][t];
            let sp = &self.spaces[n][t][0];
            let o = self.offsets[n][t][0];
            let mut off = 0;
            for &x in dom {
                let d = s.stalk(x);
                let r = sp.range(s, &[x]).expect("points are 0-chains");
                out[o + r.start..o + r.end].clone_from_slice(&fam[off..off + d]);
                off += d;
            }
        }
        out
    }

    /// `Γ(X, B^n) → K^{0,n}`.
    fn from_global(&self, n: usize, y: &[Scalar]) -> Vec<Scalar> {
        let s = &self.b.sheaf;
        let mut out = vecops::zeros(s.field(), self.dims[n]);
        for t in 0..self.cech.tuples[0].len() {
            let sp = &self.spaces[0][t][n];
            let r = self.b.sections[n].restrict_to(s, sp, y);
            let o = self.offsets[0][t][n];
            out[o..o + r.len()].clone_from_slice(&r);
        }
        out
    }
}

/// The comparison `Ȟ^n(U, S) → H^n(Γ(X, B))` in degrees `0..=nmax`.
pub struct CechComparison {
    pub cech: CechComplex,
    /// Columns: images of the class basis of `Ȟ^n` in the class basis of `H^n(Γ(X, B))`.
    pub matrices: Vec<Matrix>,
}

impl CechComparison {
    pub fn apply(&self, n: usize, classes: &[Scalar]) -> Vec<Scalar> {
        self.matrices[n].mul_vec(classes)
    }
}

/// `Φ = H(j)^{-1} H(i)` through the double complex; fails with
/// [`CechError::ZigZagObstruction`] where `H(j)` is not invertible.
pub fn phi_cech(b: &Godement, cover: &OpenCover, nmax: usize) -> Result<CechComparison, CechError> {
    let f = b.field();
    if nmax + 1 > b.top() {
        return Err(crate::derived::DerivedError::TruncationTooShort { needed: nmax + 1, have: b.top() }.into());
    }
    let cech = cech_complex(&b.sheaf, cover, nmax + 1)?;
    let tot = Tot::new(b, &cech, nmax + 1);
    let tc = tot.complex();
    let mut matrices = Vec::new();
    for n in 0..=nmax {
        let ht = cohomology(&tc, n as i64);
        let hg = cohomology(b.gamma(), n as i64);
        let hj = Matrix::from_cols(f, ht.dim, &hg.reps().iter().map(|r| ht.classify(&tot.from_global(n, r))).collect::<Vec<_>>());
        if hj.rows() != hj.cols() || hj.rank() != hj.rows() {
            return Err(CechError::ZigZagObstruction(n));
        }
        let inv = hj.inverse().expect("square of full rank");
        let cols: Vec<Vec<Scalar>> = if n < cech.tuples.len() {
            let hc = cohomology(&cech.complex, n as i64);
            hc.reps().iter().map(|r| inv.mul_vec(&ht.classify(&tot.from_cech(n, r)))).collect()
        } else {
            vec![]
        };
        matrices.push(Matrix::from_cols(f, hg.dim, &cols));
    }
    Ok(CechComparison { cech, matrices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cechposet::{corpus, face_poset, incidence_algebra, FinPoset};
    use std::sync::Arc;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn space(facets: &[Vec<usize>]) -> Arc<FinPoset> {
        Arc::new(face_poset(facets).unwrap())
    }

    fn betti(c: &CochainComplex, n: usize) -> Vec<usize> {
        (0..=n).map(|k| cohomology(c, k as i64).dim).collect()
    }

    #[test]
    fn cech_betti_numbers_of_star_covers() {
        for (facets, expect) in [(corpus::circle(), vec![1, 1]), (corpus::sphere(), vec![1, 0, 1]), (corpus::torus(), vec![1, 2, 1])] {
            let p = space(&facets);
            let c = SheafOnPoset::constant(p.clone(), Q);
            let cx = cech_complex(&c, &OpenCover::stars(&p), 3).unwrap();
            let top = cx.complex.hi() as usize;
            let mut b = betti(&cx.complex, top.min(expect.len()));
            b.truncate(expect.len());
            assert_eq!(b, expect);
        }
    }

    #[test]
    fn cech_d_squares_to_zero() {
        let p = space(&corpus::torus());
        let c = SheafOnPoset::constant(p.clone(), FieldSpec::PrimeField(2));
        let cx = cech_complex(&c, &OpenCover::stars(&p), 3).unwrap();
        for n in 0..cx.complex.hi() - 1 {
            assert!(cx.complex.d(n + 1).mul(&cx.complex.d(n)).is_zero());
        }
    }

    #[test]
    fn cech_cup_is_leibniz_and_unital() {
        let p = space(&corpus::sphere());
        let c = SheafOnPoset::constant(p.clone(), Q);
        let cx = cech_complex(&c, &OpenCover::stars(&p), 3).unwrap();
        let one: Vec<Scalar> = (0..cx.complex.dim(0)).map(|_| Q.one()).collect();
        assert!(vecops::is_zero(&cx.complex.apply_d(0, &one)));
        for (pp, qq) in [(0usize, 0usize), (0, 1), (1, 1), (1, 2), (2, 0)] {
            for i in 0..cx.complex.dim(pp as i64).min(5) {
                for j in 0..cx.complex.dim(qq as i64).min(5) {
                    let a = vecops::unit(Q, cx.complex.dim(pp as i64), i);
                    let b = vecops::unit(Q, cx.complex.dim(qq as i64), j);
                    if pp + qq + 1 > cx.complex.hi() as usize {
                        continue;
                    }
                    let lhs = cx.complex.apply_d((pp + qq) as i64, &cech_cup(&cx, &cx, &a, pp, &b, qq).unwrap());
                    let mut rhs = cech_cup(&cx, &cx, &cx.complex.apply_d(pp as i64, &a), pp + 1, &b, qq).unwrap();
                    let r2 = cech_cup(&cx, &cx, &a, pp, &cx.complex.apply_d(qq as i64, &b), qq + 1).unwrap();
                    vecops::axpy(&mut rhs, &Q.one().signed(pp as i64), &r2);
                    assert_eq!(lhs, rhs);
                }
            }
            if qq == 0 {
                let a = vecops::unit(Q, cx.complex.dim(pp as i64), 0);
                assert_eq!(cech_cup(&cx, &cx, &a, pp, &one, 0).unwrap(), a);
            }
        }
    }

    #[test]
    fn phi_is_an_isomorphism_for_good_covers() {
        let p = space(&corpus::circle());
        let (alg, pairs) = incidence_algebra(&p, Q);
        for s in [SheafOnPoset::constant(p.clone(), Q), SheafOnPoset::skyscraper(p.clone(), Q, 3)] {
            let b = Godement::new(&s, &alg, &pairs, 3).unwrap();
            let cmp = phi_cech(&b, &OpenCover::stars(&p), 2).unwrap();
            for m in &cmp.matrices {
                assert_eq!(m.rank(), m.rows());
                assert_eq!(m.rows(), m.cols());
            }
        }
    }

    #[test]
    fn non_acyclic_cover_loses_classes() {
        // {X, ↑0}: the open X carries the loop, so Ȟ^1 vanishes
        let p = space(&corpus::circle());
        let (alg, pairs) = incidence_algebra(&p, Q);
        let b = Godement::new(&SheafOnPoset::constant(p.clone(), Q), &alg, &pairs, 3).unwrap();
        let all: Vec<usize> = (0..p.size()).collect();
        let cover = OpenCover::new(&p, vec![all, p.up_set(p.minimal()[0])]).unwrap();
        let cmp = phi_cech(&b, &cover, 1).unwrap();
        assert_eq!(cohomology(&cmp.cech.complex, 1).dim, 0);
        assert_eq!((cmp.matrices[1].rows(), cmp.matrices[1].cols()), (1, 0));
        assert_eq!(cmp.matrices[0].rank(), 1);
    }
}
