use std::sync::Arc;

use crate::complexes::{cohomology, CochainComplex, CohomologySpace};
use crate::derived::{HomIntoResolution, RightResolution};
use crate::exactla::{vecops, LinearSolver, Matrix, Scalar};

use super::group::Tuples;
use super::standard::StandardResolution;
use super::GModule;

/// Degreewise fixed subspaces of a complex of representations, with the
/// restricted differentials. `rho(n, g)` is the action on `C^n`.
#[derive(Clone, Debug)]
pub struct InvariantComplex {
    pub complex: CochainComplex,
    /// Columns: the chosen basis of `(C^n)^G` inside `C^n`.
    pub embeddings: Vec<Matrix>,
}

pub fn invariants(c: &CochainComplex, order: usize, rho: impl Fn(i64, usize) -> Matrix + Sync) -> InvariantComplex {
    let f = c.field();
    let degs: Vec<i64> = c.degrees().collect();
    let embeddings: Vec<Matrix> = crate::par::map(&degs, |&n| {
        let d = c.dim(n);
        let mut stacked = Matrix::zeros(f, 0, d);
        for g in 0..order {
            stacked = stacked.vstack(&rho(n, g).sub(&Matrix::identity(f, d)));
        }
        stacked.kernel_basis()
    });
    let mut diffs = Vec::new();
    for (k, &n) in degs.iter().enumerate().take(degs.len().saturating_sub(1)) {
        let next = LinearSolver::new(&embeddings[k + 1]);
        let img = c.d(n).mul(&embeddings[k]);
        let cols: Vec<Vec<Scalar>> = img
            .columns()
            .iter()
            .map(|v| next.solve(v).expect("differential is equivariant"))
            .collect();
        diffs.push(Matrix::from_cols(f, embeddings[k + 1].cols(), &cols));
    }
    let dims = embeddings.iter().map(|e| e.cols()).collect();
    InvariantComplex { complex: CochainComplex::new(f, c.lo(), dims, diffs).expect("invariant shapes"), embeddings }
}

/// `⟨k, I(W)⟩ = I(W)^G` in the coordinates `F(h_1..h_n) = f(e, h_1..h_n)`;
/// an invariant cochain is recovered as `f(g_0..g_n) = ρ(g_0) F(g_0⁻¹g_1, …, g_0⁻¹g_n)`.
pub struct InvariantCochains {
    res: Arc<StandardResolution>,
    complex: CochainComplex,
}

impl InvariantCochains {
    pub fn new(res: &Arc<StandardResolution>) -> Self {
        let w = res.coefficients();
        let top = res.top();
        let diffs = crate::par::map_range(top, |n| inhomogeneous_coboundary(w, n));
        let m = w.group().order();
        let dims = (0..=top).map(|n| m.pow(n as u32) * w.dim()).collect();
        let complex = CochainComplex::new(w.field(), 0, dims, diffs).expect("invariant shapes");
        InvariantCochains { res: res.clone(), complex }
    }

    pub fn resolution(&self) -> &Arc<StandardResolution> {
        &self.res
    }

    pub fn embed(&self, n: usize, big_f: &[Scalar]) -> Vec<Scalar> {
        embed(self.res.coefficients(), n, big_f)
    }

    pub fn restrict(&self, n: usize, f: &[Scalar]) -> Vec<Scalar> {
        let w = self.res.coefficients();
        let block = w.group().order().pow(n as u32) * w.dim();
        let e = w.group().identity();
        f[e * block..(e + 1) * block].to_vec()
    }
}

impl HomIntoResolution for InvariantCochains {
    fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    fn as_map(&self, q: usize, coords: &[Scalar]) -> Vec<Vec<Scalar>> {
        vec![self.embed(q, coords)]
    }
}

pub(crate) fn embed(w: &GModule, n: usize, big_f: &[Scalar]) -> Vec<Scalar> {
    let g = w.group();
    let m = g.order();
    let dw = w.dim();
    let full = Tuples { m, len: n + 1 };
    let inner = Tuples { m, len: n };
    let mut out = vecops::zeros(w.field(), full.count() * dw);
    let mut buf = vec![0; n + 1];
    for t in 0..full.count() {
        full.decode(t, &mut buf);
        let gi = g.inv(buf[0]);
        let s = inner.encode(buf[1..].iter().map(|&x| g.mul(gi, x)));
        let v = &big_f[s * dw..(s + 1) * dw];
        let val = if w.is_trivial() { v.to_vec() } else { w.rho(buf[0]).mul_vec(v) };
        out[t * dw..(t + 1) * dw].clone_from_slice(&val);
    }
    out
}

/// `dF(h_1..h_{n+1}) = ρ(h_1) F(h_1⁻¹h_2, …) + Σ_{i≥1} (-1)^i F(h_1..ĥ_i..h_{n+1})`.
fn inhomogeneous_coboundary(w: &GModule, n: usize) -> Matrix {
    let g = w.group();
    let m = g.order();
    let dw = w.dim();
    let f = w.field();
    let src = Tuples { m, len: n };
    let dst = Tuples { m, len: n + 1 };
    let mut d = Matrix::zeros(f, dst.count() * dw, src.count() * dw);
    let mut h = vec![0; n + 1];
    let one = f.one();
    for t in 0..dst.count() {
        dst.decode(t, &mut h);
        let hi = g.inv(h[0]);
        let s0 = src.encode(h[1..].iter().map(|&x| g.mul(hi, x)));
        let r = w.rho(h[0]);
        for a in 0..dw {
            for b in 0..dw {
                let x = r.get(a, b);
                if !x.is_zero() {
                    d.add_at(t * dw + a, s0 * dw + b, &x);
                }
            }
        }
        for i in 1..=n + 1 {
            let s = src.encode(h.iter().enumerate().filter(|&(k, _)| k != i - 1).map(|(_, &x)| x));
            let sign = one.clone().signed(i as i64);
            for c in 0..dw {
                d.add_at(t * dw + c, s * dw + c, &sign);
            }
        }
    }
    d
}

/// `H^n_EM(G, W)`: cohomology of the invariant cochains of the standard resolution.
pub fn em_cohomology(w: &GModule, n: usize) -> CohomologySpace {
    let alg = w.group_algebra();
    let res = Arc::new(StandardResolution::new(w, &alg, n + 1));
    cohomology(&InvariantCochains::new(&res).complex, n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::FieldSpec;
    use crate::groupcoh::{sign_module_f2, FinGroup};

    #[test]
    fn generic_invariants_examples() {
        let g = Arc::new(FinGroup::cyclic(2));
        let f2 = FieldSpec::PrimeField(2);
        let c = CochainComplex::concentrated(f2, 0, 3);
        let triv = invariants(&c, 2, |_, _| Matrix::identity(f2, 3));
        assert_eq!(triv.complex.dim(0), 3);
        let reg = GModule::regular(g.clone(), f2);
        let c2 = CochainComplex::concentrated(f2, 0, 2);
        let inv = invariants(&c2, 2, |_, h| reg.rho(h).clone());
        assert_eq!(inv.complex.dim(0), 1);
        assert_eq!(inv.embeddings[0].col(0), vec![f2.one(), f2.one()]);
    }

    #[test]
    fn invariants_of_i0_are_constants() {
        let g = Arc::new(FinGroup::cyclic(3));
        let q = FieldSpec::Rationals;
        let k = GModule::trivial(g, q, 1);
        let alg = k.group_algebra();
        let s = StandardResolution::new(&k, &alg, 1);
        let c = CochainComplex::concentrated(q, 0, 3);
        let inv = invariants(&c, 3, |_, h| s.term(0).matrix(h));
        assert_eq!(inv.complex.dim(0), 1);
    }

    #[test]
    fn inhomogeneous_coordinates_match_homogeneous_coboundary() {
        let g = Arc::new(FinGroup::symmetric3());
        let w = sign_module_f2(g).unwrap();
        let alg = w.group_algebra();
        let res = Arc::new(StandardResolution::new(&w, &alg, 3));
        let inv = InvariantCochains::new(&res);
        let f = w.field();
        for n in 0..3usize {
            let dim = inv.complex.dim(n as i64);
            for i in (0..dim).step_by(5) {
                let big_f = vecops::unit(f, dim, i);
                let emb = inv.embed(n, &big_f);
                for h in 0..6 {
                    assert_eq!(res.term(n).act_basis(h, &emb), emb, "embedded cochain is invariant");
                }
                let d_hom = res.d(n, &emb);
                assert_eq!(inv.restrict(n + 1, &d_hom), inv.complex.apply_d(n as i64, &big_f));
                assert_eq!(inv.embed(n + 1, &inv.restrict(n + 1, &d_hom)), d_hom);
            }
        }
    }

    #[test]
    fn cohomology_examples() {
        let f2 = FieldSpec::PrimeField(2);
        let k2 = GModule::trivial(Arc::new(FinGroup::cyclic(2)), f2, 1);
        for n in 0..=4 {
            assert_eq!(em_cohomology(&k2, n).dim, 1);
        }
        let q = FieldSpec::Rationals;
        let k3 = GModule::trivial(Arc::new(FinGroup::cyclic(3)), q, 1);
        assert_eq!(em_cohomology(&k3, 0).dim, 1);
        for n in 1..=4 {
            assert_eq!(em_cohomology(&k3, n).dim, 0);
        }
        let reg = GModule::regular(Arc::new(FinGroup::cyclic(3)), q);
        assert_eq!(em_cohomology(&reg, 0).dim, reg.fixed_space().cols());
        assert_eq!(em_cohomology(&reg, 1).dim, 0);
    }
}
