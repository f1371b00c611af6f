use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::complexes::{cohomology, CochainComplex};
use crate::exactla::{vecops, FieldSpec, Scalar};

use super::{DerivedError, VerificationReport};

/// The three hom-complexes `⟨V_i, A_j⟩` of the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    P12,
    P13,
    P23,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P13, Pair::P23];

    pub fn indices(self) -> (usize, usize) {
        match self {
            Pair::P12 => (1, 2),
            Pair::P13 => (1, 3),
            Pair::P23 => (2, 3),
        }
    }
}

/// Data of the composition statement: objects `V_i` with right resolutions
/// `A_i`, maps `φ_ij: ⟨V_i,A_j⟩ → ⟨A_i,A_j⟩` and `μ: ⟨V_2,A_3⟩ ⊗ ⟨V_1,A_2⟩ → ⟨V_1,A_3⟩`.
///
/// Hom-complexes live in degrees `0..=top` in instance coordinates.
pub trait Prop1Instance: Sync {
    fn name(&self) -> String;
    fn field(&self) -> FieldSpec;
    fn hom(&self, pair: Pair) -> &CochainComplex;
    /// Highest degree in which the stored hom-complexes compute the true cohomology
    /// (below any truncation).
    fn max_degree(&self) -> i64;
    fn v_dim(&self, i: usize) -> usize;
    fn a_dim(&self, i: usize, m: i64) -> usize;
    fn a_d(&self, i: usize, m: i64, x: &[Scalar]) -> Vec<Scalar>;
    fn epsilon(&self, i: usize, v: &[Scalar]) -> Vec<Scalar>;
    /// `f(v) ∈ A_j^n` for `f ∈ ⟨V_i,A_j⟩^n`.
    fn eval(&self, pair: Pair, n: i64, f: &[Scalar], v: &[Scalar]) -> Vec<Scalar>;
    /// `φ_ij(f)(ξ) ∈ A_j^{n+m}` for `ξ ∈ A_i^m`.
    fn phi(&self, pair: Pair, n: i64, f: &[Scalar], m: i64, xi: &[Scalar]) -> Vec<Scalar>;
    /// `μ(α ⊗ β)` for `α ∈ ⟨V_2,A_3⟩^q`, `β ∈ ⟨V_1,A_2⟩^p`.
    fn mu(&self, q: i64, alpha: &[Scalar], p: i64, beta: &[Scalar]) -> Vec<Scalar>;
    /// Class coordinates in `Ext^n(V_i, V_j)` of `can` of a cocycle.
    fn can(&self, pair: Pair, n: i64, f: &[Scalar]) -> Result<Vec<Scalar>, DerivedError>;
    /// The composite of `x ∈ Ext^q(V_2,V_3)` and `y ∈ Ext^p(V_1,V_2)`, in class coordinates.
    fn ext_product(&self, q: i64, x: &[Scalar], p: i64, y: &[Scalar]) -> Result<Vec<Scalar>, DerivedError>;
}

#[derive(Clone, Debug)]
pub struct HarnessOptions {
    /// Products are checked for `p + q ≤ window`.
    pub window: i64,
    /// Degrees `m` of `A_1` on whose basis hypothesis (b) and the chain-map
    /// property of `φ` are compared.
    pub xi_degrees: Vec<i64>,
    /// At most this many basis vectors per degree in exhaustive loops; `None` for all.
    pub basis_cap: Option<usize>,
    /// Deliberate corruption of the instance, for testing that checks refute.
    pub mutation: Option<Mutation>,
}

/// Corruptions applied on top of an honest instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// `μ(α, β)` negated whenever `deg β > 0`.
    FlipCupSign,
    /// `φ_13(f)` forgets its value on `A_1^0`, so it no longer extends `f`.
    BreakPhi,
    /// The composition product negated whenever the right factor has positive degree.
    FlipProductSign,
}

struct Mutated<'a> {
    inner: &'a dyn Prop1Instance,
    m: Mutation,
}

impl Prop1Instance for Mutated<'_> {
    fn name(&self) -> String {
        format!("{} [mutated: {:?}]", self.inner.name(), self.m)
    }
    fn field(&self) -> FieldSpec {
        self.inner.field()
    }
    fn hom(&self, pair: Pair) -> &CochainComplex {
        self.inner.hom(pair)
    }
    fn max_degree(&self) -> i64 {
        self.inner.max_degree()
    }
    fn v_dim(&self, i: usize) -> usize {
        self.inner.v_dim(i)
    }
    fn a_dim(&self, i: usize, m: i64) -> usize {
        self.inner.a_dim(i, m)
    }
    fn a_d(&self, i: usize, m: i64, x: &[Scalar]) -> Vec<Scalar> {
        self.inner.a_d(i, m, x)
    }
    fn epsilon(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.inner.epsilon(i, v)
    }
    fn eval(&self, pair: Pair, n: i64, f: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        self.inner.eval(pair, n, f, v)
    }
    fn phi(&self, pair: Pair, n: i64, f: &[Scalar], m: i64, xi: &[Scalar]) -> Vec<Scalar> {
        let out = self.inner.phi(pair, n, f, m, xi);
        if self.m == Mutation::BreakPhi && pair == Pair::P13 && m == 0 {
            return vecops::zeros(self.field(), out.len());
        }
        out
    }
    fn mu(&self, q: i64, alpha: &[Scalar], p: i64, beta: &[Scalar]) -> Vec<Scalar> {
        let out = self.inner.mu(q, alpha, p, beta);
        if self.m == Mutation::FlipCupSign && p > 0 {
            return vecops::neg(&out);
        }
        out
    }
    fn can(&self, pair: Pair, n: i64, f: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        self.inner.can(pair, n, f)
    }
    fn ext_product(&self, q: i64, x: &[Scalar], p: i64, y: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        let out = self.inner.ext_product(q, x, p, y)?;
        if self.m == Mutation::FlipProductSign && p > 0 {
            return Ok(vecops::neg(&out));
        }
        Ok(out)
    }
}

/// Folds a harness report into a theorem report, where the harness hypotheses
/// are claims about the instance: a failing one refutes the theorem check.
pub fn merge_as_obligations(into: &mut VerificationReport, h: &VerificationReport) {
    into.checks += h.checks + h.hypotheses.len();
    into.warnings.extend(h.warnings.iter().cloned());
    into.degrees_checked.extend(h.degrees_checked.iter().filter(|d| !into.degrees_checked.contains(d)).cloned().collect::<Vec<_>>());
    for hyp in h.hypotheses.iter().filter(|x| !x.holds) {
        into.fail(json!({"stage": h.theorem, "obligation": hyp.name, "detail": hyp.detail}));
    }
    if let Some(c) = &h.counterexample {
        into.fail(json!({"stage": h.theorem, "counterexample": c}));
    }
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions { window: 2, xi_degrees: vec![0, 1], basis_cap: None, mutation: None }
    }
}

fn basis(field: FieldSpec, n: usize, cap: Option<usize>) -> impl Iterator<Item = Vec<Scalar>> {
    let k = cap.map_or(n, |c| c.min(n));
    (0..k).map(move |i| vecops::unit(field, n, i))
}

fn source_index(pair: Pair) -> usize {
    pair.indices().0
}

fn target_index(pair: Pair) -> usize {
    pair.indices().1
}

/// Runs the chain-map preconditions, hypotheses (a) and (b), the restriction
/// square `[ε_i, A_j]∘H(φ_ij) = id`, and the conclusion `can∘μ = c∘(can ⊗ can)`.
pub fn prop1_harness(inst: &dyn Prop1Instance, opts: &HarnessOptions) -> Result<VerificationReport, DerivedError> {
    let mutated;
    let inst: &dyn Prop1Instance = match opts.mutation {
        Some(m) => {
            mutated = Mutated { inner: inst, m };
            &mutated
        }
        None => inst,
    };
    let mut rep = VerificationReport::new("proposition 1: can(mu(a,b)) = can(a) . can(b)", inst.name());
    let f = inst.field();
    let cap = opts.basis_cap;

    // φ is a chain map: φ(df)(ξ) = dφ(f)(ξ) - (-1)^n φ(f)(dξ)
    let mut phi_chain = None;
    'pc: for pair in Pair::ALL {
        let h = inst.hom(pair);
        let (i, j) = pair.indices();
        for n in h.lo()..h.hi() {
            for fb in basis(f, h.dim(n), cap) {
                let df = h.apply_d(n, &fb);
                for &m in &opts.xi_degrees {
                    if n + m + 1 > inst.hom(Pair::P13).hi() + 1 {
                        continue;
                    }
                    for xi in basis(f, inst.a_dim(i, m), cap) {
                        let lhs = inst.phi(pair, n + 1, &df, m, &xi);
                        let a = inst.a_d(j, n + m, &inst.phi(pair, n, &fb, m, &xi));
                        let b = inst.phi(pair, n, &fb, m + 1, &inst.a_d(i, m, &xi));
                        let rhs = vecops::sub(&a, &vecops::scale(&f.one().signed(n), &b));
                        rep.checks += 1;
                        if lhs != rhs {
                            phi_chain = Some(json!({"pair": format!("{pair:?}"), "n": n, "m": m}));
                            break 'pc;
                        }
                    }
                }
            }
        }
    }
    rep.hypothesis("phi_ij are chain maps", phi_chain.is_none(), phi_chain.map(|v| v.to_string()).unwrap_or_default());

    // μ is a chain map for the Koszul-signed tensor product
    let (h12, h13, h23) = (inst.hom(Pair::P12), inst.hom(Pair::P13), inst.hom(Pair::P23));
    let mut mu_chain = None;
    'mc: for q in 0..=h23.hi() {
        for p in 0..=h12.hi() {
            if p + q + 1 > h13.hi() {
                continue;
            }
            for a in basis(f, h23.dim(q), cap) {
                for b in basis(f, h12.dim(p), cap) {
                    let lhs = h13.apply_d(p + q, &inst.mu(q, &a, p, &b));
                    let t1 = inst.mu(q + 1, &h23.apply_d(q, &a), p, &b);
                    let t2 = inst.mu(q, &a, p + 1, &h12.apply_d(p, &b));
                    let mut rhs = t1;
                    vecops::axpy(&mut rhs, &f.one().signed(q), &t2);
                    rep.checks += 1;
                    if lhs != rhs {
                        mu_chain = Some(json!({"p": p, "q": q}));
                        break 'mc;
                    }
                }
            }
        }
    }
    rep.hypothesis("mu is a chain map", mu_chain.is_none(), mu_chain.map(|v| v.to_string()).unwrap_or_default());

    // (a) φ_ij(f) ε_i = f
    let mut a_fail = None;
    'a: for pair in Pair::ALL {
        let h = inst.hom(pair);
        let i = source_index(pair);
        for n in h.degrees() {
            for fb in basis(f, h.dim(n), cap) {
                for v in basis(f, inst.v_dim(i), None) {
                    rep.checks += 1;
                    if inst.phi(pair, n, &fb, 0, &inst.epsilon(i, &v)) != inst.eval(pair, n, &fb, &v) {
                        a_fail = Some(json!({"i": i, "j": target_index(pair), "n": n}));
                        break 'a;
                    }
                }
            }
        }
    }
    rep.hypothesis("(a) phi_ij(f) eps_i = f", a_fail.is_none(), a_fail.as_ref().map(|v| v.to_string()).unwrap_or_default());

    // restriction square on class representatives: φ_ij(x)∘ε_i and x agree as maps
    let mut claim_fail = None;
    'c: for pair in Pair::ALL {
        let h = inst.hom(pair);
        let i = source_index(pair);
        for n in h.lo()..h.hi() {
            let hs = cohomology(h, n);
            for x in hs.reps() {
                for v in basis(f, inst.v_dim(i), None) {
                    if inst.phi(pair, n, &x, 0, &inst.epsilon(i, &v)) != inst.eval(pair, n, &x, &v) {
                        claim_fail = Some(json!({"pair": format!("{pair:?}"), "n": n}));
                        break 'c;
                    }
                }
            }
        }
    }
    rep.hypothesis("restriction square [eps_i,A_j] H(phi_ij) = id", claim_fail.is_none(), claim_fail.map(|v| v.to_string()).unwrap_or_default());

    // degree pairs of the window
    let mut pairs = Vec::new();
    for q in 0..=opts.window {
        for p in 0..=opts.window - q {
            if p + q <= inst.max_degree() {
                pairs.push((p, q));
            }
        }
    }

    // (b) φ_13(μ(α,β)) = φ_23(α)∘φ_12(β) on class representatives and basis ξ
    let b_results: Vec<Option<serde_json::Value>> = crate::par::map(&pairs, |&(p, q)| {
        let (ha, hb) = (cohomology(h23, q), cohomology(h12, p));
        for (ia, al) in ha.reps().iter().enumerate() {
            for (ib, be) in hb.reps().iter().enumerate() {
                let m_ab = inst.mu(q, al, p, be);
                for &m in &opts.xi_degrees {
                    for xi in basis(f, inst.a_dim(1, m), cap) {
                        let lhs = inst.phi(Pair::P13, p + q, &m_ab, m, &xi);
                        let rhs = inst.phi(Pair::P23, q, al, m + p, &inst.phi(Pair::P12, p, be, m, &xi));
                        if lhs != rhs {
                            return Some(json!({"p": p, "q": q, "alpha": ia, "beta": ib, "xi_degree": m}));
                        }
                    }
                }
            }
        }
        None
    });
    let b_fail = b_results.into_iter().flatten().next();
    rep.hypothesis(
        "(b) phi_13 mu = composition (phi_23 x phi_12)",
        b_fail.is_none(),
        b_fail.as_ref().map(|v| v.to_string()).unwrap_or_default(),
    );

    // conclusion
    let results: Vec<Result<(usize, Option<serde_json::Value>), DerivedError>> = crate::par::map(&pairs, |&(p, q)| {
        let (ha, hb) = (cohomology(h23, q), cohomology(h12, p));
        let mut count = 0;
        let ca: Vec<Vec<Scalar>> = ha.reps().iter().map(|a| inst.can(Pair::P23, q, a)).collect::<Result<_, _>>()?;
        let cb: Vec<Vec<Scalar>> = hb.reps().iter().map(|b| inst.can(Pair::P12, p, b)).collect::<Result<_, _>>()?;
        for (ia, al) in ha.reps().iter().enumerate() {
            for (ib, be) in hb.reps().iter().enumerate() {
                let lhs = inst.can(Pair::P13, p + q, &inst.mu(q, al, p, be))?;
                let rhs = inst.ext_product(q, &ca[ia], p, &cb[ib])?;
                count += 1;
                if lhs != rhs {
                    let show = |v: &Vec<Scalar>| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
                    return Ok((count, Some(json!({"p": p, "q": q, "alpha": ia, "beta": ib, "can_mu": show(&lhs), "product": show(&rhs)}))));
                }
            }
        }
        Ok((count, None))
    });
    for (pq, r) in pairs.iter().zip(results) {
        let (count, bad) = r?;
        rep.degrees_checked.push(vec![pq.0, pq.1]);
        rep.checks += count;
        if let Some(b) = bad {
            rep.fail(b);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::Status;

    /// Everything one-dimensional in degree 0; `μ` is multiplication by `sign`.
    struct Scalars {
        c: CochainComplex,
        sign: i64,
    }

    impl Prop1Instance for Scalars {
        fn name(&self) -> String {
            "k over the trivial group".into()
        }
        fn field(&self) -> FieldSpec {
            FieldSpec::Rationals
        }
        fn hom(&self, _: Pair) -> &CochainComplex {
            &self.c
        }
        fn max_degree(&self) -> i64 {
            0
        }
        fn v_dim(&self, _: usize) -> usize {
            1
        }
        fn a_dim(&self, _: usize, m: i64) -> usize {
            usize::from(m == 0)
        }
        fn a_d(&self, _: usize, m: i64, _: &[Scalar]) -> Vec<Scalar> {
            vec![FieldSpec::Rationals.zero(); self.a_dim(0, m + 1)]
        }
        fn epsilon(&self, _: usize, v: &[Scalar]) -> Vec<Scalar> {
            v.to_vec()
        }
        fn eval(&self, _: Pair, _: i64, f: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
            vec![&f[0] * &v[0]]
        }
        fn phi(&self, _: Pair, n: i64, f: &[Scalar], m: i64, xi: &[Scalar]) -> Vec<Scalar> {
            if n + m != 0 || f.is_empty() || xi.is_empty() {
                return vec![FieldSpec::Rationals.zero(); self.a_dim(0, n + m)];
            }
            vec![&f[0] * &xi[0]]
        }
        fn mu(&self, q: i64, a: &[Scalar], p: i64, b: &[Scalar]) -> Vec<Scalar> {
            if p + q != 0 || a.is_empty() || b.is_empty() {
                return vec![FieldSpec::Rationals.zero(); self.c.dim(p + q)];
            }
            vec![(&a[0] * &b[0]).signed(self.sign)]
        }
        fn can(&self, _: Pair, _: i64, f: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
            Ok(f.to_vec())
        }
        fn ext_product(&self, _: i64, x: &[Scalar], _: i64, y: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
            Ok(vec![&x[0] * &y[0]])
        }
    }

    #[test]
    fn one_dimensional_instance_commutes() {
        let inst = Scalars { c: CochainComplex::concentrated(FieldSpec::Rationals, 0, 1), sign: 0 };
        let r = prop1_harness(&inst, &HarnessOptions::default()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
        assert_eq!(r.degrees_checked, vec![vec![0, 0]]);
    }

    #[test]
    fn flipped_sign_is_caught() {
        let inst = Scalars { c: CochainComplex::concentrated(FieldSpec::Rationals, 0, 1), sign: 1 };
        let r = prop1_harness(&inst, &HarnessOptions::default()).unwrap();
        assert_ne!(r.status, Status::Pass);
    }
}
