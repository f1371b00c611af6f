use std::sync::Arc;

use crate::complexes::CochainComplex;
use crate::derived::{
    can_class, can_matrix, free_resolution, merge_as_obligations, prop1_harness, strong_prop2_check, yoneda, DerivedError, ExtClass, ExtSpace,
    HarnessOptions, HomIntoResolution, ModuleOverAlgebra, Pair, Prop1Instance, ProjectiveResolution, RightResolution,
    VerificationReport,
};
use crate::exactla::{FieldSpec, Matrix, Scalar};

use super::cup::{em_cup, homogeneous_cup};
use super::invariants::InvariantCochains;
use super::standard::{coinduced_certificate, coboundary, StandardResolution};
use super::{GModule, GroupError};

/// `P → k`, standard resolutions of `k` and `V`, their invariants and the Ext spaces.
pub struct EmSetup {
    pub coeff: GModule,
    pub unit: GModule,
    pub p: Arc<ProjectiveResolution>,
    pub res_k: Arc<StandardResolution>,
    pub res_v: Arc<StandardResolution>,
    pub inv_k: InvariantCochains,
    pub inv_v: InvariantCochains,
    pub ext_kk: ExtSpace,
    pub ext_kv: ExtSpace,
    pub window: usize,
}

impl EmSetup {
    /// Standard resolutions up to `window + 1`, `P` of length `window + 2`.
    pub fn new(v: &GModule, window: usize) -> Result<Self, GroupError> {
        let k = GModule::trivial(v.group().clone(), v.field(), 1);
        let alg = v.group_algebra();
        let k_mod = Arc::new(k.as_module(&alg));
        let p = Arc::new(free_resolution(&k_mod, window + 2)?);
        let res_k = Arc::new(StandardResolution::new(&k, &alg, window + 1));
        let res_v = Arc::new(StandardResolution::new(v, &alg, window + 1));
        let inv_k = InvariantCochains::new(&res_k);
        let inv_v = InvariantCochains::new(&res_v);
        let ext_kk = ExtSpace::new(&p, p.object());
        let ext_kv = ExtSpace::new(&p, res_v.object());
        Ok(EmSetup { coeff: v.clone(), unit: k, p, res_k, res_v, inv_k, inv_v, ext_kk, ext_kv, window })
    }

    /// Strong Proposition 2 for `I(V)`, with the coinduced-orbit certificate.
    pub fn prop2_report(&self) -> Result<VerificationReport, GroupError> {
        let alg = self.res_v.object().algebra().clone();
        let cert = coinduced_certificate(&self.p, &self.coeff, &alg, self.window, self.res_v.top())?;
        Ok(strong_prop2_check(&self.p, self.res_v.as_ref(), &self.inv_v, self.window, Some(&cert))?)
    }

    /// `Φ_V` on `H^n`: columns are the classes of the cohomology basis in `Ext^n(k, V)`.
    pub fn phi(&self, n: usize) -> Result<Matrix, GroupError> {
        let alg = self.res_v.object().algebra().clone();
        let cert = coinduced_certificate(&self.p, &self.coeff, &alg, self.window, self.res_v.top())?;
        if let Some(&(p, q, _)) = cert.iter().find(|t| t.2 != 0) {
            return Err(DerivedError::AcyclicityHypothesisFails { p, q }.into());
        }
        Ok(can_matrix(&self.inv_v, self.res_v.as_ref(), &self.ext_kv, n)?)
    }

    fn class(space: &ExtSpace, n: usize, coords: &[Scalar]) -> Result<ExtClass, DerivedError> {
        let reps = &space.space(n)?.cocycle_reps;
        Ok(space.from_cocycle(n, reps.mul_vec(coords)))
    }
}

/// `Φ_V: H^n_EM(G, V) → Ext^n(k, V)`, with the acyclicity hypothesis checked first.
pub fn phi(v: &GModule, n: usize) -> Result<Matrix, GroupError> {
    EmSetup::new(v, n.max(1))?.phi(n)
}

/// The composition instance with `V_1 = V_2 = k`, `V_3 = V`, `A_i = I(V_i)`,
/// `φ(α)(ξ) = α∪ξ` and `μ(α, β) = α∪β` (the `V`-valued factor on the left).
pub struct EmInstance {
    pub setup: EmSetup,
}

impl EmInstance {
    fn inv(&self, pair: Pair) -> &InvariantCochains {
        match pair {
            Pair::P12 => &self.setup.inv_k,
            Pair::P13 | Pair::P23 => &self.setup.inv_v,
        }
    }

    fn dimv(&self, i: usize) -> usize {
        if i == 3 {
            self.setup.coeff.dim()
        } else {
            1
        }
    }

    fn m(&self) -> usize {
        self.setup.coeff.group().order()
    }
}

impl Prop1Instance for EmInstance {
    fn name(&self) -> String {
        format!("EM: |G| = {}, dim V = {}, over {}", self.m(), self.setup.coeff.dim(), self.setup.coeff.field())
    }

    fn field(&self) -> FieldSpec {
        self.setup.coeff.field()
    }

    fn hom(&self, pair: Pair) -> &CochainComplex {
        self.inv(pair).complex()
    }

    fn max_degree(&self) -> i64 {
        self.setup.window as i64
    }

    fn v_dim(&self, i: usize) -> usize {
        self.dimv(i)
    }

    fn a_dim(&self, i: usize, m: i64) -> usize {
        self.m().pow(m as u32 + 1) * self.dimv(i)
    }

    fn a_d(&self, i: usize, m: i64, x: &[Scalar]) -> Vec<Scalar> {
        coboundary(self.field(), self.m(), self.dimv(i), m as usize, x)
    }

    fn epsilon(&self, _: usize, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.m()).flat_map(|_| v.iter().cloned()).collect()
    }

    fn eval(&self, pair: Pair, n: i64, f: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let e = self.inv(pair).embed(n as usize, f);
        e.iter().map(|x| x * &v[0]).collect()
    }

    fn phi(&self, pair: Pair, n: i64, f: &[Scalar], m: i64, xi: &[Scalar]) -> Vec<Scalar> {
        let j = pair.indices().1;
        let e = self.inv(pair).embed(n as usize, f);
        homogeneous_cup(self.field(), self.m(), self.dimv(j), &e, n as usize, xi, m as usize)
    }

    fn mu(&self, q: i64, alpha: &[Scalar], p: i64, beta: &[Scalar]) -> Vec<Scalar> {
        let g = self.setup.coeff.group();
        em_cup(g, self.field(), self.dimv(3), alpha, q as usize, beta, p as usize).expect("coefficient shapes")
    }

    fn can(&self, pair: Pair, n: i64, f: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        let s = &self.setup;
        match pair {
            Pair::P12 => can_class(&s.inv_k, s.res_k.as_ref(), &s.ext_kk, n as usize, f),
            Pair::P13 | Pair::P23 => can_class(&s.inv_v, s.res_v.as_ref(), &s.ext_kv, n as usize, f),
        }
    }

    fn ext_product(&self, q: i64, x: &[Scalar], p: i64, y: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        let s = &self.setup;
        let e2 = EmSetup::class(&s.ext_kv, q as usize, x)?;
        let e1 = EmSetup::class(&s.ext_kk, p as usize, y)?;
        let prod = yoneda(&e2, &e1)?;
        s.ext_kv.classify((p + q) as usize, &prod.cocycle)
    }
}

/// Default harness options: all basis vectors for groups of order ≤ 3, a
/// capped basis and `ξ` in degree 0 only above that.
pub fn default_options(order: usize, window: usize) -> HarnessOptions {
    if order <= 3 {
        HarnessOptions { window: window as i64, xi_degrees: vec![0, 1], basis_cap: None, mutation: None }
    } else {
        HarnessOptions { window: window as i64, xi_degrees: vec![0], basis_cap: Some(6), mutation: None }
    }
}

pub fn em_multiplicative_check(v: &GModule, window: usize) -> Result<VerificationReport, GroupError> {
    em_multiplicative_check_with(v, &default_options(v.group().order(), window))
}

pub fn em_multiplicative_check_with(v: &GModule, opts: &HarnessOptions) -> Result<VerificationReport, GroupError> {
    let inst = EmInstance { setup: EmSetup::new(v, opts.window.max(0) as usize)? };
    let mut rep = VerificationReport::new("multiplicative Eilenberg-MacLane: Phi_V(a u b) = Phi_V(a) . Phi_k(b)", inst.name());
    let p2 = inst.setup.prop2_report()?;
    for hyp in &p2.hypotheses {
        rep.hypothesis(format!("{}: {}", p2.theorem, hyp.name), hyp.holds, hyp.detail.clone());
    }
    rep.checks += p2.checks;
    if let Some(c) = &p2.counterexample {
        rep.fail(serde_json::json!({"stage": p2.theorem, "counterexample": c}));
    }
    let h = prop1_harness(&inst, opts)?;
    merge_as_obligations(&mut rep, &h);
    Ok(rep)
}

/// `H^n(u)` and `Ext^n(k, u)` around `Φ` for a module map `u: V → V'`; returns both composites.
pub fn phi_naturality(v: &GModule, v2: &GModule, u: &Matrix, n: usize) -> Result<(Matrix, Matrix), GroupError> {
    let s1 = EmSetup::new(v, n.max(1))?;
    let s2 = EmSetup::new(v2, n.max(1))?;
    let alg = s1.res_v.object().algebra().clone();
    let m2: Arc<ModuleOverAlgebra> = Arc::new(v2.as_module(&alg));
    if !s1.res_v.object().is_module_map(u, &m2) {
        return Err(GroupError::BadModule("u is not G-equivariant".into()));
    }
    let phi1 = s1.phi(n)?;
    // H^n(u): u applied coefficientwise on inhomogeneous cochains
    let h1 = crate::complexes::cohomology(s1.inv_v.complex(), n as i64);
    let h2 = crate::complexes::cohomology(s2.inv_v.complex(), n as i64);
    let dv = v.dim();
    let cols: Vec<Vec<Scalar>> = h1
        .reps()
        .iter()
        .map(|r| {
            let pushed: Vec<Scalar> = r.chunks(dv).flat_map(|c| u.mul_vec(c)).collect();
            h2.classify(&pushed)
        })
        .collect();
    let hu = Matrix::from_cols(v.field(), h2.dim, &cols);
    // both Ext spaces on the same resolution of k
    let e2 = ExtSpace::new(&s1.p, &m2);
    let eu = crate::derived::ext::ext_map_matrix(&s1.ext_kv, &e2, n, u)?;
    let back = can_matrix(&s2.inv_v, s2.res_v.as_ref(), &e2, n)?;
    Ok((back.mul(&hu), eu.mul(&phi1)))
}
