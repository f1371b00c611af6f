use std::sync::Arc;

use serde_json::json;

use crate::complexes::{cohomology, CochainComplex};
use crate::derived::{
    can_class, free_resolution, merge_as_obligations, prop1_harness, strong_prop2_check, yoneda, DerivedError, ExtClass, ExtSpace, HarnessOptions,
    HomIntoResolution, Pair, Prop1Instance, ProjectiveResolution, RightResolution, VerificationReport,
};
use crate::exactla::{vecops, FieldSpec, Scalar};

use super::cech::{cech_cup, phi_cech};
use super::godement::{section_cup, section_times_module, Godement, GodementSections};
use super::{incidence_algebra, CechError, OpenCover, SheafOnPoset};

/// The composition instance with `V_1 = V_2 = C` (constant sheaf), `V_3 = S`,
/// `A_1 = A_2 = A = A(C)`, `A_3 = B = A(S)`, `φ` the stalkwise cup with a global
/// section and `μ: ⟨C,B⟩ ⊗ ⟨C,A⟩ → ⟨C,B⟩` the cup of global sections.
pub struct GodementInstance {
    pub a: Godement,
    pub b: Godement,
    pub p: Arc<ProjectiveResolution>,
    pub ext_cc: ExtSpace,
    pub ext_cs: ExtSpace,
    pub window: usize,
}

impl GodementInstance {
    /// Godement resolutions up to `window + 1`, `P → C` of length `window + 2`.
    pub fn new(s: &SheafOnPoset, window: usize) -> Result<Self, CechError> {
        let (alg, pairs) = incidence_algebra(s.poset(), s.field());
        let c = SheafOnPoset::constant(s.poset().clone(), s.field());
        let a = Godement::new(&c, &alg, &pairs, window + 1)?;
        let b = Godement::new(s, &alg, &pairs, window + 1)?;
        let p = Arc::new(free_resolution(a.resolution.object(), window + 2)?);
        let ext_cc = ExtSpace::new(&p, a.resolution.object());
        let ext_cs = ExtSpace::new(&p, b.resolution.object());
        Ok(GodementInstance { a, b, p, ext_cc, ext_cs, window })
    }

    fn res(&self, i: usize) -> &Godement {
        if i == 3 {
            &self.b
        } else {
            &self.a
        }
    }

    fn target(&self, pair: Pair) -> &Godement {
        self.res(pair.indices().1)
    }

    /// Strong Proposition 2 for `A` and `B`, with `Ext^p(C, -)` computed directly.
    pub fn prop2_reports(&self) -> Result<(VerificationReport, VerificationReport), CechError> {
        let ra = strong_prop2_check(&self.p, self.a.resolution.as_ref(), &GodementSections { godement: &self.a }, self.window, None)?;
        let rb = strong_prop2_check(&self.p, self.b.resolution.as_ref(), &GodementSections { godement: &self.b }, self.window, None)?;
        Ok((ra, rb))
    }

    fn class(space: &ExtSpace, n: usize, coords: &[Scalar]) -> Result<ExtClass, DerivedError> {
        let reps = &space.space(n)?.cocycle_reps;
        Ok(space.from_cocycle(n, reps.mul_vec(coords)))
    }
}

impl Prop1Instance for GodementInstance {
    fn name(&self) -> String {
        let s = &self.b.sheaf;
        format!("Godement: |X| = {}, total stalk dim {}, over {}", s.poset().size(), s.stalks().iter().sum::<usize>(), s.field())
    }

    fn field(&self) -> FieldSpec {
        self.b.field()
    }

    fn hom(&self, pair: Pair) -> &CochainComplex {
        self.target(pair).gamma()
    }

    fn max_degree(&self) -> i64 {
        self.window as i64
    }

    fn v_dim(&self, i: usize) -> usize {
        self.res(i).resolution.object().dim()
    }

    fn a_dim(&self, i: usize, m: i64) -> usize {
        self.res(i).terms[m as usize].dim
    }

    fn a_d(&self, i: usize, m: i64, x: &[Scalar]) -> Vec<Scalar> {
        self.res(i).module_d(m as usize, x)
    }

    fn epsilon(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.res(i).resolution.augment(v)
    }

    fn eval(&self, pair: Pair, n: i64, f: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let g = self.target(pair);
        let imgs = GodementSections { godement: g }.as_map(n as usize, f);
        let mut out = vecops::zeros(self.field(), g.terms[n as usize].dim);
        for (c, img) in v.iter().zip(&imgs) {
            vecops::axpy(&mut out, c, img);
        }
        out
    }

    fn phi(&self, pair: Pair, n: i64, f: &[Scalar], m: i64, xi: &[Scalar]) -> Vec<Scalar> {
        section_times_module(self.target(pair), &self.a, n as usize, f, m as usize, xi)
    }

    fn mu(&self, q: i64, alpha: &[Scalar], p: i64, beta: &[Scalar]) -> Vec<Scalar> {
        section_cup(&self.b, &self.a, q as usize, alpha, p as usize, beta)
    }

    fn can(&self, pair: Pair, n: i64, f: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        let g = self.target(pair);
        let ext = if pair == Pair::P12 { &self.ext_cc } else { &self.ext_cs };
        can_class(&GodementSections { godement: g }, g.resolution.as_ref(), ext, n as usize, f)
    }

    fn ext_product(&self, q: i64, x: &[Scalar], p: i64, y: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        let e2 = Self::class(&self.ext_cs, q as usize, x)?;
        let e1 = Self::class(&self.ext_cc, p as usize, y)?;
        let prod = yoneda(&e2, &e1)?;
        self.ext_cs.classify((p + q) as usize, &prod.cocycle)
    }
}

pub fn default_options(space_size: usize, window: usize) -> HarnessOptions {
    let cap = if space_size <= 7 { None } else { Some(6) };
    HarnessOptions { window: window as i64, xi_degrees: vec![0, 1], basis_cap: cap, mutation: None }
}

/// `Φ_S(α ⌣ β) = Φ_S(α) ∪ Φ_C(β)` for classes with `p + q ≤ window`, through the
/// double complex of the cover, then the composition harness on `(C, C, S)`.
pub fn cech_multiplicative_check(s: &SheafOnPoset, cover: &OpenCover, window: usize) -> Result<VerificationReport, CechError> {
    cech_multiplicative_check_with(s, cover, &default_options(s.poset().size(), window))
}

pub fn cech_multiplicative_check_with(s: &SheafOnPoset, cover: &OpenCover, opts: &HarnessOptions) -> Result<VerificationReport, CechError> {
    let window = opts.window.max(0) as usize;
    let inst = GodementInstance::new(s, window)?;
    let mut rep = VerificationReport::new("multiplicative Cech: Phi_S(a u b) = Phi_S(a) . Phi_C(b)", inst.name());
    let f = s.field();
    let ps = phi_cech(&inst.b, cover, window)?;
    let pc = phi_cech(&inst.a, cover, window)?;
    let bij = |m: &crate::exactla::Matrix| m.rows() == m.cols() && m.rank() == m.rows();
    let acyclic = ps.matrices.iter().chain(&pc.matrices).all(bij);
    rep.hypothesis("the cover computes sheaf cohomology (Phi bijective)", acyclic, format!("degrees 0..={window}"));

    let hcs: Vec<_> = (0..=window).map(|n| cohomology(&ps.cech.complex, n as i64)).collect();
    let hcc: Vec<_> = (0..=window).map(|n| cohomology(&pc.cech.complex, n as i64)).collect();
    let hgb: Vec<_> = (0..=window).map(|n| cohomology(inst.b.gamma(), n as i64)).collect();
    let hga: Vec<_> = (0..=window).map(|n| cohomology(inst.a.gamma(), n as i64)).collect();
    'outer: for p in 0..=window {
        for q in 0..=window - p {
            rep.degrees_checked.push(vec![p as i64, q as i64]);
            for i in 0..hcs[p].dim {
                for j in 0..hcc[q].dim {
                    let cup = cech_cup(&ps.cech, &pc.cech, &hcs[p].rep(i), p, &hcc[q].rep(j), q)?;
                    let lhs = if cup.is_empty() { vecops::zeros(f, hgb[p + q].dim) } else { ps.apply(p + q, &hcs[p + q].classify(&cup)) };
                    let a = hgb[p].cocycle_reps.mul_vec(&ps.apply(p, &vecops::unit(f, hcs[p].dim, i)));
                    let b = hga[q].cocycle_reps.mul_vec(&pc.apply(q, &vecops::unit(f, hcc[q].dim, j)));
                    let rhs = hgb[p + q].classify(&section_cup(&inst.b, &inst.a, p, &a, q, &b));
                    rep.checks += 1;
                    if lhs != rhs {
                        rep.fail(json!({"stage": "cech", "p": p, "q": q, "alpha": i, "beta": j}));
                        break 'outer;
                    }
                }
            }
        }
    }

    let (ra, rb) = inst.prop2_reports()?;
    let h = prop1_harness(&inst, opts)?;
    for r in [&ra, &rb] {
        for hyp in &r.hypotheses {
            rep.hypothesis(format!("{}: {}", r.theorem, hyp.name), hyp.holds, hyp.detail.clone());
        }
        rep.checks += r.checks;
        rep.warnings.extend(r.warnings.iter().cloned());
        if let Some(c) = &r.counterexample {
            rep.fail(json!({"stage": r.theorem, "counterexample": c}));
        }
    }
    merge_as_obligations(&mut rep, &h);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cechposet::{corpus, face_poset, FinPoset};
    use crate::derived::Status;
    use std::time::Instant;

    fn space(facets: &[Vec<usize>]) -> Arc<FinPoset> {
        Arc::new(face_poset(facets).unwrap())
    }

    #[test]
    fn circle_over_f2() {
        let p = space(&corpus::circle());
        let f = FieldSpec::PrimeField(2);
        let r = cech_multiplicative_check(&SheafOnPoset::constant(p.clone(), f), &OpenCover::stars(&p), 2).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    }

    #[test]
    fn sphere_over_q() {
        let t = Instant::now();
        let p = space(&corpus::sphere());
        let q = FieldSpec::Rationals;
        let r = cech_multiplicative_check(&SheafOnPoset::constant(p.clone(), q), &OpenCover::stars(&p), 2).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
        eprintln!("sphere: {:?}", t.elapsed());
    }

    #[test]
    fn torus_over_q_window_3() {
        let p = space(&corpus::torus());
        let q = FieldSpec::Rationals;
        let c = SheafOnPoset::constant(p.clone(), q);
        let cover = OpenCover::stars(&p);
        let r = cech_multiplicative_check(&c, &cover, 3).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
        let cx = crate::cechposet::cech_complex(&c, &cover, 3).unwrap();
        let h: Vec<usize> = (0..=2).map(|n| cohomology(&cx.complex, n).dim).collect();
        assert_eq!(h, vec![1, 2, 1]);
    }

    #[test]
    fn torus_pairing_is_alternating_and_nondegenerate() {
        let p = space(&corpus::torus());
        let q = FieldSpec::Rationals;
        let (alg, pairs) = incidence_algebra(&p, q);
        let a = Godement::new(&SheafOnPoset::constant(p.clone(), q), &alg, &pairs, 3).unwrap();
        let (h1, h2) = (cohomology(a.gamma(), 1), cohomology(a.gamma(), 2));
        assert_eq!((h1.dim, h2.dim), (2, 1));
        let form = |i: usize, j: usize| h2.classify(&section_cup(&a, &a, 1, &h1.rep(i), 1, &h1.rep(j)))[0].clone();
        assert!(form(0, 0).is_zero() && form(1, 1).is_zero());
        assert!(!form(0, 1).is_zero());
        assert_eq!(form(0, 1), -form(1, 0));
    }

    /// Negates `μ` in bidegree `(1, 1)`.
    struct Flipped(GodementInstance);

    impl Prop1Instance for Flipped {
        fn name(&self) -> String {
            self.0.name()
        }
        fn field(&self) -> FieldSpec {
            self.0.field()
        }
        fn hom(&self, pair: Pair) -> &CochainComplex {
            self.0.hom(pair)
        }
        fn max_degree(&self) -> i64 {
            self.0.max_degree()
        }
        fn v_dim(&self, i: usize) -> usize {
            self.0.v_dim(i)
        }
        fn a_dim(&self, i: usize, m: i64) -> usize {
            self.0.a_dim(i, m)
        }
        fn a_d(&self, i: usize, m: i64, x: &[Scalar]) -> Vec<Scalar> {
            self.0.a_d(i, m, x)
        }
        fn epsilon(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
            self.0.epsilon(i, v)
        }
        fn eval(&self, pair: Pair, n: i64, f: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
            self.0.eval(pair, n, f, v)
        }
        fn phi(&self, pair: Pair, n: i64, f: &[Scalar], m: i64, xi: &[Scalar]) -> Vec<Scalar> {
            self.0.phi(pair, n, f, m, xi)
        }
        fn mu(&self, q: i64, alpha: &[Scalar], p: i64, beta: &[Scalar]) -> Vec<Scalar> {
            let m = self.0.mu(q, alpha, p, beta);
            if (q, p) == (1, 1) {
                vecops::neg(&m)
            } else {
                m
            }
        }
        fn can(&self, pair: Pair, n: i64, f: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
            self.0.can(pair, n, f)
        }
        fn ext_product(&self, q: i64, x: &[Scalar], p: i64, y: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
            self.0.ext_product(q, x, p, y)
        }
    }

    #[test]
    fn corrupted_mu_is_caught() {
        let p = space(&corpus::torus());
        let inst = Flipped(GodementInstance::new(&SheafOnPoset::constant(p, FieldSpec::Rationals), 2).unwrap());
        let r = prop1_harness(&inst, &default_options(42, 2)).unwrap();
        assert_ne!(r.status, Status::Pass);
    }

    #[test]
    fn mutations_are_refuted() {
        use crate::derived::Mutation;
        let p = space(&corpus::circle());
        let s = SheafOnPoset::constant(p.clone(), FieldSpec::Rationals);
        let cover = OpenCover::stars(&p);
        for m in [Mutation::FlipCupSign, Mutation::BreakPhi, Mutation::FlipProductSign] {
            let opts = HarnessOptions { mutation: Some(m), ..default_options(p.size(), 2) };
            let r = cech_multiplicative_check_with(&s, &cover, &opts).unwrap();
            assert_eq!(r.status, Status::Fail, "{m:?}: {}", r.to_json());
        }
    }

    #[test]
    fn ext_agrees_with_sections() {
        let q = FieldSpec::Rationals;
        for facets in [corpus::circle(), corpus::sphere()] {
            let p = space(&facets);
            for s in [SheafOnPoset::constant(p.clone(), q), SheafOnPoset::skyscraper(p.clone(), q, p.size() - 1)] {
                let inst = GodementInstance::new(&s, 2).unwrap();
                for n in 0..=2 {
                    assert_eq!(inst.ext_cs.dim(n).unwrap(), cohomology(inst.b.gamma(), n as i64).dim, "n = {n}");
                }
            }
        }
    }

    #[test]
    fn skyscraper_on_the_circle() {
        let p = space(&corpus::circle());
        let q = FieldSpec::Rationals;
        let r = cech_multiplicative_check(&SheafOnPoset::skyscraper(p.clone(), q, 4), &OpenCover::stars(&p), 2).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    }
}
