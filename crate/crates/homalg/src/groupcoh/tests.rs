use std::sync::Arc;

use super::*;
use crate::derived::{
    free_resolution, lemma_check, prop1_harness, strong_prop2_check, DerivedError, HarnessOptions, Pair, Prop1Instance,
    RightResolution, Status,
};
use crate::exactla::{vecops, FieldSpec, Matrix, Scalar};

fn trivial(n: usize, f: FieldSpec) -> GModule {
    GModule::trivial(Arc::new(FinGroup::cyclic(n)), f, 1)
}

#[test]
fn phi_is_bijective_over_z2() {
    let s = EmSetup::new(&trivial(2, FieldSpec::PrimeField(2)), 4).unwrap();
    for n in 0..=4 {
        let m = s.phi(n).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (1, 1, 1), "degree {n}");
    }
    assert_eq!(s.prop2_report().unwrap().status, Status::Pass);
}

#[test]
fn phi_in_degree_zero_on_fixed_vectors() {
    let g = Arc::new(FinGroup::cyclic(3));
    let reg = GModule::regular(g, FieldSpec::PrimeField(3));
    let m = phi(&reg, 0).unwrap();
    assert_eq!(m, Matrix::identity(FieldSpec::PrimeField(3), reg.fixed_space().cols()));
    // regular module is coinduced: no higher cohomology
    for n in 1..=2 {
        assert_eq!(phi(&reg, n).unwrap().rows(), 0);
    }
}

#[test]
fn phi_bijective_for_s3_sign_module() {
    let w = sign_module_f2(Arc::new(FinGroup::symmetric3())).unwrap();
    let s = EmSetup::new(&w, 2).unwrap();
    for n in 0..=2 {
        let m = s.phi(n).unwrap();
        assert_eq!(m.rows(), m.cols());
        assert_eq!(m.rank(), m.rows());
        assert_eq!(m.rows(), em_cohomology(&w, n).dim);
    }
}

#[test]
fn phi_is_natural() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let f3 = FieldSpec::PrimeField(3);
    let g = Arc::new(FinGroup::cyclic(3));
    let reg = GModule::regular(g.clone(), f3);
    let k = GModule::trivial(g.clone(), f3, 1);
    // Hom_G(R, k) is spanned by the augmentation; Hom_G(k, R) by the norm element
    for _ in 0..4 {
        let c = rng.gen_range(1..3);
        let aug = Matrix::from_i64_rows(f3, &[vec![c, c, c]]);
        let norm = Matrix::from_i64_rows(f3, &[vec![c], vec![c], vec![c]]);
        for n in 0..=2 {
            let (a, b) = phi_naturality(&reg, &k, &aug, n).unwrap();
            assert_eq!(a, b);
            let (a, b) = phi_naturality(&k, &reg, &norm, n).unwrap();
            assert_eq!(a, b);
        }
    }
    let bad = Matrix::from_i64_rows(f3, &[vec![1, 0, 0]]);
    assert!(phi_naturality(&reg, &k, &bad, 1).is_err());
}

#[test]
fn em_check_z2_f2() {
    let rep = em_multiplicative_check(&trivial(2, FieldSpec::PrimeField(2)), 4).unwrap();
    assert_eq!(rep.status, Status::Pass, "{}", rep.to_json());
    assert!(rep.checks > 0);
}

#[test]
fn em_check_z3_f3() {
    let rep = em_multiplicative_check(&trivial(3, FieldSpec::PrimeField(3)), 4).unwrap();
    assert_eq!(rep.status, Status::Pass, "{}", rep.to_json());
}

#[test]
fn em_check_s3_sign_module_window3() {
    let w = sign_module_f2(Arc::new(FinGroup::symmetric3())).unwrap();
    let rep = em_multiplicative_check(&w, 3).unwrap();
    assert_eq!(rep.status, Status::Pass, "{}", rep.to_json());
}

/// The EM instance with one sign of `μ` flipped in odd total degree.
struct Flipped(EmInstance);

impl Prop1Instance for Flipped {
    fn name(&self) -> String {
        "flipped".into()
    }
    fn field(&self) -> FieldSpec {
        self.0.field()
    }
    fn hom(&self, pair: Pair) -> &crate::complexes::CochainComplex {
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
    fn mu(&self, q: i64, a: &[Scalar], p: i64, b: &[Scalar]) -> Vec<Scalar> {
        let v = self.0.mu(q, a, p, b);
        if (p, q) == (1, 1) {
            vecops::neg(&v)
        } else {
            v
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
    let inst = Flipped(EmInstance { setup: EmSetup::new(&trivial(3, FieldSpec::PrimeField(3)), 2).unwrap() });
    let rep = prop1_harness(&inst, &HarnessOptions::default()).unwrap();
    assert_ne!(rep.status, Status::Pass);
}

#[test]
fn lemma_on_dense_standard_resolutions() {
    for (n_grp, p, degrees) in [(3usize, 3u32, vec![1usize, 2]), (2, 2, vec![1, 2, 3, 4])] {
        let k = trivial(n_grp, FieldSpec::PrimeField(p));
        let alg = k.group_algebra();
        let top = degrees.iter().max().unwrap() + 1;
        let s = StandardResolution::new(&k, &alg, top);
        let dense = Arc::new(s.to_dense().unwrap());
        let pr = Arc::new(free_resolution(dense.object(), top + 1).unwrap());
        for n in degrees {
            let rep = lemma_check(&pr, &dense, n).unwrap();
            assert_eq!(rep.status, Status::Pass, "|G| = {n_grp}, n = {n}: {}", rep.to_json());
        }
    }
}

#[test]
fn prop2_direct_on_dense_standard_resolution() {
    let k = trivial(2, FieldSpec::PrimeField(2));
    let alg = k.group_algebra();
    let s = Arc::new(StandardResolution::new(&k, &alg, 5));
    let dense: Arc<dyn RightResolution> = Arc::new(s.to_dense().unwrap());
    let pr = Arc::new(free_resolution(dense.object(), 6).unwrap());
    let hom = crate::derived::GenericHomInto::new(&pr, &dense).unwrap();
    let rep = strong_prop2_check(&pr, dense.as_ref(), &hom, 4, None).unwrap();
    assert_eq!(rep.status, Status::Pass, "{}", rep.to_json());
}

#[test]
fn mutations_are_refuted() {
    use crate::derived::Mutation;
    use crate::groupcoh::{default_options, em_multiplicative_check_with};
    let v = trivial(3, FieldSpec::PrimeField(3));
    for m in [Mutation::FlipCupSign, Mutation::BreakPhi, Mutation::FlipProductSign] {
        let opts = HarnessOptions { mutation: Some(m), ..default_options(3, 2) };
        let rep = em_multiplicative_check_with(&v, &opts).unwrap();
        assert_eq!(rep.status, Status::Fail, "{m:?}: {}", rep.to_json());
    }
    let rep = em_multiplicative_check_with(&v, &default_options(3, 2)).unwrap();
    assert_eq!(rep.status, Status::Pass, "{}", rep.to_json());
}
