//! `can(g∘f) = can(g∘ε) · can(f)` over incidence algebras of random tree posets,
//! with `A` the chain resolution of a random sheaf.

use std::collections::HashMap;
use std::sync::Arc;

use homalg::cechposet::{incidence_algebra, FinPoset, Godement, SheafOnPoset};
use homalg::complexes::{cohomology, compose, GradedMap};
use homalg::derived::{
    can_zigzag, free_resolution, module_hom_complex, yoneda, ExtSpace, HomLayout, ModuleComplex, RightResolution,
};
use homalg::exactla::{FieldSpec, Matrix, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const F3: FieldSpec = FieldSpec::PrimeField(3);

/// Each new point sits above at most one earlier point, so composites are unique.
fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Arc<FinPoset> {
    let mut parent: Vec<Option<usize>> = vec![None];
    for i in 1..n {
        parent.push(if rng.gen_bool(0.75) { Some(rng.gen_range(0..i)) } else { None });
    }
    let mut leq = vec![vec![false; n]; n];
    for y in 0..n {
        let mut z = Some(y);
        while let Some(x) = z {
            leq[x][y] = true;
            z = parent[x];
        }
    }
    Arc::new(FinPoset::new(leq).unwrap())
}

fn random_sheaf(rng: &mut ChaCha8Rng, p: &Arc<FinPoset>) -> SheafOnPoset {
    let n = p.size();
    let stalks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let mut cov = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            if p.covers(x, y) {
                let e: Vec<Scalar> = (0..stalks[x] * stalks[y]).map(|_| F3.from_i64(rng.gen_range(0..3))).collect();
                cov.insert((x, y), Matrix::from_entries(F3, stalks[y], stalks[x], &e));
            }
        }
    }
    SheafOnPoset::new(p.clone(), F3, stalks, &cov).unwrap()
}

#[test]
fn composition_square_on_random_incidence_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for trial in 0..100 {
        let n = rng.gen_range(2..=4);
        let p = random_tree(&mut rng, n);
        let (alg, pairs) = incidence_algebra(&p, F3);
        let v_sheaf = random_sheaf(&mut rng, &p);
        let w_sheaf = random_sheaf(&mut rng, &p);
        let v = Arc::new(v_sheaf.as_module(&alg, &pairs));
        if v.dim() == 0 {
            continue;
        }
        let a = Godement::new(&w_sheaf, &alg, &pairs, 3).unwrap();
        let res = a.resolution.clone();
        let w = res.object().clone();
        let pr = Arc::new(free_resolution(&v, 3).unwrap());
        let ext_vw = ExtSpace::new(&pr, &w);
        let pw = Arc::new(free_resolution(&w, 3).unwrap());
        let ext_ww = ExtSpace::new(&pw, &w);
        let vc = ModuleComplex::concentrated(v.clone());
        let wc = ModuleComplex::concentrated(w.clone());
        let ac = ModuleComplex::of_resolution(&res);
        let hva = module_hom_complex(&vc, &ac);
        let haa = module_hom_complex(&ac, &ac);
        let eps = GradedMap::from_fn(Arc::new(wc.complex()), Arc::new(ac.complex()), 0, |d| {
            if d == 0 {
                res.augmentation().clone()
            } else {
                Matrix::zeros(F3, 0, 0)
            }
        });
        let can_of = |pr: &Arc<homalg::derived::ProjectiveResolution>, ext: &ExtSpace, g: &GradedMap, k: usize| -> Vec<Scalar> {
            let imgs = can_zigzag(pr, res.as_ref(), k, &g.component(0).columns()).unwrap();
            ext.classify(k, &HomLayout::new(pr.term(k), &w).from_images(&imgs)).unwrap()
        };
        for (pp, q) in [(0i64, 1i64), (1, 0), (1, 1), (0, 2), (2, 0)] {
            let hf = cohomology(&hva.complex, pp);
            let hg = cohomology(&haa.complex, q);
            for fi in hf.reps().iter().take(2) {
                let fm = hva.to_graded_map(pp, fi);
                for gi in hg.reps().iter().take(2) {
                    let gm = haa.to_graded_map(q, gi);
                    let lhs = can_of(&pr, &ext_vw, &compose(&gm, &fm).unwrap(), (pp + q) as usize);
                    let cg = can_of(&pw, &ext_ww, &compose(&gm, &eps).unwrap(), q as usize);
                    let cf = can_of(&pr, &ext_vw, &fm, pp as usize);
                    let x = ext_ww.from_cocycle(q as usize, ext_ww.space(q as usize).unwrap().cocycle_reps.mul_vec(&cg));
                    let y = ext_vw.from_cocycle(pp as usize, ext_vw.space(pp as usize).unwrap().cocycle_reps.mul_vec(&cf));
                    let prod = yoneda(&x, &y).unwrap();
                    let rhs = ext_vw.classify((pp + q) as usize, &prod.cocycle).unwrap();
                    assert_eq!(lhs, rhs, "trial {trial}, p = {pp}, q = {q}");
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 100, "only {compared} comparisons");
}
