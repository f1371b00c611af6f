use std::sync::Arc;

use serde_json::json;

use crate::complexes::{cohomology, shift, CochainComplex, GradedMap};
use crate::exactla::{LinearSolver, Matrix, Scalar};
use crate::homotopy::quasi_iso_check;

use super::can::can_matrix;
use super::right::{GenericHomInto, HomIntoResolution, RightResolution};
use super::{matrix_json, DenseResolution, DerivedError, ExtSpace, ModuleOverAlgebra, ProjectiveResolution, SESOfModules, SesExt, VerificationReport};

/// Cocycle submodules `Z^q ⊆ A^q` with their inclusions.
fn cocycle_modules(a: &DenseResolution, upto: usize) -> Result<Vec<(Arc<ModuleOverAlgebra>, Matrix)>, DerivedError> {
    (0..=upto)
        .map(|q| {
            let d = a.differential(q);
            let (z, inc) = a.term(q).submodule(&d.kernel_basis())?;
            Ok((Arc::new(z), inc))
        })
        .collect()
}

/// `Z^{p-1} ↣ A^{p-1} ↠ Z^p` with `π` the corestriction of `d`.
fn cocycle_ses(a: &DenseResolution, z: &[(Arc<ModuleOverAlgebra>, Matrix)], p: usize) -> Result<SESOfModules, DerivedError> {
    let (zp1, inc1) = &z[p - 1];
    let (zp, incp) = &z[p];
    let pi = incp.solve_matrix(a.differential(p - 1)).ok_or(DerivedError::NotExact(p))?;
    SESOfModules::new(zp1.clone(), a.term_arc(p - 1).clone(), zp.clone(), inc1.clone(), pi)
}

/// Checks `can = (-1)^{n(n+1)/2} ψ` on a basis of `H^n(F^0 A)`, where `ψ` is the
/// chain of connecting maps through the cocycle sequences followed by `Z^0 ≅ V'`.
pub fn lemma_check(p: &Arc<ProjectiveResolution>, a: &Arc<DenseResolution>, n: usize) -> Result<VerificationReport, DerivedError> {
    let mut rep = VerificationReport::new("sign lemma: can = (-1)^{n(n+1)/2} psi", "");
    rep.degrees_checked.push(vec![n as i64]);
    if n == 0 || a.top() < n + 1 || p.length() < n + 2 {
        return Err(DerivedError::TruncationTooShort { needed: n + 2, have: p.length().min(a.top()) });
    }
    let ar: Arc<dyn RightResolution> = a.clone();
    let hom = GenericHomInto::new(p, &ar)?;
    let fa = hom.complex().clone();
    let positive_exact = (1..a.top()).all(|q| cohomology(&a.complex(), q as i64).dim == 0);
    rep.hypothesis("A exact in positive degrees", positive_exact, "");
    let z = cocycle_modules(a, n)?;
    let v2 = a.object();
    let hn = cohomology(&fa, n as i64);
    // δ̄_{n,0}: class reps become Ext^0(V, Z^n) cocycles x∘ε
    let (zn, incn) = &z[n];
    let incn_solver = LinearSolver::new(incn);
    let ext_zn = ExtSpace::new(p, zn);
    let mut cocycles: Vec<Vec<Scalar>> = (0..hn.dim)
        .map(|i| {
            let imgs = hom.on_generators(n, &hn.rep(i));
            let zimgs: Vec<Vec<Scalar>> = imgs.iter().map(|v| incn_solver.solve(v).expect("values are cocycles")).collect();
            ext_zn.layout(0).from_images(&zimgs)
        })
        .collect();
    for (step, pp) in (1..=n).rev().enumerate() {
        let se = SesExt::new(cocycle_ses(a, &z, pp)?, p);
        cocycles = cocycles.iter().map(|c| se.delta_cocycle(step, c)).collect::<Result<_, _>>()?;
        if pp == 1 {
            let ext_v2 = ExtSpace::new(p, v2);
            let unaug = LinearSolver::new(a.augmentation());
            let inc0 = &z[0].1;
            let psi_cols: Vec<Vec<Scalar>> = cocycles
                .iter()
                .map(|c| {
                    let imgs = se.sub.images(n, c);
                    let vimgs: Vec<Vec<Scalar>> =
                        imgs.iter().map(|zv| unaug.solve(&inc0.mul_vec(zv)).expect("Z^0 = image of ε")).collect();
                    ext_v2.classify(n, &ext_v2.layout(n).from_images(&vimgs))
                })
                .collect::<Result<_, _>>()?;
            let f = v2.field();
            let dim = ext_v2.dim(n)?;
            let psi = Matrix::from_cols(f, dim, &psi_cols);
            let can = can_matrix(&hom, a.as_ref(), &ext_v2, n)?;
            let sign = (n * (n + 1) / 2) as i64;
            rep.checks = hn.dim;
            rep.instance = format!("dim H^{n}(F^0 A) = {}, dim Ext^{n}(V,V') = {dim}", hn.dim);
            if can != psi.signed(sign) {
                rep.fail(json!({"degree": n, "can": matrix_json(&can), "psi": matrix_json(&psi), "sign": f.one().signed(sign).to_string()}));
            }
        }
    }
    Ok(rep)
}

/// The two-term complex `C_p: Z^{p-1} →(-ι) A^{p-1}` with `q_p: C_p → Z^p` and
/// `f_p: C_p → Z^{p-1}[1]`, together with `i_{p-1} f_p`, `i_p q_p: C_p → A[p]` and
/// the homotopy given by the identity of `A^{p-1}`.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub cone: Arc<CochainComplex>,
    pub q: GradedMap,
    pub f: GradedMap,
    pub i_f: GradedMap,
    pub i_q: GradedMap,
    pub homotopy: GradedMap,
}

impl ConeData {
    pub fn q_is_chain_map(&self) -> bool {
        self.q.is_chain_map()
    }

    pub fn q_is_quasi_iso(&self) -> bool {
        quasi_iso_check(&self.q)
    }

    /// `d(identity) = (-1)^p i_p q_p - i_{p-1} f_p` in the hom-complex convention,
    /// i.e. the identity joins the two maps.
    pub fn homotopy_holds(&self, p: usize) -> bool {
        let target = self.i_q.scale(&self.i_q.field().one().signed(p as i64));
        self.homotopy.differential() == target.sub(&self.i_f)
    }
}

pub fn cone_complex_and_maps(a: &DenseResolution, p: usize) -> Result<ConeData, DerivedError> {
    if p == 0 || p > a.top() {
        return Err(DerivedError::Malformed(format!("cone index {p} outside 1..={}", a.top())));
    }
    let f = a.object().field();
    let z = cocycle_modules(a, p.min(a.top() - 1).max(p - 1))?;
    let (zp1, inc1) = (&z[p - 1].0, &z[p - 1].1);
    let amod = a.term(p - 1);
    let cone = Arc::new(CochainComplex::new(f, -1, vec![zp1.dim(), amod.dim()], vec![inc1.neg()]).expect("cone shapes"));
    let zp_dim = if p < z.len() { z[p].0.dim() } else { a.differential(p - 1).rank() };
    let (zp_inc, pi) = if p < z.len() {
        let inc = z[p].1.clone();
        let pi = inc.solve_matrix(a.differential(p - 1)).ok_or(DerivedError::NotExact(p))?;
        (inc, pi)
    } else {
        let img = crate::exactla::Subspace::span(a.differential(p - 1)).basis;
        let pi = img.solve_matrix(a.differential(p - 1)).ok_or(DerivedError::NotExact(p))?;
        (img, pi)
    };
    let zp_c = Arc::new(CochainComplex::concentrated(f, 0, zp_dim));
    let zp1_shift = Arc::new(shift(&CochainComplex::concentrated(f, 0, zp1.dim()), 1));
    let acx = a.complex();
    let ap = Arc::new(shift(&acx, p as i64));
    let q = GradedMap::from_fn(cone.clone(), zp_c, 0, |deg| {
        if deg == 0 {
            pi.clone()
        } else {
            Matrix::zeros(f, 0, zp1.dim())
        }
    });
    let fmap = GradedMap::from_fn(cone.clone(), zp1_shift, 0, |deg| {
        if deg == -1 {
            Matrix::identity(f, zp1.dim())
        } else {
            Matrix::zeros(f, 0, amod.dim())
        }
    });
    let i_f = GradedMap::from_fn(cone.clone(), ap.clone(), 0, |deg| {
        if deg == -1 {
            inc1.clone()
        } else {
            Matrix::zeros(f, ap.dim(0), amod.dim())
        }
    });
    let i_q = GradedMap::from_fn(cone.clone(), ap.clone(), 0, |deg| {
        if deg == 0 {
            zp_inc.mul(&pi)
        } else {
            Matrix::zeros(f, ap.dim(-1), zp1.dim())
        }
    });
    let homotopy = GradedMap::from_fn(cone.clone(), ap, -1, |deg| {
        if deg == 0 {
            Matrix::identity(f, amod.dim())
        } else {
            Matrix::zeros(f, acx.dim(p as i64 - 2), zp1.dim())
        }
    });
    Ok(ConeData { cone, q, f: fmap, i_f, i_q, homotopy })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::derived::{free_resolution, AlgebraSpec, Status};
    use crate::exactla::FieldSpec;

    /// `k ↣ R → R → ⋯` over `𝔽_p[ℤ/p]`, `p ∈ {2, 3}`, with `x = g - 1`: the maps
    /// alternate `x^{p-1}` and `x`, starting with `x` after the augmentation `1 ↦ x^{p-1}`.
    pub(crate) fn periodic_injective(p: u32, top: usize) -> (Arc<ModuleOverAlgebra>, Arc<DenseResolution>) {
        let f = FieldSpec::PrimeField(p);
        let n = p as usize;
        let mul: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let a = Arc::new(AlgebraSpec::group_algebra(f, &mul, 0).unwrap());
        let k = Arc::new(ModuleOverAlgebra::scalar(a.clone(), 1, |_| f.one()).unwrap());
        let reg = Arc::new(ModuleOverAlgebra::dense(a.clone(), (0..n).map(|b| a.left_regular(b)).collect()).unwrap());
        // right multiplication by x commutes with the left action
        let x = a.left_regular(1).sub(&Matrix::identity(f, n));
        let mut xp = Matrix::identity(f, n);
        for _ in 0..n - 1 {
            xp = xp.mul(&x);
        }
        let aug = Matrix::from_cols(f, n, &[xp.col(0)]);
        let diffs = (0..top).map(|q| if q % 2 == 0 { x.clone() } else { xp.clone() }).collect();
        let res = DenseResolution::new(k.clone(), vec![reg; top + 1], aug, diffs).unwrap();
        (k, Arc::new(res))
    }

    #[test]
    fn lemma_on_periodic_resolutions() {
        for (p, ns) in [(3u32, vec![1usize, 2, 3]), (2, vec![1, 2, 3, 4])] {
            let (k, a) = periodic_injective(p, 6);
            let pr = Arc::new(free_resolution(&k, 6).unwrap());
            for n in ns {
                let r = lemma_check(&pr, &a, n).unwrap();
                assert_eq!(r.status, Status::Pass, "p = {p}, n = {n}: {}", r.to_json());
                assert!(r.checks > 0);
            }
        }
    }

    #[test]
    fn cone_data_properties() {
        let (_, a) = periodic_injective(3, 5);
        for p in 1..=4 {
            let c = cone_complex_and_maps(&a, p).unwrap();
            assert!(c.q_is_chain_map());
            assert!(c.f.is_chain_map());
            assert!(c.q_is_quasi_iso());
            assert!(c.homotopy_holds(p));
        }
    }
}
