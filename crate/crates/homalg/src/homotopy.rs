//! Chain maps, homotopies, homotopy classes `[A,B] = H(⟨A,B⟩)` and their composition.

use std::sync::Arc;

use crate::complexes::{cohomology, compose, hom_complex, CochainComplex, CohomologySpace, GradedMap, HomComplex};
use crate::exactla::{Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("complexes do not match for composition")]
    ComplexMismatch,
}

pub fn is_chain_map(f: &GradedMap) -> bool {
    f.is_chain_map()
}

/// Some `h` of degree `n - 1` with `f - g = dh`, found by one linear solve over all degrees.
pub fn homotopy_between(f: &GradedMap, g: &GradedMap) -> Option<GradedMap> {
    assert_eq!(f.degree, g.degree, "homotopy_between: degree mismatch");
    let h = hom_complex(&f.source, &f.target);
    homotopy_in(&h, f, g)
}

/// As `homotopy_between`, reusing an assembled hom-complex.
pub fn homotopy_in(h: &HomComplex, f: &GradedMap, g: &GradedMap) -> Option<GradedMap> {
    let n = f.degree;
    let diff = h.to_vector(&f.sub(g));
    let d = h.complex.d(n - 1);
    let x = d.solve(&diff)?;
    Some(h.from_vector(n - 1, &x))
}

/// `[A,B]^n` with representatives as graded maps.
#[derive(Clone, Debug)]
pub struct HomotopyClassSpace {
    pub hom: Arc<HomComplex>,
    pub degree: i64,
    pub dim: usize,
    pub representatives: Vec<GradedMap>,
    pub cohomology: CohomologySpace,
}

impl HomotopyClassSpace {
    pub fn source(&self) -> &Arc<CochainComplex> {
        &self.hom.source
    }

    pub fn target(&self) -> &Arc<CochainComplex> {
        &self.hom.target
    }

    pub fn class_projection(&self) -> &Matrix {
        &self.cohomology.class_projection
    }

    /// Class coordinates of a chain map of this degree.
    pub fn classify(&self, f: &GradedMap) -> Vec<Scalar> {
        assert_eq!(f.degree, self.degree);
        self.cohomology.classify(&self.hom.to_vector(f))
    }

    /// The representative combination with the given class coordinates.
    pub fn realize(&self, coords: &[Scalar]) -> GradedMap {
        let mut acc = GradedMap::zero(self.source().clone(), self.target().clone(), self.degree);
        for (c, r) in coords.iter().zip(&self.representatives) {
            if !c.is_zero() {
                acc = acc.add(&r.scale(c));
            }
        }
        acc
    }
}

pub fn homotopy_classes(a: &Arc<CochainComplex>, b: &Arc<CochainComplex>, n: i64) -> HomotopyClassSpace {
    classes_in(&Arc::new(hom_complex(a, b)), n)
}

pub fn classes_in(h: &Arc<HomComplex>, n: i64) -> HomotopyClassSpace {
    let coh = cohomology(&h.complex, n);
    let representatives = coh.reps().iter().map(|v| h.from_vector(n, v)).collect();
    HomotopyClassSpace { hom: h.clone(), degree: n, dim: coh.dim, representatives, cohomology: coh }
}

/// Class of `g∘f` for `g ∈ [B,C]^q`, `f ∈ [A,B]^p`, expressed in `target = [A,C]^{p+q}`.
pub fn compose_classes(
    g_space: &HomotopyClassSpace,
    g: &[Scalar],
    f_space: &HomotopyClassSpace,
    f: &[Scalar],
    target: &HomotopyClassSpace,
) -> Result<Vec<Scalar>, HomotopyError> {
    if target.degree != f_space.degree + g_space.degree {
        return Err(HomotopyError::DegreeMismatch { expected: f_space.degree + g_space.degree, got: target.degree });
    }
    if f_space.target() != g_space.source() || target.source() != f_space.source() || target.target() != g_space.target() {
        return Err(HomotopyError::ComplexMismatch);
    }
    let gf = compose(&g_space.realize(g), &f_space.realize(f)).map_err(|_| HomotopyError::ComplexMismatch)?;
    Ok(target.classify(&gf))
}

/// Whether a degree-0 chain map induces isomorphisms on every `H^n` of the joint window.
pub fn quasi_iso_check(f: &GradedMap) -> bool {
    assert_eq!(f.degree, 0, "quasi_iso_check expects a degree-0 map");
    let (a, b) = (&f.source, &f.target);
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    (lo..=hi).all(|n| induced_map(f, n).map_or(false, |m| m.rows() == m.cols() && m.rank() == m.rows()))
}

/// `H^n(f)` in the class bases of source and target.
pub fn induced_map(f: &GradedMap, n: i64) -> Option<Matrix> {
    let ha = cohomology(&f.source, n);
    let hb = cohomology(&f.target, n + f.degree);
    let img = f.component(n).mul(&ha.cocycle_reps);
    Some(hb.classify_matrix(&img))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::testutil::random_complex;
    use crate::exactla::{vecops, FieldSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn k0() -> Arc<CochainComplex> {
        Arc::new(CochainComplex::concentrated(Q, 0, 1))
    }

    fn cone() -> Arc<CochainComplex> {
        Arc::new(CochainComplex::checked(Q, 0, vec![1, 1], vec![Matrix::identity(Q, 1)]).unwrap())
    }

    #[test]
    fn chain_map_examples() {
        let c = cone();
        assert!(is_chain_map(&GradedMap::identity(c)));
        let k = k0();
        let f = GradedMap::from_fn(k.clone(), k.clone(), 0, |_| Matrix::from_i64_rows(Q, &[vec![5]]));
        assert!(is_chain_map(&f));
    }

    #[test]
    fn homotopy_examples() {
        let c = cone();
        let id = GradedMap::identity(c.clone());
        assert!(homotopy_between(&id, &id).unwrap().is_zero());
        let zero = GradedMap::zero(c.clone(), c.clone(), 0);
        let h = homotopy_between(&id, &zero).unwrap();
        assert_eq!(h.differential(), id);
        assert_eq!(h.component(1), Matrix::identity(Q, 1));
        let k = k0();
        assert!(homotopy_between(&GradedMap::identity(k.clone()), &GradedMap::zero(k.clone(), k, 0)).is_none());
    }

    #[test]
    fn class_examples() {
        let k = k0();
        assert_eq!(homotopy_classes(&k, &k, 0).dim, 1);
        assert_eq!(homotopy_classes(&cone(), &cone(), 0).dim, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = Arc::new(random_complex(&mut rng, Q, 0, &[2, 3, 2]));
        for n in 0..=2 {
            assert_eq!(homotopy_classes(&k, &c, n).dim, cohomology(&c, n).dim);
        }
    }

    #[test]
    fn quasi_iso_examples() {
        let c = cone();
        assert!(quasi_iso_check(&GradedMap::identity(c.clone())));
        let z = Arc::new(CochainComplex::zero(Q));
        assert!(quasi_iso_check(&GradedMap::zero(z, c, 0)));
        let k = k0();
        assert!(!quasi_iso_check(&GradedMap::zero(k.clone(), k, 0)));
    }

    fn random_cocycle<R: Rng>(rng: &mut R, h: &HomComplex, n: i64) -> GradedMap {
        let field = h.complex.field();
        let z = h.complex.d(n).kernel_basis();
        let mut v = vecops::zeros(field, h.dim(n));
        for j in 0..z.cols() {
            vecops::axpy(&mut v, &field.from_i64(rng.gen_range(-2..3)), &z.col(j));
        }
        h.from_vector(n, &v)
    }

    fn random_element<R: Rng>(rng: &mut R, h: &HomComplex, n: i64) -> GradedMap {
        let field = h.complex.field();
        let v: Vec<Scalar> = (0..h.dim(n)).map(|_| field.from_i64(rng.gen_range(-2..3))).collect();
        h.from_vector(n, &v)
    }

    #[test]
    fn homotopy_search_sound_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for t in 0..40 {
            let f = if t % 2 == 0 { FieldSpec::PrimeField(2) } else { Q };
            let a = Arc::new(random_complex(&mut rng, f, 0, &[2, 2, 1]));
            let b = Arc::new(random_complex(&mut rng, f, 0, &[1, 2, 2]));
            let h = Arc::new(hom_complex(&a, &b));
            for n in -1..=1 {
                let cls = classes_in(&h, n);
                let x = random_cocycle(&mut rng, &h, n);
                let y = if rng.gen_bool(0.5) {
                    x.add(&random_element(&mut rng, &h, n - 1).differential())
                } else {
                    random_cocycle(&mut rng, &h, n)
                };
                let found = homotopy_in(&h, &x, &y);
                let same = cls.classify(&x) == cls.classify(&y);
                assert_eq!(found.is_some(), same);
                if let Some(hh) = found {
                    assert_eq!(hh.differential(), x.sub(&y));
                }
            }
        }
    }

    #[test]
    fn composition_well_defined_and_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let f2 = FieldSpec::PrimeField(2);
        for _ in 0..15 {
            let a = Arc::new(random_complex(&mut rng, f2, 0, &[1, 2]));
            let b = Arc::new(random_complex(&mut rng, f2, 0, &[2, 1]));
            let c = Arc::new(random_complex(&mut rng, f2, 0, &[1, 1, 1]));
            let d = Arc::new(random_complex(&mut rng, f2, 0, &[1, 1]));
            let (hab, hbc, hcd) = (
                Arc::new(hom_complex(&a, &b)),
                Arc::new(hom_complex(&b, &c)),
                Arc::new(hom_complex(&c, &d)),
            );
            let hac = Arc::new(hom_complex(&a, &c));
            let hbd = Arc::new(hom_complex(&b, &d));
            let had = Arc::new(hom_complex(&a, &d));
            let (p, q, r) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1), rng.gen_range(-1..=1));
            let (sab, sbc, scd) = (classes_in(&hab, p), classes_in(&hbc, q), classes_in(&hcd, r));
            let (sac, sbd, sad) = (classes_in(&hac, p + q), classes_in(&hbd, q + r), classes_in(&had, p + q + r));
            let rnd = |rng: &mut ChaCha8Rng, n: usize| -> Vec<Scalar> { (0..n).map(|_| f2.from_i64(rng.gen_range(0..2))).collect() };
            let (x, y, z) = (rnd(&mut rng, sab.dim), rnd(&mut rng, sbc.dim), rnd(&mut rng, scd.dim));
            let yx = compose_classes(&sbc, &y, &sab, &x, &sac).unwrap();
            let zy = compose_classes(&scd, &z, &sbc, &y, &sbd).unwrap();
            let left = compose_classes(&scd, &z, &sac, &yx, &sad).unwrap();
            let right = compose_classes(&sbd, &zy, &sab, &x, &sad).unwrap();
            assert_eq!(left, right);
            // changing a representative by a boundary does not move the class
            let fx = sab.realize(&x).add(&random_element(&mut rng, &hab, p - 1).differential());
            let gy = sbc.realize(&y);
            assert_eq!(sac.classify(&compose(&gy, &fx).unwrap()), yx);
            // identity and zero
            let idb = GradedMap::identity(b.clone());
            assert_eq!(sab.classify(&compose(&idb, &sab.realize(&x)).unwrap()), x);
            let zero = vecops::zeros(f2, sbc.dim);
            assert!(vecops::is_zero(&compose_classes(&sbc, &zero, &sab, &x, &sac).unwrap()));
        }
    }
}
