use std::sync::Arc;

use serde_json::json;

use super::can::can_matrix;
use super::right::{HomIntoResolution, RightResolution};
use super::{matrix_json, DerivedError, ExtSpace, ProjectiveResolution, VerificationReport};

/// `dim Ext^p(V, A^q)` for `1 ≤ p ≤ window`, `0 ≤ q ≤ min(window, top)`.
pub fn acyclicity_table(
    p: &Arc<ProjectiveResolution>,
    a: &dyn RightResolution,
    window: usize,
) -> Result<Vec<(usize, usize, usize)>, DerivedError> {
    if p.length() < window + 1 {
        return Err(DerivedError::TruncationTooShort { needed: window + 1, have: p.length() });
    }
    let qs: Vec<usize> = (0..=window.min(a.top())).collect();
    let rows: Vec<Result<Vec<(usize, usize, usize)>, DerivedError>> = crate::par::map(&qs, |&q| {
        let w = Arc::new(a.term(q).clone());
        let e = ExtSpace::new(p, &w);
        (1..=window).map(|pp| Ok((pp, q, e.dim(pp)?))).collect()
    });
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Checks `Ext^p(V, A^q) = 0` for `p > 0` and, when it holds, that `can` is
/// bijective in degrees `0..=min(window, top-1)`. A failing hypothesis is a
/// warning, not a failure. `certificate` replaces the direct Ext computation.
pub fn strong_prop2_check(
    p: &Arc<ProjectiveResolution>,
    a: &dyn RightResolution,
    hom: &dyn HomIntoResolution,
    window: usize,
    certificate: Option<&[(usize, usize, usize)]>,
) -> Result<VerificationReport, DerivedError> {
    let mut rep = VerificationReport::new("strong proposition 2: can is an isomorphism", "");
    let table = match certificate {
        Some(c) => c.to_vec(),
        None => acyclicity_table(p, a, window)?,
    };
    let bad: Vec<&(usize, usize, usize)> = table.iter().filter(|t| t.2 != 0).collect();
    for (pp, q, d) in &bad {
        rep.warnings.push(format!("Ext^{pp}(V, A^{q}) has dimension {d}"));
    }
    rep.hypothesis(
        "Ext^p(V, A^q) = 0 for p > 0",
        bad.is_empty(),
        if certificate.is_some() { "certificate supplied by the resolution" } else { "computed" },
    );
    if !bad.is_empty() {
        return Ok(rep);
    }
    let ext = ExtSpace::new(p, a.object());
    let top = window.min(a.top().saturating_sub(1)).min(ext.max_degree());
    for n in 0..=top {
        rep.degrees_checked.push(vec![n as i64]);
        let m = can_matrix(hom, a, &ext, n)?;
        rep.checks += 1;
        if m.rows() != m.cols() || m.rank() != m.rows() {
            rep.fail(json!({"degree": n, "can": matrix_json(&m)}));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::lemma::tests::periodic_injective;
    use crate::derived::{free_resolution, AlgebraSpec, DenseHomInto, DenseResolution, ModuleOverAlgebra, Status};
    use crate::exactla::{FieldSpec, Matrix};

    #[test]
    fn injective_terms_satisfy_the_hypothesis() {
        let (k, a) = periodic_injective(2, 6);
        let p = Arc::new(free_resolution(&k, 6).unwrap());
        let hom = DenseHomInto::new(&k, &a).unwrap();
        let r = strong_prop2_check(&p, a.as_ref(), &hom, 4, None).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
        assert_eq!(r.degrees_checked.len(), 5);
    }

    #[test]
    fn non_acyclic_terms_warn() {
        let f = FieldSpec::PrimeField(2);
        let alg = Arc::new(AlgebraSpec::group_algebra(f, &[vec![0, 1], vec![1, 0]], 0).unwrap());
        let k = Arc::new(ModuleOverAlgebra::scalar(alg, 1, |_| f.one()).unwrap());
        let a = DenseResolution::new(k.clone(), vec![k.clone()], Matrix::identity(f, 1), vec![]).unwrap();
        let p = Arc::new(free_resolution(&k, 3).unwrap());
        let hom = DenseHomInto::new(&k, &a).unwrap();
        let r = strong_prop2_check(&p, &a, &hom, 2, None).unwrap();
        assert_eq!(r.status, Status::HypothesisFailed);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn ground_field_is_trivially_fine() {
        let f = FieldSpec::Rationals;
        let alg = Arc::new(AlgebraSpec::ground(f));
        let m = |d| Arc::new(ModuleOverAlgebra::scalar(alg.clone(), d, |_| f.one()).unwrap());
        let (k, k2) = (m(1), m(2));
        let a = DenseResolution::new(
            k.clone(),
            vec![k2.clone(), k.clone()],
            Matrix::from_i64_rows(f, &[vec![1], vec![1]]),
            vec![Matrix::from_i64_rows(f, &[vec![1, -1]])],
        )
        .unwrap();
        let p = Arc::new(free_resolution(&k, 3).unwrap());
        let hom = DenseHomInto::new(&k, &a).unwrap();
        let r = strong_prop2_check(&p, &a, &hom, 2, None).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    }
}
