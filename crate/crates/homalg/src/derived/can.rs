use crate::exactla::{vecops, Matrix, Scalar};

use super::ext::HomLayout;
use super::right::{HomIntoResolution, RightResolution};
use super::{DerivedError, ExtSpace, ProjectiveResolution};

/// The zig-zag through `Hom(P_p, A^q)` taking `x: V → A^n` (a cocycle of `⟨V,A⟩`,
/// given on the basis of `V`) to generator images `P_n → V'` of an Ext cocycle.
///
/// Starts from `x∘ε` on `P_0`; at each step `c_p = d_A b` generatorwise and
/// `c_{p+1} = -(-1)^n b∘∂_{p+1}`; ends in `Z^0 = ε'(V')`.
pub fn can_zigzag(
    p: &ProjectiveResolution,
    a: &dyn RightResolution,
    n: usize,
    x: &[Vec<Scalar>],
) -> Result<Vec<Vec<Scalar>>, DerivedError> {
    if n > p.length() {
        return Err(DerivedError::TruncationTooShort { needed: n, have: p.length() });
    }
    if n > a.top() {
        return Err(DerivedError::TruncationTooShort { needed: n, have: a.top() });
    }
    let f = p.object().field();
    let target_dim = a.term(n).dim();
    let mut c: Vec<Vec<Scalar>> = (0..p.term(0).rank())
        .map(|j| {
            let e = p.boundary_of_generator(0, j);
            let mut out = vecops::zeros(f, target_dim);
            for (i, coef) in e.iter().enumerate() {
                vecops::axpy(&mut out, coef, &x[i]);
            }
            out
        })
        .collect();
    let sign = -f.one().signed(n as i64);
    for s in 0..n {
        let q = n - s;
        let lower = a.term(q - 1);
        let src = p.term(s);
        let b: Vec<Vec<Scalar>> = (0..src.rank())
            .map(|j| {
                if vecops::is_zero(&c[j]) {
                    return Ok(vecops::zeros(f, lower.dim()));
                }
                let y = a.contract(q, &c[j]).ok_or(DerivedError::ContractionFailed(q))?;
                Ok(lower.project(lower.idempotent_position(src.generator_idempotent(j)), &y))
            })
            .collect::<Result<_, DerivedError>>()?;
        c = (0..p.term(s + 1).rank())
            .map(|i| vecops::scale(&sign, &src.apply(p.boundary_of_generator(s + 1, i), &b, lower)))
            .collect();
    }
    let v2 = a.object();
    let top = p.term(n);
    (0..top.rank())
        .map(|j| {
            let y = a.unaugment(&c[j]).ok_or(DerivedError::ContractionFailed(0))?;
            Ok(v2.project(v2.idempotent_position(top.generator_idempotent(j)), &y))
        })
        .collect()
}

/// `can` on class coordinates: columns are images of the class basis of `H^n⟨V,A⟩`
/// in the class basis of `Ext^n(V, V')`.
pub fn can_matrix(
    hom: &dyn HomIntoResolution,
    a: &dyn RightResolution,
    ext: &ExtSpace,
    n: usize,
) -> Result<Matrix, DerivedError> {
    let h = crate::complexes::cohomology(hom.complex(), n as i64);
    let target = ext.space(n)?;
    let p = &ext.resolution;
    let lay = HomLayout::new(p.term(n), &ext.target);
    let cols: Vec<Result<Vec<Scalar>, DerivedError>> = crate::par::map_range(h.dim, |i| {
        let x = hom.as_map(n, &h.rep(i));
        let imgs = can_zigzag(p, a, n, &x)?;
        Ok(target.classify(&lay.from_images(&imgs)))
    });
    let cols: Vec<Vec<Scalar>> = cols.into_iter().collect::<Result<_, _>>()?;
    Ok(Matrix::from_cols(ext.target.field(), target.dim, &cols))
}

/// `can` of a single cocycle of `⟨V,A⟩^n`, as class coordinates in `Ext^n(V, V')`.
pub fn can_class(
    hom: &dyn HomIntoResolution,
    a: &dyn RightResolution,
    ext: &ExtSpace,
    n: usize,
    coords: &[Scalar],
) -> Result<Vec<Scalar>, DerivedError> {
    let p = &ext.resolution;
    let imgs = can_zigzag(p, a, n, &hom.as_map(n, coords))?;
    let lay = HomLayout::new(p.term(n), &ext.target);
    ext.classify(n, &lay.from_images(&imgs))
}
