use std::sync::Arc;

use crate::exactla::{LinearSolver, Matrix, Scalar};

use super::ext::hom_differential_images;
use super::{DerivedError, ExtSpace, ModuleOverAlgebra, ProjectiveResolution};

/// `0 → M' →ι M →π M'' → 0`, validated by ranks.
#[derive(Clone, Debug)]
pub struct SESOfModules {
    pub sub: Arc<ModuleOverAlgebra>,
    pub mid: Arc<ModuleOverAlgebra>,
    pub quo: Arc<ModuleOverAlgebra>,
    pub iota: Matrix,
    pub pi: Matrix,
}

impl SESOfModules {
    pub fn new(
        sub: Arc<ModuleOverAlgebra>,
        mid: Arc<ModuleOverAlgebra>,
        quo: Arc<ModuleOverAlgebra>,
        iota: Matrix,
        pi: Matrix,
    ) -> Result<Self, DerivedError> {
        if !sub.is_module_map(&iota, &mid) || !mid.is_module_map(&pi, &quo) {
            return Err(DerivedError::NotExactSequence("maps are not module maps".into()));
        }
        if iota.rank() != sub.dim() {
            return Err(DerivedError::NotExactSequence("ι is not injective".into()));
        }
        if pi.rank() != quo.dim() {
            return Err(DerivedError::NotExactSequence("π is not surjective".into()));
        }
        if !pi.mul(&iota).is_zero() || sub.dim() + quo.dim() != mid.dim() {
            return Err(DerivedError::NotExactSequence("image(ι) ≠ kernel(π)".into()));
        }
        Ok(SESOfModules { sub, mid, quo, iota, pi })
    }
}

/// The three Ext spaces of a short exact sequence on one resolution, with the
/// lifting data for the connecting map.
pub struct SesExt {
    pub ses: SESOfModules,
    pub sub: ExtSpace,
    pub mid: ExtSpace,
    pub quo: ExtSpace,
    lift_pi: LinearSolver,
    lift_iota: LinearSolver,
}

impl SesExt {
    pub fn new(ses: SESOfModules, p: &Arc<ProjectiveResolution>) -> Self {
        let sub = ExtSpace::new(p, &ses.sub);
        let mid = ExtSpace::new(p, &ses.mid);
        let quo = ExtSpace::new(p, &ses.quo);
        let lift_pi = LinearSolver::new(&ses.pi);
        let lift_iota = LinearSolver::new(&ses.iota);
        SesExt { ses, sub, mid, quo, lift_pi, lift_iota }
    }

    fn resolution(&self) -> &Arc<ProjectiveResolution> {
        &self.sub.resolution
    }

    /// `δ` on a cocycle `y: P_r → M''`: lift generatorwise to `M`, apply the Hom
    /// differential, and read the result in `M'`.
    pub fn delta_cocycle(&self, r: usize, y: &[Scalar]) -> Result<Vec<Scalar>, DerivedError> {
        let p = self.resolution();
        if r + 1 > p.length() {
            return Err(DerivedError::TruncationTooShort { needed: r + 2, have: p.length() });
        }
        let mid = &self.ses.mid;
        let sub = &self.ses.sub;
        let src = p.term(r);
        let ys = self.quo.images(r, y);
        let lifted: Vec<Vec<Scalar>> = ys
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let x = self.lift_pi.solve(v).ok_or(DerivedError::LiftFailed(r))?;
                Ok(mid.project(mid.idempotent_position(src.generator_idempotent(j)), &x))
            })
            .collect::<Result<_, DerivedError>>()?;
        let dy = hom_differential_images(p, r, mid, &lifted);
        let tgt = p.term(r + 1);
        let z: Vec<Vec<Scalar>> = dy
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = self.lift_iota.solve(v).ok_or(DerivedError::LiftFailed(r + 1))?;
                Ok(sub.project(sub.idempotent_position(tgt.generator_idempotent(i)), &x))
            })
            .collect::<Result<_, DerivedError>>()?;
        Ok(self.sub.layout(r + 1).from_images(&z))
    }

    /// `δ: Ext^r(V, M'') → Ext^{r+1}(V, M')` in class coordinates.
    pub fn delta_matrix(&self, r: usize) -> Result<Matrix, DerivedError> {
        let src = self.quo.space(r)?;
        let tgt = self.sub.space(r + 1)?;
        let cols: Vec<Vec<Scalar>> = (0..src.dim)
            .map(|i| Ok(tgt.classify(&self.delta_cocycle(r, &src.rep(i))?)))
            .collect::<Result<_, DerivedError>>()?;
        Ok(Matrix::from_cols(self.ses.sub.field(), tgt.dim, &cols))
    }

    pub fn iota_matrix(&self, r: usize) -> Result<Matrix, DerivedError> {
        super::ext::ext_map_matrix(&self.sub, &self.mid, r, &self.ses.iota)
    }

    pub fn pi_matrix(&self, r: usize) -> Result<Matrix, DerivedError> {
        super::ext::ext_map_matrix(&self.mid, &self.quo, r, &self.ses.pi)
    }

    /// Exactness of `Ext^r(M) → Ext^r(M'') → Ext^{r+1}(M') → Ext^{r+1}(M)` at the three
    /// inner positions, as rank identities `dim ker = rank` of the incoming map.
    pub fn long_exact_check(&self, r: usize) -> Result<[bool; 3], DerivedError> {
        let pi_r = self.pi_matrix(r)?;
        let iota_r = self.iota_matrix(r)?;
        let delta = self.delta_matrix(r)?;
        let iota_next = self.iota_matrix(r + 1)?;
        let composed = [pi_r.mul(&iota_r).is_zero(), delta.mul(&pi_r).is_zero(), iota_next.mul(&delta).is_zero()];
        let at_mid = self.mid.dim(r)? - pi_r.rank() == iota_r.rank();
        let at_quo = self.quo.dim(r)? - delta.rank() == pi_r.rank();
        let at_sub = self.sub.dim(r + 1)? - iota_next.rank() == delta.rank();
        Ok([at_mid && composed[0], at_quo && composed[1], at_sub && composed[2]])
    }
}

/// `δ: Ext^r(V, M'') → Ext^{r+1}(V, M')` on a resolution of `V`.
pub fn connecting_delta(s: &SESOfModules, p: &Arc<ProjectiveResolution>, r: usize) -> Result<Matrix, DerivedError> {
    if p.length() < r + 2 {
        return Err(DerivedError::TruncationTooShort { needed: r + 2, have: p.length() });
    }
    SesExt::new(s.clone(), p).delta_matrix(r)
}
