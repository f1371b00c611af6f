//! Cohomology of finite groups: the homogeneous standard resolution, invariant
//! cochains, the cup product, and the comparison `Φ_V` with `Ext_{k[G]}(k, V)`.

mod cup;
mod em;
mod gmodule;
mod group;
mod invariants;
mod standard;

use std::sync::Arc;

pub use cup::{em_cup, homogeneous_cup};
pub use em::{default_options, em_multiplicative_check, em_multiplicative_check_with, phi, phi_naturality, EmInstance, EmSetup};
pub use gmodule::{GModule, GModuleJson};
pub use group::{FinGroup, GroupJson, Tuples};
pub use invariants::{em_cohomology, invariants, InvariantCochains, InvariantComplex};
pub use standard::{coboundary, coinduced_certificate, CoinducedAction, StandardResolution};

use crate::derived::DerivedError;
use crate::exactla::{FieldSpec, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("invalid group table: {0}")]
    BadTable(String),
    #[error("invalid module: {0}")]
    BadModule(String),
    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(String),
    #[error(transparent)]
    Derived(#[from] DerivedError),
}

/// The index-2 subgroup generated by squares, if it has index 2.
pub fn sign_subgroup(g: &FinGroup) -> Option<Vec<bool>> {
    let m = g.order();
    let mut inside = vec![false; m];
    inside[g.identity()] = true;
    let squares: Vec<usize> = (0..m).map(|x| g.mul(x, x)).collect();
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in &squares {
            let y = g.mul(s, x);
            if !inside[y] {
                inside[y] = true;
                frontier.push(y);
            }
        }
    }
    (inside.iter().filter(|&&b| b).count() * 2 == m).then_some(inside)
}

/// The 2-dimensional module over 𝔽_2 on which the sign quotient acts by `[[1,1],[0,1]]`.
pub fn sign_module_f2(g: Arc<FinGroup>) -> Result<GModule, GroupError> {
    let even = sign_subgroup(&g).ok_or_else(|| GroupError::BadModule("no sign quotient".into()))?;
    let f2 = FieldSpec::PrimeField(2);
    let j = Matrix::from_i64_rows(f2, &[vec![1, 1], vec![0, 1]]);
    let action = even.iter().map(|&e| if e { Matrix::identity(f2, 2) } else { j.clone() }).collect();
    GModule::new(g, f2, 2, action)
}

#[cfg(test)]
mod tests;
