//! Chevalley–Eilenberg cohomology of Lie algebras with the wedge product, and
//! the comparison with Yoneda products over `U(𝔤)` through the Koszul resolution.

mod ce;
mod check;
mod koszul;
mod lie;
mod pbw;
mod semisimple;

pub use ce::{ce_complex, ce_cup, ce_differential, trivial_ce, CeComplex, Wedge};
pub use check::{hochschild_multiplicative_check, hochschild_multiplicative_check_with, HochschildOptions, HochschildRun, MAX_ESCALATIONS};
pub use koszul::{koszul_resolution, KoszulLift, KoszulResolution};
pub use lie::{LieAlgebra, LieJson, LieModule, LieModuleJson, LieSubalgebraPair};
pub use pbw::Pbw;
pub use semisimple::k_semisimplicity_check;

use crate::derived::DerivedError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("the field must have characteristic 0")]
    CharacteristicNotZero,
    #[error("not a Lie algebra: {0}")]
    NotALieAlgebra(String),
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("subspace is not closed under the bracket")]
    NotClosed,
    #[error("coefficients are not 𝔨-semisimple")]
    NotKSemisimple,
    #[error("coefficient mismatch")]
    CoefficientMismatch,
    #[error("PBW truncation too short: degree {0} required")]
    TruncationOverflow(usize),
    #[error("Koszul complex defect: {0}")]
    KoszulDefect(String),
    #[error("no chain-map lift in degree {0}")]
    LiftFailed(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Derived(#[from] DerivedError),
}
