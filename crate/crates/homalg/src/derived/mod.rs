//! Modules over finite-dimensional algebras, free resolutions, Ext with the
//! Yoneda product, connecting maps, the comparison map `can` from homotopy
//! classes, and the verification harnesses built on them.

mod algebra;
mod can;
mod delta;
pub mod ext;
mod harness;
pub(crate) mod lemma;
mod modhom;
mod module;
mod prop2;
mod projective;
mod report;
mod right;

pub use algebra::AlgebraSpec;
pub use can::{can_class, can_matrix, can_zigzag};
pub use delta::{connecting_delta, SESOfModules, SesExt};
pub use ext::{ext, lift_cocycle, yoneda, ExtClass, ExtSpace, HomLayout};
pub use harness::{merge_as_obligations, prop1_harness, HarnessOptions, Mutation, Pair, Prop1Instance};
pub use lemma::{cone_complex_and_maps, lemma_check, ConeData};
pub use modhom::{module_hom_basis, module_hom_complex, DenseHomInto, ModuleComplex, ModuleHomComplex};
pub use module::{Action, BlockAction, ImplicitAction, ModuleOverAlgebra};
pub use projective::{free_resolution, free_resolution_ordered, FreeModule, GeneratorOrder, ProjectiveResolution};
pub use prop2::{acyclicity_table, strong_prop2_check};
pub use report::{Hypothesis, Status, VerificationReport};
pub use right::{DenseResolution, GenericHomInto, HomIntoResolution, RightResolution};

pub(crate) use report::matrix_json;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivedError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not an algebra: {0}")]
    NotAnAlgebra(String),
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("idempotent {0} does not act diagonally on the chosen basis")]
    NotAdapted(usize),
    #[error("complex is not exact in degree {0}")]
    NotExact(usize),
    #[error("not a short exact sequence: {0}")]
    NotExactSequence(String),
    #[error("resolution too short: need length {needed}, have {have}")]
    TruncationTooShort { needed: usize, have: usize },
    #[error("lift failed in degree {0}")]
    LiftFailed(usize),
    #[error("contraction failed in degree {0}")]
    ContractionFailed(usize),
    #[error("Ext^{p}(V, A^{q}) is nonzero")]
    AcyclicityHypothesisFails { p: usize, q: usize },
}
