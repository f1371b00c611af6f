//! Sheaves on finite posets (opens are up-sets), chain-model Godement
//! resolutions, Čech complexes of covers with their cup products, and the
//! comparison of both products with the Yoneda product over the incidence algebra.

mod cech;
mod check;
mod godement;
mod poset;
mod sheaf;

pub use cech::{cech_complex, cech_cup, phi_cech, CechComplex, CechComparison};
pub use check::{cech_multiplicative_check, cech_multiplicative_check_with, default_options, GodementInstance};
pub use godement::{
    aw_cup, chain_coboundary, chain_coboundary_matrix, godement_mu, section_cup, section_times_module, ChainSpace, Godement,
    GodementSections, GodementTerm,
};
pub use poset::{face_poset, ChainIndex, FinPoset, PosetJson, SpaceJson};
pub use sheaf::{incidence_algebra, CoverJson, OpenCover, SheafJson, SheafOnPoset};

use crate::derived::DerivedError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CechError {
    #[error("invalid poset: {0}")]
    BadPoset(String),
    #[error("invalid sheaf: {0}")]
    BadSheaf(String),
    #[error("restrictions are not functorial between {0} and {1}")]
    NotFunctorial(usize, usize),
    #[error("{0:?} is not an up-set")]
    NotOpen(Vec<usize>),
    #[error("the opens do not cover the space")]
    NotACover,
    #[error("zig-zag obstructed in degree {0}: H(Γ(X,B)) does not inject into the double complex")]
    ZigZagObstruction(usize),
    #[error("sheaf and constant sheaf live on different posets or fields")]
    CoefficientMismatch,
    #[error(transparent)]
    Derived(#[from] DerivedError),
}

/// Standard test spaces as facet lists.
pub mod corpus {
    /// Boundary of a triangle.
    pub fn circle() -> Vec<Vec<usize>> {
        vec![vec![0, 1], vec![1, 2], vec![0, 2]]
    }

    /// Boundary of a tetrahedron.
    pub fn sphere() -> Vec<Vec<usize>> {
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
    }

    /// The 7-vertex triangulation of the torus.
    pub fn torus() -> Vec<Vec<usize>> {
        (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect()
    }
}
