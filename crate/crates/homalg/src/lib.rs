//! Exact homological algebra over the rationals and prime fields.
//!
//! Cochain complexes, hom-complexes and homotopy classes; Ext and Yoneda
//! products over finite-dimensional algebras; comparison maps between
//! combinatorial cup products (group, Čech, Chevalley–Eilenberg) and the
//! Yoneda product, each checked by exact linear algebra.

pub mod exactla;
pub mod par;
pub mod complexes;
pub mod homotopy;
pub mod derived;
pub mod groupcoh;
pub mod cechposet;
pub mod liealg;
