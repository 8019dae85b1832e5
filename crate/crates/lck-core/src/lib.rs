//! Exact symbolic kernel for finite Lie conformal algebras over ℂ[∂].
//!
//! The crate verifies λ-bracket identities as polynomial identities on module
//! generators: Lie conformal algebra and module axioms, Nijenhuis operators
//! and structures, O-operators and ON-structures, the conformal classical
//! Yang-Baxter equation modulo ∂^⊗3, and (symplectic-)Nijenhuis 2-forms. All
//! arithmetic is exact over ℚ with symbolic parameters; checks report
//! residual polynomials, never booleans alone.

// structure-constant tables are addressed by generator indices throughout;
// iterator rewrites of those loops hide the (i,j,k) bookkeeping
#![allow(clippy::needless_range_loop)]

pub mod freemod;
pub mod gdnov;
pub mod lca;
pub mod nijenhuis;
pub mod ooperator;
pub mod parallel;
pub mod poly;
pub mod rep;
pub mod report;
pub mod symplectic;
pub mod ybe;

pub use freemod::{cd_element, pair_eval, CdHom, CdModule, ElemPoly, ModuleError};
pub use poly::{
    certifying_count, evaluation_oracle, find_witness, Context, PolyError, ScalarPoly, SymbolKind,
};
pub use report::{CheckItem, Report, Verdict};
