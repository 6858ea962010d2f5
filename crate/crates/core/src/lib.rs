//! Exact-arithmetic toolkit for invariant geometry on solvable Lie algebras.
//!
//! Given a finite-dimensional Lie algebra by rational structure constants and
//! an invariant almost-complex structure J, this crate computes the invariant
//! apparatus (Chevalley-Eilenberg differential, d^c, weight decompositions,
//! nilradical, type-(I) classification) and decides — with exact rational
//! certificates — whether an invariant symplectic form taming J or an SKT
//! metric exists at the invariant level.
//!
//! Layering, bottom up:
//!
//! * [`scalar`], [`poly`], [`mat`] — exact rationals and Gaussian rationals,
//!   polynomial and matrix algebra over them;
//! * [`exterior`] — sparse exterior algebra with decidable equality;
//! * [`liecore`] — structure constants, Jacobi, series, nilradical, and the
//!   invariant differential;
//! * [`weights`] — Jordan-Chevalley decompositions, characters and weight
//!   spaces, type-(I) tests, the obstruction-character search;
//! * [`cxstruct`] — almost-complex structures, integrability, bigrading,
//!   d^c and dd^c;
//! * [`decide`] — spaces of closed 2-forms and dd^c-closed (1,1)-forms and
//!   the taming/SKT feasibility verdicts with exact certificates;
//! * [`catalog`] — constructors for the reference families (OT algebras,
//!   semidirect products, Yamada's algebra, abelian-J and almost-abelian
//!   examples) with their expected verdicts;
//! * [`doc`], [`report`] — the JSON interchange format, verdict reports and
//!   their standalone re-verification.

pub mod scalar;
pub mod poly;
pub mod mat;
pub mod exterior;
pub mod liecore;
pub mod weights;
pub mod cxstruct;
pub mod decide;
pub mod catalog;
pub mod doc;
pub mod report;

pub use scalar::{GaussRat, Rat};
