//! Desk-scale workbench for character lattices on split tori, empirical
//! genericity of real tuples, auxiliary-polynomial constructions and the
//! combinatorics of transcendence-degree bounds.
//!
//! Module map:
//! - [`arith`]: rigorous intervals, tuple expressions, exact fields, integer
//!   matrices and LLL.
//! - [`lattice`]: Smith normal form, character modules, subgroup kernels,
//!   rank lemmas and the zero-estimate search.
//! - [`dioph`]: minimal linear forms, genericity probes, integer relations.
//! - [`auxpoly`]: parameter schedules, monomial sets, pullbacks, Siegel-type
//!   coefficient search, minimal vanishing degree, audits.
//! - [`bounds`]: exact evaluation of the transcendence-degree bounds.
//! - [`lab`]: experiment configuration, caching and report emission.

pub mod arith;
pub mod auxpoly;
pub mod bounds;
pub mod dioph;
pub mod error;
pub mod lab;
pub mod lattice;

pub use error::{Error, Result};
