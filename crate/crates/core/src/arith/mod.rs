//! Exact and rigorous numeric building blocks.

pub mod expr;
pub mod field;
pub mod interval;
pub mod intmat;
pub mod lll;

pub use expr::Expr;
pub use field::{Cyclotomic, CyclotomicField, FieldElem, Quadratic};
pub use interval::{ComplexInterval, Interval};
pub use intmat::IntMatrix;
pub use lll::lll_reduce;
