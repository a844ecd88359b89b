//! Auxiliary-polynomial pipeline: schedules, monomial sets, pullbacks,
//! coefficient search, minimal vanishing degree and hypothesis audits.

pub mod distance;
pub mod evaluate;
pub mod monomial;
pub mod omega;
pub mod philippon;
pub mod poly;
pub mod pullback;
pub mod schedule;
pub mod siegel;
