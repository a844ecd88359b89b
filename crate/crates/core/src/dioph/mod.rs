//! Numerical search over integer linear forms in real tuples.

pub mod bituple;
pub mod expm1;
pub mod genericity;
pub mod linear_form;
pub mod relation;
pub mod tuple;

pub use bituple::{bituple_probe, BitupleParams, BitupleReport};
pub use expm1::{log_expm1_abs, log_expm1_sym};
pub use genericity::{gen_estimate, genericity_probe, genericity_probe_transformed, GenEstimate, GenericityReport, Overall, ProbeParams};
pub use linear_form::{linear_form_min, LinearFormRecord, SearchOptions};
pub use relation::{regularity_probe, RelationOutcome};
pub use tuple::RealTuple;
