//! Integer linear algebra and graded cohomology models for circle bundles.

mod graded;
mod gysin;
mod matrix;
mod orbit;

use thiserror::Error;

pub use graded::{DegreeGroup, GradedGroup};
pub use gysin::{check_highly_connected, divisibility_transfer, gysin_total_space};
pub use matrix::{smith_normal_form, smith_normal_form_batch, IntMatrix, SnfResult};
pub use orbit::{standard_orbit_model, OrbitFamily, OrbitModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("dimension out of scope: n = {0}")]
    DimensionOutOfScope(u32),
    #[error("Euler class must generate H²")]
    EulerNotPrimitive,
    #[error("model outside the CP^n / CP^((n-1)/2) x S^(n+1) dichotomy: cup with t on H^(n-1) is neither zero nor an isomorphism")]
    OutsideDichotomy,
    #[error("orbit model cohomology must be torsion-free")]
    TorsionInBase,
    #[error("Pontrjagin class index (n+1)/4 is not an integer for n = {0}")]
    PontrjaginIndex(u32),
    #[error("torsion order {0} does not fit in 64 bits")]
    TorsionTooLarge(String),
    #[error("invalid orbit model: {0}")]
    InvalidModel(String),
}
