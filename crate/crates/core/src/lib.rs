//! Diophantine approximation over the field of formal Laurent series F_q((1/T)).

pub mod contfrac;
pub mod error;
pub mod exponents;
pub mod field;
pub mod inhomog;
pub mod laurent;
pub mod norm;
pub mod orbit;
pub mod poly;
pub mod search;
pub mod text;

pub use error::{Error, Result};
pub use field::{field_arithmetic, Field, FieldElement, FieldOp, FieldSpec};
pub use laurent::{Laurent, SeriesOp, Vec2Laurent};
pub use norm::NormDeg;
pub use poly::Poly;
pub use orbit::{Mat2, NormalizedPair, OrbitCandidate, Target, TargetInput};
pub use exponents::{ExponentKind, ExponentProfile, ExponentValue};
