//! Paravector algebra over complex space-time, the operators `∂`, `∂⁻` and
//! `□` acting on paravector fields, and residual checks for how those
//! operators transform under paravector maps.

pub mod algebra;
pub mod diffops;
pub mod electromag;
pub mod error;
pub mod fields;
pub mod harness;
pub mod sampling;
pub mod transforms;

pub use algebra::{
    act_left, act_right, conjugate_rotate, CVec3, ComplexScalar, Event, FieldValue, Paravector, I,
};
pub use diffops::{box4, div4, grad4, DerivativeBundle, DiffMode, Operator};
pub use error::{AlgebraError, ConfigError, EmError, FieldError};
pub use fields::{
    exact_partial, numeric_partial, Coord, Field, LinearMap, PlaneWaveField, PolynomialField,
    ScalarField,
};
pub use harness::{
    run_convergence, run_convergence_on, run_suite, CaseReport, ConvergenceRow, FieldKind, Suite,
    SuiteConfig, SuiteReport,
};
pub use sampling::Sampler;
