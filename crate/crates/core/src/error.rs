use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    /// The paravector has (numerically) zero determinant and no inverse.
    #[error("singular paravector: |det| = {det:e} is below the singularity threshold")]
    SingularParavector { det: f64 },
    #[error("paravector is not orthogonal: |det - 1| = {deviation:e}")]
    NotOrthogonal { deviation: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("exponent {exp} exceeds the degree cap {cap}")]
    DegreeCap { exp: u32, cap: u32 },
    #[error("duplicate monomial exponents {0:?}")]
    DuplicateMonomial([u8; 4]),
    #[error("polynomial has {count} terms, more than the cap {cap}")]
    TooManyTerms { count: usize, cap: usize },
    #[error("field tree depth {depth} exceeds the cap {cap}")]
    TooDeep { depth: usize, cap: usize },
    #[error("non-finite coefficient")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polarization is not transverse to the wave vector: |pol·k| = {0:e}")]
    NonTransverse(f64),
    #[error("wave vector is zero")]
    ZeroWaveVector,
    #[error("physical constants must be positive and finite (c = {c}, eps0 = {eps0})")]
    InvalidConstants { c: f64, eps0: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("samples must be at least 1")]
    NoSamples,
    #[error("{name} must be a positive finite number, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("steps must hold at least two strictly decreasing positive values")]
    BadSteps,
}
