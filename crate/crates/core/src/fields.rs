//! Paravector-valued fields over complex space-time.
//!
//! Every field is holomorphic in each coordinate: polynomials, exponentials of
//! linear phases, and what the constructors below build from them (sums,
//! products with scalar fields, constant left/right factors, pullbacks along
//! linear maps). That closure is what lets [`exact_partial`] return another
//! [`Field`] in closed form, which then serves as the oracle for the
//! finite-difference derivative in [`numeric_partial`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{act_left, act_right, real, CVec3, ComplexScalar, Event, Paravector, I};
use crate::error::{AlgebraError, FieldError};

pub use crate::algebra::FieldValue;

/// Highest exponent allowed on any coordinate of a monomial.
pub const DEGREE_CAP: u32 = 8;
/// Most terms a polynomial field may hold.
pub const MAX_TERMS: usize = 512;
/// Deepest constructor tree accepted by the checked constructors.
pub const MAX_DEPTH: usize = 32;

/// A coordinate of complex space-time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    T,
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::T, Coord::X, Coord::Y, Coord::Z];
    pub const SPATIAL: [Coord; 3] = [Coord::X, Coord::Y, Coord::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Unit event along this coordinate.
    pub fn unit(self) -> Event {
        let mut a = [real(0.0); 4];
        a[self.index()] = real(1.0);
        Event::from_coords(a)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Coord::T => "t",
            Coord::X => "x",
            Coord::Y => "y",
            Coord::Z => "z",
        };
        f.write_str(s)
    }
}

/// Exponents `(e_t, e_x, e_y, e_z)` of a monomial.
pub type Exponents = [u8; 4];

fn check_exps(exps: Exponents) -> Result<(), FieldError> {
    match exps.iter().find(|&&e| e as u32 > DEGREE_CAP) {
        Some(&e) => Err(FieldError::DegreeCap {
            exp: e as u32,
            cap: DEGREE_CAP,
        }),
        None => Ok(()),
    }
}

// powers[k][e] = coord_k^e for e in 0..=DEGREE_CAP
struct PowerTable([[ComplexScalar; DEGREE_CAP as usize + 1]; 4]);

impl PowerTable {
    fn new(x: Event) -> Self {
        let mut p = [[real(1.0); DEGREE_CAP as usize + 1]; 4];
        for (k, v) in x.coords().into_iter().enumerate() {
            for e in 1..=DEGREE_CAP as usize {
                p[k][e] = p[k][e - 1] * v;
            }
        }
        PowerTable(p)
    }

    fn monomial(&self, exps: Exponents) -> ComplexScalar {
        let p = &self.0;
        p[0][exps[0] as usize]
            * p[1][exps[1] as usize]
            * p[2][exps[2] as usize]
            * p[3][exps[3] as usize]
    }
}

/// One term `coeff · t^e_t x^e_x y^e_y z^e_z` of a paravector polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonomialTerm {
    pub exps: Exponents,
    pub coeff: Paravector,
}

/// A sparse polynomial with paravector coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolynomialField {
    terms: Vec<MonomialTerm>,
}

impl PolynomialField {
    pub fn new(terms: Vec<MonomialTerm>) -> Result<Self, FieldError> {
        if terms.len() > MAX_TERMS {
            return Err(FieldError::TooManyTerms {
                count: terms.len(),
                cap: MAX_TERMS,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in &terms {
            check_exps(t.exps)?;
            if !t.coeff.is_finite() {
                return Err(FieldError::NonFinite);
            }
            if !seen.insert(t.exps) {
                return Err(FieldError::DuplicateMonomial(t.exps));
            }
        }
        Ok(PolynomialField { terms })
    }

    pub fn zero() -> Self {
        PolynomialField { terms: Vec::new() }
    }

    pub fn constant(value: Paravector) -> Self {
        PolynomialField {
            terms: vec![MonomialTerm {
                exps: [0; 4],
                coeff: value,
            }],
        }
    }

    pub fn monomial(exps: Exponents, coeff: Paravector) -> Result<Self, FieldError> {
        Self::new(vec![MonomialTerm { exps, coeff }])
    }

    /// Builds a polynomial from per-monomial field values, adding values that
    /// share exponents.
    pub fn from_values<I>(terms: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (Exponents, FieldValue)>,
    {
        let mut acc: BTreeMap<Exponents, FieldValue> = BTreeMap::new();
        for (e, v) in terms {
            let slot = acc.entry(e).or_insert(FieldValue::ZERO);
            *slot = *slot + v;
        }
        Self::new(
            acc.into_iter()
                .filter(|(_, v)| *v != FieldValue::ZERO)
                .map(|(exps, v)| MonomialTerm {
                    exps,
                    coeff: v.as_paravector(),
                })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[MonomialTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: Event) -> FieldValue {
        let pw = PowerTable::new(x);
        self.terms.iter().fold(FieldValue::ZERO, |acc, t| {
            acc + t.coeff.as_field_value().scale(pw.monomial(t.exps))
        })
    }

    pub fn partial(&self, coord: Coord) -> PolynomialField {
        let k = coord.index();
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exps[k] > 0)
            .map(|t| {
                let mut exps = t.exps;
                exps[k] -= 1;
                MonomialTerm {
                    exps,
                    coeff: t.coeff.scale(real(t.exps[k] as f64)),
                }
            })
            .collect();
        PolynomialField { terms }
    }

    /// Scalar polynomial formed by one component (0 = φ, 1..=3 = Φx..Φz).
    pub fn component(&self, index: usize) -> ScalarField {
        ScalarField {
            terms: self
                .terms
                .iter()
                .map(|t| ScalarTerm {
                    exps: t.exps,
                    coeff: t.coeff.components()[index],
                })
                .filter(|t| t.coeff != real(0.0))
                .collect(),
        }
    }
}

/// One term of a scalar polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarTerm {
    pub exps: Exponents,
    pub coeff: ComplexScalar,
}

/// A sparse polynomial with complex coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ScalarField {
    terms: Vec<ScalarTerm>,
}

impl ScalarField {
    pub fn new(terms: Vec<ScalarTerm>) -> Result<Self, FieldError> {
        if terms.len() > MAX_TERMS {
            return Err(FieldError::TooManyTerms {
                count: terms.len(),
                cap: MAX_TERMS,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in &terms {
            check_exps(t.exps)?;
            if !t.coeff.is_finite() {
                return Err(FieldError::NonFinite);
            }
            if !seen.insert(t.exps) {
                return Err(FieldError::DuplicateMonomial(t.exps));
            }
        }
        Ok(ScalarField { terms })
    }

    pub fn constant(value: ComplexScalar) -> Self {
        ScalarField {
            terms: vec![ScalarTerm {
                exps: [0; 4],
                coeff: value,
            }],
        }
    }

    pub fn monomial(exps: Exponents, coeff: ComplexScalar) -> Result<Self, FieldError> {
        Self::new(vec![ScalarTerm { exps, coeff }])
    }

    /// Sums terms, merging equal exponents and dropping zero coefficients.
    pub fn from_terms<I>(terms: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = ScalarTerm>,
    {
        let mut acc: BTreeMap<Exponents, ComplexScalar> = BTreeMap::new();
        for t in terms {
            *acc.entry(t.exps).or_insert(real(0.0)) += t.coeff;
        }
        Self::new(
            acc.into_iter()
                .filter(|(_, v)| *v != real(0.0))
                .map(|(exps, coeff)| ScalarTerm { exps, coeff })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[ScalarTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: Event) -> ComplexScalar {
        let pw = PowerTable::new(x);
        self.terms
            .iter()
            .fold(real(0.0), |acc, t| acc + t.coeff * pw.monomial(t.exps))
    }

    pub fn partial(&self, coord: Coord) -> ScalarField {
        let k = coord.index();
        ScalarField {
            terms: self
                .terms
                .iter()
                .filter(|t| t.exps[k] > 0)
                .map(|t| {
                    let mut exps = t.exps;
                    exps[k] -= 1;
                    ScalarTerm {
                        exps,
                        coeff: t.coeff * t.exps[k] as f64,
                    }
                })
                .collect(),
        }
    }

    /// Antiderivative in `t` with zero integration constant.
    pub fn integrate_t(&self) -> Result<ScalarField, FieldError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = t.exps;
                exps[0] += 1;
                ScalarTerm {
                    exps,
                    coeff: t.coeff / (exps[0] as f64),
                }
            })
            .collect();
        ScalarField::new(terms)
    }

    pub fn scale(&self, k: ComplexScalar) -> ScalarField {
        ScalarField {
            terms: self
                .terms
                .iter()
                .map(|t| ScalarTerm {
                    exps: t.exps,
                    coeff: t.coeff * k,
                })
                .collect(),
        }
    }
}

/// `amp · exp(κ₀ t + κ·r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveField {
    pub kappa0: ComplexScalar,
    pub kappa: CVec3,
    pub amp: Paravector,
}

impl PlaneWaveField {
    pub fn new(kappa0: ComplexScalar, kappa: CVec3, amp: Paravector) -> Result<Self, FieldError> {
        if !(kappa0.is_finite() && kappa.is_finite() && amp.is_finite()) {
            return Err(FieldError::NonFinite);
        }
        Ok(PlaneWaveField { kappa0, kappa, amp })
    }

    pub fn phase(&self, x: Event) -> ComplexScalar {
        self.kappa0 * x.t + self.kappa.dot(x.r)
    }

    /// Wave number along a coordinate.
    pub fn wave_number(&self, coord: Coord) -> ComplexScalar {
        [self.kappa0, self.kappa.x, self.kappa.y, self.kappa.z][coord.index()]
    }

    pub fn eval(&self, x: Event) -> FieldValue {
        self.amp.as_field_value().scale(self.phase(x).exp())
    }

    pub fn partial(&self, coord: Coord) -> PlaneWaveField {
        PlaneWaveField {
            amp: self.amp.scale(self.wave_number(coord)),
            ..*self
        }
    }
}

/// Linear maps along which fields are pulled back.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinearMap {
    /// `Y ↦ ΓY`
    LeftAction(Paravector),
    /// `Y ↦ YΓ`
    RightAction(Paravector),
    /// `Y ↦ ΛYΛ⁻`
    Conjugation(Paravector),
    /// `(t, r) ↦ (k t, r)`
    TimeScale(ComplexScalar),
}

/// Complex 4×4 matrix acting on `(t, x, y, z)`.
pub type Jacobian = [[ComplexScalar; 4]; 4];

fn left_jacobian(g: Paravector) -> Jacobian {
    let (a, b) = (g.s, g.v);
    [
        [a, b.x, b.y, b.z],
        [b.x, a, -I * b.z, I * b.y],
        [b.y, I * b.z, a, -I * b.x],
        [b.z, -I * b.y, I * b.x, a],
    ]
}

fn right_jacobian(g: Paravector) -> Jacobian {
    let (a, b) = (g.s, g.v);
    [
        [a, b.x, b.y, b.z],
        [b.x, a, I * b.z, -I * b.y],
        [b.y, -I * b.z, a, I * b.x],
        [b.z, I * b.y, -I * b.x, a],
    ]
}

fn mat_mul(a: &Jacobian, b: &Jacobian) -> Jacobian {
    let mut out = [[real(0.0); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

impl LinearMap {
    /// `Y ↦ Γ⁻¹Y`; fails when Γ is singular.
    pub fn left_inverse(g: Paravector) -> Result<Self, AlgebraError> {
        Ok(LinearMap::LeftAction(g.inverse()?))
    }

    /// `Y ↦ YΓ⁻¹`; fails when Γ is singular.
    pub fn right_inverse(g: Paravector) -> Result<Self, AlgebraError> {
        Ok(LinearMap::RightAction(g.inverse()?))
    }

    pub fn apply(&self, y: Event) -> Event {
        match *self {
            LinearMap::LeftAction(g) => act_left(g, y),
            LinearMap::RightAction(g) => act_right(y, g),
            LinearMap::Conjugation(l) => act_right(act_left(l, y), l.reverse()),
            LinearMap::TimeScale(k) => Event::new(y.t * k, y.r),
        }
    }

    /// Constant Jacobian `J[i][j] = ∂(m(Y))_i / ∂Y_j`, read off the component
    /// expansions of the left and right actions.
    pub fn jacobian(&self) -> Jacobian {
        match *self {
            LinearMap::LeftAction(g) => left_jacobian(g),
            LinearMap::RightAction(g) => right_jacobian(g),
            LinearMap::Conjugation(l) => mat_mul(&right_jacobian(l.reverse()), &left_jacobian(l)),
            LinearMap::TimeScale(k) => {
                let (o, z) = (real(1.0), real(0.0));
                [[k, z, z, z], [z, o, z, z], [z, z, o, z], [z, z, z, o]]
            }
        }
    }
}

/// A paravector-valued field built from the holomorphic families above.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Polynomial(PolynomialField),
    PlaneWave(PlaneWaveField),
    Sum(Arc<Field>, Arc<Field>),
    /// `ρ(X) · A(X)`
    ScalarScaled(ScalarField, Arc<Field>),
    /// `Γ · A(X)`
    LeftMul(Paravector, Arc<Field>),
    /// `A(X) · Γ`
    RightMul(Arc<Field>, Paravector),
    /// `A(m(X))`
    Pullback(LinearMap, Arc<Field>),
}

impl From<PolynomialField> for Field {
    fn from(p: PolynomialField) -> Self {
        Field::Polynomial(p)
    }
}

impl From<PlaneWaveField> for Field {
    fn from(p: PlaneWaveField) -> Self {
        Field::PlaneWave(p)
    }
}

fn check_depth(f: Field) -> Result<Field, FieldError> {
    let depth = f.depth();
    if depth > MAX_DEPTH {
        Err(FieldError::TooDeep {
            depth,
            cap: MAX_DEPTH,
        })
    } else {
        Ok(f)
    }
}

impl Field {
    pub fn zero() -> Self {
        Field::Polynomial(PolynomialField::zero())
    }

    pub fn constant(value: Paravector) -> Self {
        Field::Polynomial(PolynomialField::constant(value))
    }

    /// True only for the structural zero (a polynomial with no terms).
    pub fn is_zero(&self) -> bool {
        matches!(self, Field::Polynomial(p) if p.is_zero())
    }

    pub fn depth(&self) -> usize {
        match self {
            Field::Polynomial(_) | Field::PlaneWave(_) => 1,
            Field::Sum(a, b) => 1 + a.depth().max(b.depth()),
            Field::ScalarScaled(_, f)
            | Field::LeftMul(_, f)
            | Field::RightMul(f, _)
            | Field::Pullback(_, f) => 1 + f.depth(),
        }
    }

    pub fn sum(a: Field, b: Field) -> Result<Field, FieldError> {
        check_depth(Field::Sum(Arc::new(a), Arc::new(b)))
    }

    pub fn scalar_scaled(rho: ScalarField, f: Field) -> Result<Field, FieldError> {
        check_depth(Field::ScalarScaled(rho, Arc::new(f)))
    }

    pub fn left_mul(g: Paravector, f: Field) -> Result<Field, FieldError> {
        check_depth(Field::LeftMul(g, Arc::new(f)))
    }

    pub fn right_mul(f: Field, g: Paravector) -> Result<Field, FieldError> {
        check_depth(Field::RightMul(Arc::new(f), g))
    }

    pub fn pullback(f: Field, m: LinearMap) -> Result<Field, FieldError> {
        check_depth(Field::Pullback(m, Arc::new(f)))
    }

    pub fn eval(&self, x: Event) -> FieldValue {
        match self {
            Field::Polynomial(p) => p.eval(x),
            Field::PlaneWave(w) => w.eval(x),
            Field::Sum(a, b) => a.eval(x) + b.eval(x),
            Field::ScalarScaled(rho, f) => f.eval(x).scale(rho.eval(x)),
            Field::LeftMul(g, f) => *g * f.eval(x),
            Field::RightMul(f, g) => f.eval(x) * *g,
            Field::Pullback(m, f) => f.eval(m.apply(x)),
        }
    }

    /// Closed-form partial derivative. Derivative trees are exempt from the
    /// depth cap so that repeated differentiation always succeeds.
    pub fn partial(&self, coord: Coord) -> Field {
        match self {
            Field::Polynomial(p) => Field::Polynomial(p.partial(coord)),
            Field::PlaneWave(w) => Field::PlaneWave(w.partial(coord)),
            Field::Sum(a, b) => add(a.partial(coord), b.partial(coord)),
            Field::ScalarScaled(rho, f) => {
                let drho = rho.partial(coord);
                let df = f.partial(coord);
                let first = if drho.is_zero() {
                    Field::zero()
                } else {
                    Field::ScalarScaled(drho, f.clone())
                };
                let second = if df.is_zero() {
                    Field::zero()
                } else {
                    Field::ScalarScaled(rho.clone(), Arc::new(df))
                };
                add(first, second)
            }
            Field::LeftMul(g, f) => {
                let df = f.partial(coord);
                if df.is_zero() {
                    df
                } else {
                    Field::LeftMul(*g, Arc::new(df))
                }
            }
            Field::RightMul(f, g) => {
                let df = f.partial(coord);
                if df.is_zero() {
                    df
                } else {
                    Field::RightMul(Arc::new(df), *g)
                }
            }
            Field::Pullback(m, f) => {
                // ∂_j f(MY) = Σ_i M[i][j] (∂_i f)(MY)
                let jac = m.jacobian();
                let j = coord.index();
                let mut out = Field::zero();
                for inner in Coord::ALL {
                    let weight = jac[inner.index()][j];
                    if weight == real(0.0) {
                        continue;
                    }
                    let df = f.partial(inner);
                    if df.is_zero() {
                        continue;
                    }
                    let pulled = Field::Pullback(*m, Arc::new(df));
                    let term = if weight == real(1.0) {
                        pulled
                    } else {
                        Field::LeftMul(Paravector::scalar(weight), Arc::new(pulled))
                    };
                    out = add(out, term);
                }
                out
            }
        }
    }
}

// Unchecked sum that drops structural zeros.
fn add(a: Field, b: Field) -> Field {
    match (a.is_zero(), b.is_zero()) {
        (true, _) => b,
        (_, true) => a,
        _ => Field::Sum(Arc::new(a), Arc::new(b)),
    }
}

pub fn eval(f: &Field, x: Event) -> FieldValue {
    f.eval(x)
}

pub fn exact_partial(f: &Field, coord: Coord) -> Field {
    f.partial(coord)
}

/// Central difference along the real axis of `coord`:
/// `(f(X + h e) − f(X − h e)) / 2h`.
pub fn numeric_partial(f: &Field, x: Event, coord: Coord, h: f64) -> FieldValue {
    central_difference(|y| f.eval(y), x, coord, h)
}

pub(crate) fn central_difference<F>(f: F, x: Event, coord: Coord, h: f64) -> FieldValue
where
    F: Fn(Event) -> FieldValue,
{
    let step = coord.unit().scale(real(h));
    (f(x + step) - f(x - step)).scale(real(0.5 / h))
}

pub fn pullback(f: &Field, m: LinearMap) -> Result<Field, FieldError> {
    Field::pullback(f.clone(), m)
}

pub fn left_mul_field(g: Paravector, f: &Field) -> Result<Field, FieldError> {
    Field::left_mul(g, f.clone())
}

pub fn right_mul_field(f: &Field, g: Paravector) -> Result<Field, FieldError> {
    Field::right_mul(f.clone(), g)
}

pub fn scalar_scale_field(rho: &ScalarField, f: &Field) -> Result<Field, FieldError> {
    Field::scalar_scaled(rho.clone(), f.clone())
}

/// Convenience: the field `[φ; Φ]` whose components are given scalar polynomials.
pub fn field_from_components(components: [&ScalarField; 4]) -> Result<Field, FieldError> {
    let mut values = Vec::new();
    for (k, comp) in components.iter().enumerate() {
        for t in comp.terms() {
            let mut a = [real(0.0); 4];
            a[k] = t.coeff;
            values.push((t.exps, FieldValue::from_components(a)));
        }
    }
    Ok(Field::Polynomial(PolynomialField::from_values(values)?))
}

/// `[t; (x, y, z)]`, handy for checking operators against identity patterns.
pub fn coordinate_field() -> Field {
    let one = real(1.0);
    let z = real(0.0);
    let terms = vec![
        MonomialTerm {
            exps: [1, 0, 0, 0],
            coeff: Paravector::new(one, CVec3::ZERO),
        },
        MonomialTerm {
            exps: [0, 1, 0, 0],
            coeff: Paravector::new(z, CVec3::new(one, z, z)),
        },
        MonomialTerm {
            exps: [0, 0, 1, 0],
            coeff: Paravector::new(z, CVec3::new(z, one, z)),
        },
        MonomialTerm {
            exps: [0, 0, 0, 1],
            coeff: Paravector::new(z, CVec3::new(z, z, one)),
        },
    ];
    Field::Polynomial(PolynomialField { terms })
}
