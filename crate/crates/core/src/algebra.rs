//! Complex paravector algebra.
//!
//! Three types share the same `[scalar; 3-vector]` layout over the complex
//! numbers but play different roles:
//!
//! * [`Paravector`] is multiplicative only. It is closed under the product
//!   `[a; A][b; B] = [ab + A·B; aB + bA + i A×B]` and has no addition.
//! * [`Event`] is an additive 4-vector `(t, r)`, a point of complex space-time.
//!   Paravectors act on events from the left or from the right.
//! * [`FieldValue`] is the value `[φ; Φ]` of a paravector field at a point.
//!   It supports both addition (fields add pointwise) and the product.
//!
//! Conversions between the three live at the bottom of this file and nowhere
//! else.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::AlgebraError;

/// The coefficient field.
pub type ComplexScalar = Complex64;

/// Imaginary unit.
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn real(re: f64) -> ComplexScalar {
    Complex64::new(re, 0.0)
}

/// A complex 3-vector.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CVec3 {
    pub x: ComplexScalar,
    pub y: ComplexScalar,
    pub z: ComplexScalar,
}

impl CVec3 {
    pub const ZERO: CVec3 = CVec3 {
        x: Complex64::new(0.0, 0.0),
        y: Complex64::new(0.0, 0.0),
        z: Complex64::new(0.0, 0.0),
    };

    pub const fn new(x: ComplexScalar, y: ComplexScalar, z: ComplexScalar) -> Self {
        CVec3 { x, y, z }
    }

    /// Vector with real components.
    pub fn real(x: f64, y: f64, z: f64) -> Self {
        CVec3::new(real(x), real(y), real(z))
    }

    pub fn from_array(a: [ComplexScalar; 3]) -> Self {
        CVec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [ComplexScalar; 3] {
        [self.x, self.y, self.z]
    }

    /// Bilinear dot product. Never conjugates.
    pub fn dot(self, other: CVec3) -> ComplexScalar {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: CVec3) -> CVec3 {
        CVec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn scale(self, k: ComplexScalar) -> CVec3 {
        CVec3::new(self.x * k, self.y * k, self.z * k)
    }

    /// Largest modulus among the three components.
    pub fn max_abs(self) -> f64 {
        self.x.norm().max(self.y.norm()).max(self.z.norm())
    }

    /// Sum of squared moduli.
    pub fn norm_sqr(self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|z| z.is_finite())
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, o: CVec3) -> CVec3 {
        CVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, o: CVec3) -> CVec3 {
        CVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    fn neg(self) -> CVec3 {
        CVec3::new(-self.x, -self.y, -self.z)
    }
}

// Shared product kernel: [as; av][bs; bv].
#[inline]
fn product(as_: ComplexScalar, av: CVec3, bs: ComplexScalar, bv: CVec3) -> (ComplexScalar, CVec3) {
    let s = as_ * bs + av.dot(bv);
    let v = bv.scale(as_) + av.scale(bs) + av.cross(bv).scale(I);
    (s, v)
}

/// A multiplicative paravector `[α; β]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Paravector {
    /// Scalar part α.
    pub s: ComplexScalar,
    /// Vector part β.
    pub v: CVec3,
}

impl Paravector {
    pub const ONE: Paravector = Paravector {
        s: Complex64::new(1.0, 0.0),
        v: CVec3::ZERO,
    };

    pub const fn new(s: ComplexScalar, v: CVec3) -> Self {
        Paravector { s, v }
    }

    /// A pure scalar paravector `[s; 0]`.
    pub const fn scalar(s: ComplexScalar) -> Self {
        Paravector { s, v: CVec3::ZERO }
    }

    /// Paravector with real components.
    pub fn real(s: f64, x: f64, y: f64, z: f64) -> Self {
        Paravector::new(real(s), CVec3::real(x, y, z))
    }

    pub fn components(self) -> [ComplexScalar; 4] {
        [self.s, self.v.x, self.v.y, self.v.z]
    }

    /// Reversion `Γ⁻`: negates the vector part.
    pub fn reverse(self) -> Paravector {
        Paravector::new(self.s, -self.v)
    }

    /// `α² − β·β`, the scalar part of `Γ Γ⁻`.
    pub fn det(self) -> ComplexScalar {
        self.s * self.s - self.v.dot(self.v)
    }

    pub fn scale(self, k: ComplexScalar) -> Paravector {
        Paravector::new(self.s * k, self.v.scale(k))
    }

    /// Sum of squared component moduli.
    pub fn norm_sqr(self) -> f64 {
        self.s.norm_sqr() + self.v.norm_sqr()
    }

    pub fn max_abs(self) -> f64 {
        self.s.norm().max(self.v.max_abs())
    }

    /// Threshold below which `|det|` counts as singular: `1e-12 · max(1, ‖a‖²)`.
    pub fn singularity_threshold(self) -> f64 {
        1e-12 * self.norm_sqr().max(1.0)
    }

    pub fn is_singular(self) -> bool {
        self.det().norm() <= self.singularity_threshold()
    }

    pub fn inverse(self) -> Result<Paravector, AlgebraError> {
        let d = self.det();
        if d.norm() <= self.singularity_threshold() {
            return Err(AlgebraError::SingularParavector { det: d.norm() });
        }
        Ok(self.reverse().scale(d.inv()))
    }

    /// Rescales by `1/sqrt(det)` (principal branch) so the result has unit determinant.
    pub fn normalize_orthogonal(self) -> Result<Paravector, AlgebraError> {
        let d = self.det();
        if d.norm() <= self.singularity_threshold() {
            return Err(AlgebraError::SingularParavector { det: d.norm() });
        }
        Ok(self.scale(d.sqrt().inv()))
    }

    pub fn is_orthogonal(self, tol: f64) -> bool {
        (self.det() - 1.0).norm() <= tol
    }

    pub fn is_finite(self) -> bool {
        self.s.is_finite() && self.v.is_finite()
    }
}

impl Mul for Paravector {
    type Output = Paravector;
    fn mul(self, o: Paravector) -> Paravector {
        let (s, v) = product(self.s, self.v, o.s, o.v);
        Paravector::new(s, v)
    }
}

impl fmt::Display for Paravector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}; ({}, {}, {})]",
            self.s, self.v.x, self.v.y, self.v.z
        )
    }
}

/// Free-function form of `a * b`.
pub fn mul(a: Paravector, b: Paravector) -> Paravector {
    a * b
}

pub fn reverse(a: Paravector) -> Paravector {
    a.reverse()
}

pub fn det(a: Paravector) -> ComplexScalar {
    a.det()
}

pub fn inverse(a: Paravector) -> Result<Paravector, AlgebraError> {
    a.inverse()
}

pub fn scale(k: ComplexScalar, a: Paravector) -> Paravector {
    a.scale(k)
}

pub fn normalize_orthogonal(a: Paravector) -> Result<Paravector, AlgebraError> {
    a.normalize_orthogonal()
}

pub fn is_orthogonal(a: Paravector, tol: f64) -> bool {
    a.is_orthogonal(tol)
}

/// A point `(t, r)` of complex space-time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub t: ComplexScalar,
    pub r: CVec3,
}

impl Event {
    pub const ORIGIN: Event = Event {
        t: Complex64::new(0.0, 0.0),
        r: CVec3::ZERO,
    };

    pub const fn new(t: ComplexScalar, r: CVec3) -> Self {
        Event { t, r }
    }

    pub fn real(t: f64, x: f64, y: f64, z: f64) -> Self {
        Event::new(real(t), CVec3::real(x, y, z))
    }

    /// Coordinates in `(t, x, y, z)` order.
    pub fn coords(self) -> [ComplexScalar; 4] {
        [self.t, self.r.x, self.r.y, self.r.z]
    }

    pub fn from_coords(a: [ComplexScalar; 4]) -> Self {
        Event::new(a[0], CVec3::new(a[1], a[2], a[3]))
    }

    pub fn scale(self, k: ComplexScalar) -> Event {
        Event::new(self.t * k, self.r.scale(k))
    }

    pub fn max_abs(self) -> f64 {
        self.t.norm().max(self.r.max_abs())
    }
}

impl Add for Event {
    type Output = Event;
    fn add(self, o: Event) -> Event {
        Event::new(self.t + o.t, self.r + o.r)
    }
}

impl Sub for Event {
    type Output = Event;
    fn sub(self, o: Event) -> Event {
        Event::new(self.t - o.t, self.r - o.r)
    }
}

/// `X′ = ΓX`, written out component by component.
pub fn act_left(g: Paravector, x: Event) -> Event {
    let (a, b) = (g.s, g.v);
    let (t, rx, ry, rz) = (x.t, x.r.x, x.r.y, x.r.z);
    Event::new(
        a * t + rx * b.x + ry * b.y + rz * b.z,
        CVec3::new(
            t * b.x + a * rx - I * ry * b.z + I * rz * b.y,
            t * b.y + I * rx * b.z + a * ry - I * rz * b.x,
            t * b.z - I * rx * b.y + I * ry * b.x + a * rz,
        ),
    )
}

/// `X′ = XΓ`, written out component by component.
pub fn act_right(x: Event, g: Paravector) -> Event {
    let (a, b) = (g.s, g.v);
    let (t, rx, ry, rz) = (x.t, x.r.x, x.r.y, x.r.z);
    Event::new(
        a * t + rx * b.x + ry * b.y + rz * b.z,
        CVec3::new(
            t * b.x + a * rx + I * ry * b.z - I * rz * b.y,
            t * b.y - I * rx * b.z + a * ry + I * rz * b.x,
            t * b.z + I * rx * b.y - I * ry * b.x + a * rz,
        ),
    )
}

/// Observer rotation `X′ = ΛXΛ⁻`.
pub fn conjugate_rotate(lambda: Paravector, x: Event) -> Event {
    act_right(act_left(lambda, x), lambda.reverse())
}

/// The value `[φ; Φ]` of a paravector field at one point.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FieldValue {
    pub phi: ComplexScalar,
    pub vec: CVec3,
}

impl FieldValue {
    pub const ZERO: FieldValue = FieldValue {
        phi: Complex64::new(0.0, 0.0),
        vec: CVec3::ZERO,
    };

    pub const fn new(phi: ComplexScalar, vec: CVec3) -> Self {
        FieldValue { phi, vec }
    }

    pub fn real(s: f64, x: f64, y: f64, z: f64) -> Self {
        FieldValue::new(real(s), CVec3::real(x, y, z))
    }

    /// Components in `(φ, Φx, Φy, Φz)` order.
    pub fn components(self) -> [ComplexScalar; 4] {
        [self.phi, self.vec.x, self.vec.y, self.vec.z]
    }

    pub fn from_components(a: [ComplexScalar; 4]) -> Self {
        FieldValue::new(a[0], CVec3::new(a[1], a[2], a[3]))
    }

    pub fn scale(self, k: ComplexScalar) -> FieldValue {
        FieldValue::new(self.phi * k, self.vec.scale(k))
    }

    /// Max modulus over the four complex components.
    pub fn max_abs(self) -> f64 {
        self.phi.norm().max(self.vec.max_abs())
    }

    /// Max over the eight real numbers making up the value.
    pub fn max_abs_real(self) -> f64 {
        self.components()
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(self) -> bool {
        self.phi.is_finite() && self.vec.is_finite()
    }
}

impl Add for FieldValue {
    type Output = FieldValue;
    fn add(self, o: FieldValue) -> FieldValue {
        FieldValue::new(self.phi + o.phi, self.vec + o.vec)
    }
}

impl Sub for FieldValue {
    type Output = FieldValue;
    fn sub(self, o: FieldValue) -> FieldValue {
        FieldValue::new(self.phi - o.phi, self.vec - o.vec)
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        FieldValue::new(-self.phi, -self.vec)
    }
}

/// Pointwise product of two field values.
impl Mul for FieldValue {
    type Output = FieldValue;
    fn mul(self, o: FieldValue) -> FieldValue {
        let (s, v) = product(self.phi, self.vec, o.phi, o.vec);
        FieldValue::new(s, v)
    }
}

impl Mul<FieldValue> for Paravector {
    type Output = FieldValue;
    fn mul(self, o: FieldValue) -> FieldValue {
        let (s, v) = product(self.s, self.v, o.phi, o.vec);
        FieldValue::new(s, v)
    }
}

impl Mul<Paravector> for FieldValue {
    type Output = FieldValue;
    fn mul(self, o: Paravector) -> FieldValue {
        let (s, v) = product(self.phi, self.vec, o.s, o.v);
        FieldValue::new(s, v)
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}; ({}, {}, {})]",
            self.phi, self.vec.x, self.vec.y, self.vec.z
        )
    }
}

// Reinterpretation between the three layouts. Keep all of them here.

impl Event {
    /// Reads the event's coordinates as a paravector `[t; r]`.
    pub fn as_paravector(self) -> Paravector {
        Paravector::new(self.t, self.r)
    }
}

impl Paravector {
    /// Reads the paravector as an event `(s, v)`.
    pub fn as_event(self) -> Event {
        Event::new(self.s, self.v)
    }

    pub fn as_field_value(self) -> FieldValue {
        FieldValue::new(self.s, self.v)
    }
}

impl FieldValue {
    /// Freezes a field value into a constant paravector.
    pub fn as_paravector(self) -> Paravector {
        Paravector::new(self.phi, self.vec)
    }
}
