//! The 4-divergence `∂ = [∂/∂t; ∇]`, the 4-gradient `∂⁻ = [∂/∂t; −∇]` and the
//! d'Alembertian `□ = ∂²/∂t² − ∇²`, in exact and finite-difference modes.
//!
//! Acting on `A = [φ; Φ]`:
//!
//! ```text
//! ∂A  = [∂φ/∂t + ∇·Φ ; ∂Φ/∂t + ∇φ + i∇×Φ]
//! ∂⁻A = [∂φ/∂t − ∇·Φ ; ∂Φ/∂t − ∇φ − i∇×Φ]
//! ```

use std::sync::Arc;

use crate::algebra::{real, CVec3, ComplexScalar, Event, FieldValue, Paravector, I};
use crate::fields::{central_difference, Coord, Field, ScalarField};

/// How partial derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffMode {
    /// Closed-form derivatives of the field tree.
    Exact,
    /// Central differences with step `h` along the real axis of each coordinate.
    Numeric(f64),
}

impl DiffMode {
    pub fn numeric(h: f64) -> Self {
        assert!(
            h > 0.0 && h.is_finite(),
            "finite-difference step must be positive, got {h}"
        );
        DiffMode::Numeric(h)
    }
}

/// Which first-order operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    /// `∂`
    Div,
    /// `∂⁻`
    Grad,
}

/// All sixteen first partials at a point: `d[c][k] = ∂A_c/∂x_k`, components
/// ordered `(φ, Φx, Φy, Φz)` and coordinates `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeBundle {
    pub d: [[ComplexScalar; 4]; 4],
}

impl DerivativeBundle {
    /// Assembles a bundle from one partial per coordinate.
    pub fn from_partials(mut partial: impl FnMut(Coord) -> FieldValue) -> Self {
        let mut d = [[real(0.0); 4]; 4];
        for coord in Coord::ALL {
            let col = partial(coord).components();
            for (c, v) in col.into_iter().enumerate() {
                d[c][coord.index()] = v;
            }
        }
        DerivativeBundle { d }
    }

    pub fn partial(&self, coord: Coord) -> FieldValue {
        let k = coord.index();
        FieldValue::from_components([self.d[0][k], self.d[1][k], self.d[2][k], self.d[3][k]])
    }

    pub fn max_abs(&self) -> f64 {
        self.d
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn time_derivative(&self) -> FieldValue {
        self.partial(Coord::T)
    }

    pub fn divergence(&self) -> ComplexScalar {
        self.d[1][1] + self.d[2][2] + self.d[3][3]
    }

    pub fn gradient(&self) -> CVec3 {
        CVec3::new(self.d[0][1], self.d[0][2], self.d[0][3])
    }

    pub fn curl(&self) -> CVec3 {
        let d = &self.d;
        CVec3::new(d[3][2] - d[2][3], d[1][3] - d[3][1], d[2][1] - d[1][2])
    }

    /// `[∂φ/∂t + ∇·Φ ; ∂Φ/∂t + ∇φ + i∇×Φ]`
    pub fn div4(&self) -> FieldValue {
        let dt = self.time_derivative();
        FieldValue::new(
            dt.phi + self.divergence(),
            dt.vec + self.gradient() + self.curl().scale(I),
        )
    }

    /// `[∂φ/∂t − ∇·Φ ; ∂Φ/∂t − ∇φ − i∇×Φ]`
    pub fn grad4(&self) -> FieldValue {
        let dt = self.time_derivative();
        FieldValue::new(
            dt.phi - self.divergence(),
            dt.vec - self.gradient() - self.curl().scale(I),
        )
    }

    pub fn apply(&self, op: Operator) -> FieldValue {
        match op {
            Operator::Div => self.div4(),
            Operator::Grad => self.grad4(),
        }
    }
}

pub fn bundle(f: &Field, x: Event, mode: DiffMode) -> DerivativeBundle {
    match mode {
        DiffMode::Exact => DerivativeBundle::from_partials(|c| f.partial(c).eval(x)),
        DiffMode::Numeric(h) => numeric_bundle(|y| f.eval(y), x, h),
    }
}

pub(crate) fn numeric_bundle<F>(f: F, x: Event, h: f64) -> DerivativeBundle
where
    F: Fn(Event) -> FieldValue,
{
    DerivativeBundle::from_partials(|c| central_difference(&f, x, c, h))
}

pub fn apply(op: Operator, f: &Field, x: Event, mode: DiffMode) -> FieldValue {
    bundle(f, x, mode).apply(op)
}

pub fn div4(f: &Field, x: Event, mode: DiffMode) -> FieldValue {
    bundle(f, x, mode).div4()
}

pub fn grad4(f: &Field, x: Event, mode: DiffMode) -> FieldValue {
    bundle(f, x, mode).grad4()
}

/// Componentwise `∂²/∂t² − ∂²/∂x² − ∂²/∂y² − ∂²/∂z²`.
pub fn box4(f: &Field, x: Event, mode: DiffMode) -> FieldValue {
    let second = |c: Coord| -> FieldValue {
        match mode {
            DiffMode::Exact => f.partial(c).partial(c).eval(x),
            DiffMode::Numeric(h) => {
                central_difference(|y| central_difference(|z| f.eval(z), y, c, h), x, c, h)
            }
        }
    };
    second(Coord::T) - second(Coord::X) - second(Coord::Y) - second(Coord::Z)
}

/// The paravector `[1; 0]`, `[0; x̂]`, `[0; ŷ]`, `[0; ẑ]` paired with each coordinate.
fn basis(coord: Coord) -> Paravector {
    match coord {
        Coord::T => Paravector::ONE,
        Coord::X => Paravector::real(0.0, 1.0, 0.0, 0.0),
        Coord::Y => Paravector::real(0.0, 0.0, 1.0, 0.0),
        Coord::Z => Paravector::real(0.0, 0.0, 0.0, 1.0),
    }
}

/// Closed-form field `∂A` (or `∂⁻A`), built as `Σ_k e_k · ∂_k A` with the
/// paravector product. Used where an operator must be applied twice.
pub fn operator_field(op: Operator, f: &Field) -> Field {
    let mut out: Option<Field> = None;
    for coord in Coord::ALL {
        let df = f.partial(coord);
        if df.is_zero() {
            continue;
        }
        let mut e = basis(coord);
        if op == Operator::Grad && coord != Coord::T {
            e = e.scale(real(-1.0));
        }
        let term = Field::LeftMul(e, Arc::new(df));
        out = Some(match out {
            None => term,
            Some(acc) => Field::Sum(Arc::new(acc), Arc::new(term)),
        });
    }
    out.unwrap_or_else(Field::zero)
}

pub fn div4_field(f: &Field) -> Field {
    operator_field(Operator::Div, f)
}

pub fn grad4_field(f: &Field) -> Field {
    operator_field(Operator::Grad, f)
}

/// `∂(f + g) − ∂f − ∂g`.
pub fn additivity_residual(f: &Field, g: &Field, x: Event, mode: DiffMode) -> FieldValue {
    let sum = Field::Sum(Arc::new(f.clone()), Arc::new(g.clone()));
    div4(&sum, x, mode) - div4(f, x, mode) - div4(g, x, mode)
}

/// `[∂ρ/∂t; ∇ρ]` (or `[∂ρ/∂t; −∇ρ]` for the gradient) as a field value.
pub fn scalar_operator(op: Operator, rho: &ScalarField, x: Event, mode: DiffMode) -> FieldValue {
    let partial = |c: Coord| -> ComplexScalar {
        match mode {
            DiffMode::Exact => rho.partial(c).eval(x),
            DiffMode::Numeric(h) => {
                central_difference(|y| FieldValue::new(rho.eval(y), CVec3::ZERO), x, c, h).phi
            }
        }
    };
    let grad = CVec3::new(partial(Coord::X), partial(Coord::Y), partial(Coord::Z));
    let grad = match op {
        Operator::Div => grad,
        Operator::Grad => -grad,
    };
    FieldValue::new(partial(Coord::T), grad)
}

/// `∂[ρA] − (∂ρ)A − ρ(∂A)`, with `(∂ρ)` multiplied on the left of `A`.
pub fn leibniz_residual(rho: &ScalarField, f: &Field, x: Event, mode: DiffMode) -> FieldValue {
    leibniz_residual_for(Operator::Div, rho, f, x, mode)
}

/// Same identity for either operator.
pub fn leibniz_residual_for(
    op: Operator,
    rho: &ScalarField,
    f: &Field,
    x: Event,
    mode: DiffMode,
) -> FieldValue {
    let scaled = Field::ScalarScaled(rho.clone(), Arc::new(f.clone()));
    let lhs = apply(op, &scaled, x, mode);
    let drho = scalar_operator(op, rho, x, mode);
    lhs - drho * f.eval(x) - apply(op, f, x, mode).scale(rho.eval(x))
}

/// `∂[fg] − (∂f)g − f(∂g)` for two paravector fields, exact mode. Nonzero in
/// general: the product rule does not extend to paravector × paravector.
pub fn product_rule_failure_witness(f: &Field, g: &Field, x: Event) -> FieldValue {
    let (fx, gx) = (f.eval(x), g.eval(x));
    let product =
        DerivativeBundle::from_partials(|c| f.partial(c).eval(x) * gx + fx * g.partial(c).eval(x));
    product.div4() - div4(f, x, DiffMode::Exact) * gx - fx * div4(g, x, DiffMode::Exact)
}

/// `(∂ρ)A − A(∂ρ)`: moving the scalar factor's derivative to the right side
/// of `A` changes the result.
pub fn ordering_witness(rho: &ScalarField, f: &Field, x: Event) -> FieldValue {
    let drho = scalar_operator(Operator::Div, rho, x, DiffMode::Exact);
    let a = f.eval(x);
    drho * a - a * drho
}
