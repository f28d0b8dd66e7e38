//! Residuals of the transformation identities for `∂`, `∂⁻` and `□` under the
//! linear maps `X′ = ΓX`, `X′ = XΓ` and `X′ = ΛXΛ⁻`.
//!
//! Each function evaluates both sides at corresponding points and returns
//! `lhs − rhs`; every identity here holds exactly, so the residual measures
//! rounding (exact mode) or truncation error (numeric mode).

use crate::algebra::{act_left, act_right, conjugate_rotate, Event, FieldValue, Paravector};
use crate::diffops::{box4, div4, grad4, DiffMode};
use crate::error::{AlgebraError, FieldError};
use crate::fields::{Field, LinearMap};

/// Tolerance on `|det Λ − 1|` for maps treated as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// One transformation check: a paravector, a field, the unprimed point and
/// the derivative mode.
#[derive(Clone, Debug)]
pub struct TransformCase {
    pub gamma: Paravector,
    pub field: Field,
    pub x: Event,
    pub mode: DiffMode,
}

pub fn require_orthogonal(lambda: Paravector) -> Result<(), AlgebraError> {
    let deviation = (lambda.det() - 1.0).norm();
    if deviation > ORTHOGONALITY_TOL {
        Err(AlgebraError::NotOrthogonal { deviation })
    } else {
        Ok(())
    }
}

/// `∂A(X) − ∂′[Γ A(Γ⁻¹X′)]` at `X′ = ΓX`.
pub fn thm3_div_residual(case: &TransformCase) -> Result<FieldValue, FieldError> {
    let TransformCase {
        gamma,
        field,
        x,
        mode,
    } = case;
    let pulled = Field::pullback(field.clone(), LinearMap::left_inverse(*gamma)?)?;
    let transformed = Field::left_mul(*gamma, pulled)?;
    let xp = act_left(*gamma, *x);
    Ok(div4(field, *x, *mode) - div4(&transformed, xp, *mode))
}

/// `∂⁻A(X) − Γ⁻ ∂′⁻[A(Γ⁻¹X′)]` at `X′ = ΓX`.
pub fn thm3_grad_residual(case: &TransformCase) -> Result<FieldValue, FieldError> {
    let TransformCase {
        gamma,
        field,
        x,
        mode,
    } = case;
    let pulled = Field::pullback(field.clone(), LinearMap::left_inverse(*gamma)?)?;
    let xp = act_left(*gamma, *x);
    Ok(grad4(field, *x, *mode) - gamma.reverse() * grad4(&pulled, xp, *mode))
}

/// `∂A(X) − Γ ∂′[A(X′Γ⁻¹)]` at `X′ = XΓ`.
pub fn thm4_div_residual(case: &TransformCase) -> Result<FieldValue, FieldError> {
    let TransformCase {
        gamma,
        field,
        x,
        mode,
    } = case;
    let pulled = Field::pullback(field.clone(), LinearMap::right_inverse(*gamma)?)?;
    let xp = act_right(*x, *gamma);
    Ok(div4(field, *x, *mode) - *gamma * div4(&pulled, xp, *mode))
}

/// `∂⁻A(X) − ∂′⁻[Γ⁻ A(X′Γ⁻¹)]` at `X′ = XΓ`.
pub fn thm4_grad_residual(case: &TransformCase) -> Result<FieldValue, FieldError> {
    let TransformCase {
        gamma,
        field,
        x,
        mode,
    } = case;
    let pulled = Field::pullback(field.clone(), LinearMap::right_inverse(*gamma)?)?;
    let transformed = Field::left_mul(gamma.reverse(), pulled)?;
    let xp = act_right(*x, *gamma);
    Ok(grad4(field, *x, *mode) - grad4(&transformed, xp, *mode))
}

/// `(∂[AΓ] − [∂A]Γ, ∂⁻[AΓ] − [∂⁻A]Γ)`. Needs no inverse, so singular Γ is fine.
pub fn thm5_residual(
    f: &Field,
    gamma: Paravector,
    x: Event,
    mode: DiffMode,
) -> Result<(FieldValue, FieldValue), FieldError> {
    let right = Field::right_mul(f.clone(), gamma)?;
    let div = div4(&right, x, mode) - div4(f, x, mode) * gamma;
    let grad = grad4(&right, x, mode) - grad4(f, x, mode) * gamma;
    Ok((div, grad))
}

/// Both sides of the observer-rotation identity
/// `∂′[ΛA(Λ⁻X′Λ)Λ⁻] = Λ[B(Λ⁻X′Λ)]Λ⁻` with `B = ∂A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationCheck {
    pub lhs: FieldValue,
    /// The rotated field value `Λ B(Λ⁻X′Λ) Λ⁻`.
    pub rhs: FieldValue,
    pub residual: FieldValue,
}

/// The rotated field `X′ ↦ Λ A(Λ⁻X′Λ) Λ⁻`.
pub fn rotated_field(f: &Field, lambda: Paravector) -> Result<Field, FieldError> {
    let pulled = Field::pullback(f.clone(), LinearMap::Conjugation(lambda.reverse()))?;
    Field::right_mul(Field::left_mul(lambda, pulled)?, lambda.reverse())
}

pub fn rotation_residual(
    f: &Field,
    lambda: Paravector,
    xp: Event,
    mode: DiffMode,
) -> Result<RotationCheck, FieldError> {
    require_orthogonal(lambda)?;
    let rotated = rotated_field(f, lambda)?;
    let pre = conjugate_rotate(lambda.reverse(), xp);
    let lhs = div4(&rotated, xp, mode);
    let rhs = lambda * div4(f, pre, mode) * lambda.reverse();
    Ok(RotationCheck {
        lhs,
        rhs,
        residual: lhs - rhs,
    })
}

/// The four ways of carrying `□A(X) = B(X)` into a frame transformed by an
/// orthogonal Λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvarianceForm {
    /// `□′A(X′Λ⁻) = B(X′Λ⁻)` with `X′ = XΛ`
    Form1,
    /// `□′[Λ⁻A(X′Λ⁻)] = Λ⁻B(X′Λ⁻)` with `X′ = XΛ`
    Form2,
    /// `□′[ΛA(Λ⁻X′)] = ΛB(Λ⁻X′)` with `X′ = ΛX`
    Form3,
    /// `□′A(Λ⁻X′) = B(Λ⁻X′)` with `X′ = ΛX`
    Form4,
}

impl InvarianceForm {
    pub const ALL: [InvarianceForm; 4] = [
        InvarianceForm::Form1,
        InvarianceForm::Form2,
        InvarianceForm::Form3,
        InvarianceForm::Form4,
    ];

    pub fn number(self) -> u8 {
        match self {
            InvarianceForm::Form1 => 1,
            InvarianceForm::Form2 => 2,
            InvarianceForm::Form3 => 3,
            InvarianceForm::Form4 => 4,
        }
    }

    fn acts_on_right(self) -> bool {
        matches!(self, InvarianceForm::Form1 | InvarianceForm::Form2)
    }

    /// Constant factor applied to field values: none, `Λ⁻` or `Λ`.
    pub fn value_factor(self, lambda: Paravector) -> Option<Paravector> {
        match self {
            InvarianceForm::Form1 | InvarianceForm::Form4 => None,
            InvarianceForm::Form2 => Some(lambda.reverse()),
            InvarianceForm::Form3 => Some(lambda),
        }
    }

    /// `X′` corresponding to the unprimed point `X`.
    pub fn primed_point(self, lambda: Paravector, x: Event) -> Event {
        if self.acts_on_right() {
            act_right(x, lambda)
        } else {
            act_left(lambda, x)
        }
    }

    /// The point `X′Λ⁻` or `Λ⁻X′` at which the unprimed field is read.
    pub fn preimage(self, lambda: Paravector, xp: Event) -> Event {
        if self.acts_on_right() {
            act_right(xp, lambda.reverse())
        } else {
            act_left(lambda.reverse(), xp)
        }
    }

    /// The field differentiated by `□′` in the primed frame.
    pub fn transformed_field(self, f: &Field, lambda: Paravector) -> Result<Field, FieldError> {
        let map = if self.acts_on_right() {
            LinearMap::RightAction(lambda.reverse())
        } else {
            LinearMap::LeftAction(lambda.reverse())
        };
        let pulled = Field::pullback(f.clone(), map)?;
        match self.value_factor(lambda) {
            None => Ok(pulled),
            Some(k) => Field::left_mul(k, pulled),
        }
    }
}

/// `□′[transformed A](X′) − [factor]·B(preimage)` with `B = □A`.
pub fn wave_invariance_residual(
    form: InvarianceForm,
    f: &Field,
    lambda: Paravector,
    xp: Event,
    mode: DiffMode,
) -> Result<FieldValue, FieldError> {
    require_orthogonal(lambda)?;
    let transformed = form.transformed_field(f, lambda)?;
    let lhs = box4(&transformed, xp, mode);
    let b = box4(f, form.preimage(lambda, xp), mode);
    let rhs = match form.value_factor(lambda) {
        None => b,
        Some(k) => k * b,
    };
    Ok(lhs - rhs)
}

/// Candidate transformed field values at the point corresponding to `X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformedValues {
    /// `A′ = A` (forms 1 and 4)
    pub invariant: FieldValue,
    /// `A′ = ΛA` (form 3)
    pub covariant: FieldValue,
    /// `A′ = Λ⁻A` (form 2)
    pub contravariant: FieldValue,
}

/// Evaluates the form-4, form-3 and form-2 transformed fields at the primed
/// points corresponding to the unprimed `X`.
pub fn transformed_field_values(
    f: &Field,
    lambda: Paravector,
    x: Event,
) -> Result<TransformedValues, FieldError> {
    require_orthogonal(lambda)?;
    let at = |form: InvarianceForm| -> Result<FieldValue, FieldError> {
        Ok(form
            .transformed_field(f, lambda)?
            .eval(form.primed_point(lambda, x)))
    };
    Ok(TransformedValues {
        invariant: at(InvarianceForm::Form4)?,
        covariant: at(InvarianceForm::Form3)?,
        contravariant: at(InvarianceForm::Form2)?,
    })
}

/// Discrepancy between pulling back by `Γ₁⁻¹` then `Γ₂⁻¹` and pulling back
/// once by `(Γ₂Γ₁)⁻¹`, evaluated at `y`.
pub fn composition_discrepancy(
    f: &Field,
    g1: Paravector,
    g2: Paravector,
    y: Event,
) -> Result<FieldValue, FieldError> {
    let twice = Field::pullback(
        Field::pullback(f.clone(), LinearMap::left_inverse(g1)?)?,
        LinearMap::left_inverse(g2)?,
    )?;
    let once = Field::pullback(f.clone(), LinearMap::left_inverse(g2 * g1)?)?;
    Ok(twice.eval(y) - once.eval(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, CVec3};
    use crate::sampling::Sampler;

    fn case(seed: u64, mode: DiffMode) -> TransformCase {
        let mut s = Sampler::new(seed);
        TransformCase {
            gamma: s.paravector(2.0),
            field: Field::Polynomial(s.polynomial(3, 2.0)),
            x: s.event(1.0, 0.5),
            mode,
        }
    }

    #[test]
    fn identity_transformation_gives_zero() {
        let mut c0 = case(1, DiffMode::Exact);
        c0.gamma = Paravector::ONE;
        for r in [
            thm3_div_residual(&c0),
            thm3_grad_residual(&c0),
            thm4_div_residual(&c0),
            thm4_grad_residual(&c0),
        ] {
            assert!(r.unwrap().max_abs() <= 1e-13);
        }
        let (d, g) = thm5_residual(&c0.field, Paravector::ONE, c0.x, DiffMode::Exact).unwrap();
        assert_eq!(d.max_abs() + g.max_abs(), 0.0);
    }

    #[test]
    fn random_cases_exact() {
        for seed in 0..10 {
            let c0 = case(seed, DiffMode::Exact);
            assert!(thm3_div_residual(&c0).unwrap().max_abs() <= 1e-10);
            assert!(thm3_grad_residual(&c0).unwrap().max_abs() <= 1e-10);
            assert!(thm4_div_residual(&c0).unwrap().max_abs() <= 1e-10);
            assert!(thm4_grad_residual(&c0).unwrap().max_abs() <= 1e-10);
        }
    }

    #[test]
    fn random_cases_numeric() {
        for seed in 0..5 {
            let c0 = case(seed, DiffMode::numeric(1e-5));
            assert!(thm3_div_residual(&c0).unwrap().max_abs() <= 1e-5);
            assert!(thm4_grad_residual(&c0).unwrap().max_abs() <= 1e-5);
        }
    }

    #[test]
    fn negated_gamma_still_satisfies_grad_identity() {
        let mut c0 = case(3, DiffMode::Exact);
        c0.gamma = c0.gamma.scale(c(-1.0, 0.0));
        assert!(thm3_grad_residual(&c0).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn scalar_gamma_makes_left_and_right_agree() {
        let mut c0 = case(4, DiffMode::Exact);
        c0.gamma = Paravector::scalar(c(1.3, -0.4));
        let l = thm3_div_residual(&c0).unwrap();
        let r = thm4_div_residual(&c0).unwrap();
        assert!((l - r).max_abs() <= 1e-12);
        assert_eq!(act_left(c0.gamma, c0.x), act_right(c0.x, c0.gamma));
    }

    #[test]
    fn singular_gamma() {
        let mut c0 = case(5, DiffMode::Exact);
        c0.gamma = Paravector::real(1.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            thm3_div_residual(&c0),
            Err(FieldError::Algebra(AlgebraError::SingularParavector { .. }))
        ));
        let (d, g) = thm5_residual(&c0.field, c0.gamma, c0.x, DiffMode::Exact).unwrap();
        assert!(d.max_abs() <= 1e-10 && g.max_abs() <= 1e-10);
    }

    #[test]
    fn rotation_identity() {
        let mut s = Sampler::new(11);
        let f = Field::Polynomial(s.polynomial(3, 2.0));
        let x = s.event(1.0, 0.5);
        let id = rotation_residual(&f, Paravector::ONE, x, DiffMode::Exact).unwrap();
        assert!(id.residual.max_abs() <= 1e-13);

        let lam = s.orthogonal(2.0);
        let xp = conjugate_rotate(lam, x);
        let check = rotation_residual(&f, lam, xp, DiffMode::Exact).unwrap();
        assert!(check.residual.max_abs() <= 1e-10);
        let pre = conjugate_rotate(lam.reverse(), xp);
        let expected = lam * div4(&f, pre, DiffMode::Exact) * lam.reverse();
        assert_eq!(check.rhs, expected);

        assert!(matches!(
            rotation_residual(
                &f,
                Paravector::real(2.0, 1.0, 0.0, 0.0),
                xp,
                DiffMode::Exact
            ),
            Err(FieldError::Algebra(AlgebraError::NotOrthogonal { .. }))
        ));
    }

    #[test]
    fn wave_forms() {
        let mut s = Sampler::new(12);
        let f = Field::Polynomial(s.polynomial(3, 2.0));
        let x = s.event(1.0, 0.5);
        let lam = s.orthogonal(2.0);
        for form in InvarianceForm::ALL {
            let r0 =
                wave_invariance_residual(form, &f, Paravector::ONE, x, DiffMode::Exact).unwrap();
            assert!(r0.max_abs() <= 1e-12);
            let xp = form.primed_point(lam, x);
            let r = wave_invariance_residual(form, &f, lam, xp, DiffMode::Exact).unwrap();
            assert!(
                r.max_abs() <= 1e-9,
                "form {}: {}",
                form.number(),
                r.max_abs()
            );
        }
    }

    #[test]
    fn wave_forms_use_the_stated_constructions() {
        let f = Field::constant(Paravector::ONE);
        let lam = Paravector::real(2.0, 1.0, 0.0, 0.0)
            .normalize_orthogonal()
            .unwrap();
        for form in InvarianceForm::ALL {
            let t = form.transformed_field(&f, lam).unwrap();
            match (form, &t) {
                (InvarianceForm::Form1, Field::Pullback(LinearMap::RightAction(m), inner))
                | (InvarianceForm::Form4, Field::Pullback(LinearMap::LeftAction(m), inner)) => {
                    assert_eq!(*m, lam.reverse());
                    assert_eq!(**inner, f);
                }
                (InvarianceForm::Form2, Field::LeftMul(k, inner)) => {
                    assert_eq!(*k, lam.reverse());
                    assert!(matches!(
                        **inner,
                        Field::Pullback(LinearMap::RightAction(_), _)
                    ));
                }
                (InvarianceForm::Form3, Field::LeftMul(k, inner)) => {
                    assert_eq!(*k, lam);
                    assert!(matches!(
                        **inner,
                        Field::Pullback(LinearMap::LeftAction(_), _)
                    ));
                }
                _ => panic!("unexpected construction for form {}", form.number()),
            }
        }
    }

    #[test]
    fn transformed_values() {
        let f = Field::constant(Paravector::new(c(0.5, 0.0), CVec3::real(0.0, 1.0, 0.0)));
        let x = Event::real(0.1, 0.2, 0.3, 0.4);
        let same = transformed_field_values(&f, Paravector::ONE, x).unwrap();
        assert_eq!(same.invariant, same.covariant);
        assert_eq!(same.invariant, same.contravariant);

        let lam = Paravector::real(2.0, 1.0, 0.0, 0.0)
            .normalize_orthogonal()
            .unwrap();
        let v = transformed_field_values(&f, lam, x).unwrap();
        assert!((v.covariant - v.contravariant).max_abs() >= 1e-3);
        let a = f.eval(x).as_paravector();
        assert!((v.covariant.as_paravector().det() - a.det()).norm() <= 1e-12);
    }

    #[test]
    fn composed_pullbacks() {
        let mut s = Sampler::new(13);
        let f = Field::Polynomial(s.polynomial(3, 2.0));
        let (g1, g2) = (s.paravector(2.0), s.paravector(2.0));
        let y = s.event(1.0, 0.5);
        assert!(composition_discrepancy(&f, g1, g2, y).unwrap().max_abs() <= 1e-10);
    }
}
