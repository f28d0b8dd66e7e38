//! Maxwell's equations in vacuum as paravector identities.
//!
//! With `τ = ct` the two halves read
//!
//! ```text
//! (0; E + icB)          = ∂⁻ (φ; −cA)
//! (1/ε₀)(ρ; −j/c)       = ∂  (0; E + icB)
//! ```
//!
//! and chaining them gives the wave system `□(φ; −cA) = (1/ε₀)(ρ; −j/c)`.
//! The `1/c` on the time derivative is realized by pulling fields back along
//! `τ ↦ τ/c` and evaluating the ordinary operators at `(ct, r)`.

use std::sync::Arc;

use crate::algebra::{real, CVec3, ComplexScalar, Event, FieldValue, Paravector};
use crate::diffops::{box4, div4, div4_field, grad4, grad4_field, DiffMode};
use crate::error::EmError;
use crate::fields::{
    numeric_partial, Coord, Field, LinearMap, PlaneWaveField, PolynomialField, ScalarField,
};

/// Tolerance for `pol · k = 0`, relative to `max(1, |pol||k|)`.
pub const TRANSVERSALITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysConstants {
    /// Speed of light.
    pub c: f64,
    /// Vacuum permittivity.
    pub eps0: f64,
}

impl Default for PhysConstants {
    fn default() -> Self {
        PhysConstants { c: 1.0, eps0: 1.0 }
    }
}

impl PhysConstants {
    pub fn new(c: f64, eps0: f64) -> Result<Self, EmError> {
        if c > 0.0 && c.is_finite() && eps0 > 0.0 && eps0.is_finite() {
            Ok(PhysConstants { c, eps0 })
        } else {
            Err(EmError::InvalidConstants { c, eps0 })
        }
    }

    fn tau_point(&self, x: Event) -> Event {
        Event::new(x.t * self.c, x.r)
    }
}

/// A field whose value is read as `(φ; −cA)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField(pub Field);

impl PotentialField {
    pub fn field(&self) -> &Field {
        &self.0
    }
}

/// `(scalar; E + icB)`; `scalar` is the Lorenz-gauge diagnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EMValue {
    pub scalar: ComplexScalar,
    pub f: CVec3,
}

/// `(ρ/ε₀; −j/(cε₀))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceValue {
    pub rho_over_eps: ComplexScalar,
    pub j_term: CVec3,
}

impl SourceValue {
    pub fn charge_density(&self, k: &PhysConstants) -> ComplexScalar {
        self.rho_over_eps * k.eps0
    }

    pub fn current_density(&self, k: &PhysConstants) -> CVec3 {
        self.j_term.scale(real(-k.c * k.eps0))
    }

    pub fn as_field_value(&self) -> FieldValue {
        FieldValue::new(self.rho_over_eps, self.j_term)
    }

    pub fn max_abs(&self) -> f64 {
        self.as_field_value().max_abs()
    }
}

// G(τ, r) = f(τ/c, r)
fn in_tau_frame(f: &Field, k: &PhysConstants) -> Field {
    Field::Pullback(LinearMap::TimeScale(real(1.0 / k.c)), Arc::new(f.clone()))
}

fn back_to_t_frame(f: Field, k: &PhysConstants) -> Field {
    Field::Pullback(LinearMap::TimeScale(real(k.c)), Arc::new(f))
}

/// `[∂/c∂t; −∇](φ; −cA)` at `x`.
pub fn em_from_potential(
    pot: &PotentialField,
    x: Event,
    k: &PhysConstants,
    mode: DiffMode,
) -> EMValue {
    let v = grad4(&in_tau_frame(pot.field(), k), k.tau_point(x), mode);
    EMValue {
        scalar: v.phi,
        f: v.vec,
    }
}

/// The electromagnetic paravector as a closed-form field of `(t, r)`.
pub fn em_field(pot: &PotentialField, k: &PhysConstants) -> Field {
    back_to_t_frame(grad4_field(&in_tau_frame(pot.field(), k)), k)
}

/// `[∂/c∂t; ∇](0; E + icB)` at `x`.
pub fn sources_from_em(emf: &Field, x: Event, k: &PhysConstants, mode: DiffMode) -> SourceValue {
    let v = div4(&in_tau_frame(emf, k), k.tau_point(x), mode);
    SourceValue {
        rho_over_eps: v.phi,
        j_term: v.vec,
    }
}

/// The sources of an electromagnetic field as a closed-form field of `(t, r)`.
pub fn sources_field(emf: &Field, k: &PhysConstants) -> Field {
    back_to_t_frame(div4_field(&in_tau_frame(emf, k)), k)
}

/// `(∂²/c²∂t² − ∇²)(φ; −cA) − (1/ε₀)(ρ; −j/c)` at `x`, the sources being
/// given as a field of `(t, r)`.
pub fn wave_residual(
    pot: &PotentialField,
    src: &Field,
    x: Event,
    k: &PhysConstants,
    mode: DiffMode,
) -> FieldValue {
    box4(&in_tau_frame(pot.field(), k), k.tau_point(x), mode) - src.eval(x)
}

/// `∇·Φ` by three central differences, independent of the operator assembly.
pub fn numeric_divergence(f: &Field, x: Event, h: f64) -> ComplexScalar {
    numeric_partial(f, x, Coord::X, h).vec.x
        + numeric_partial(f, x, Coord::Y, h).vec.y
        + numeric_partial(f, x, Coord::Z, h).vec.z
}

/// Vacuum plane wave `φ = 0`, `A = amp · pol · exp(i(ωt − k·r))` with
/// `ω = c √(k·k)`.
pub fn plane_wave_potential(
    kvec: CVec3,
    pol: CVec3,
    amp: ComplexScalar,
    k: &PhysConstants,
) -> Result<PotentialField, EmError> {
    if kvec == CVec3::ZERO {
        return Err(EmError::ZeroWaveVector);
    }
    let overlap = pol.dot(kvec).norm();
    let scale = (pol.norm_sqr() * kvec.norm_sqr()).sqrt().max(1.0);
    if overlap > TRANSVERSALITY_TOL * scale {
        return Err(EmError::NonTransverse(overlap));
    }
    let i = crate::algebra::I;
    let omega = kvec.dot(kvec).sqrt() * k.c;
    let amplitude = Paravector::new(real(0.0), pol.scale(amp * -k.c));
    let wave = PlaneWaveField::new(i * omega, kvec.scale(-i), amplitude)?;
    Ok(PotentialField(Field::PlaneWave(wave)))
}

/// Potential `(φ; Ψ)` with `Ψ = −cA` taken from the vector part of `vector`
/// and `φ = c ∫ ∇·Ψ dt`, so the Lorenz-gauge scalar vanishes identically.
pub fn lorenz_gauge_potential(
    vector: &PolynomialField,
    k: &PhysConstants,
) -> Result<PotentialField, EmError> {
    let psi = [
        vector.component(1),
        vector.component(2),
        vector.component(3),
    ];
    let div = ScalarField::from_terms(
        psi[0]
            .partial(Coord::X)
            .terms()
            .iter()
            .chain(psi[1].partial(Coord::Y).terms())
            .chain(psi[2].partial(Coord::Z).terms())
            .copied(),
    )?;
    let phi = div.integrate_t()?.scale(real(k.c));
    let field = crate::fields::field_from_components([&phi, &psi[0], &psi[1], &psi[2]])?;
    Ok(PotentialField(field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::c;
    use crate::fields::MonomialTerm;

    fn at() -> Event {
        Event::new(
            c(0.3, 0.05),
            CVec3::new(c(0.5, -0.2), c(-0.7, 0.0), c(0.2, 0.4)),
        )
    }

    #[test]
    fn constants_validation() {
        assert!(PhysConstants::new(2.0, 1.0).is_ok());
        assert!(PhysConstants::new(0.0, 1.0).is_err());
        assert!(PhysConstants::new(1.0, -1.0).is_err());
    }

    #[test]
    fn static_scalar_potential() {
        let pot = PotentialField(
            PolynomialField::monomial([0, 1, 0, 0], Paravector::ONE)
                .unwrap()
                .into(),
        );
        let em = em_from_potential(&pot, at(), &PhysConstants::default(), DiffMode::Exact);
        assert_eq!(em.scalar, real(0.0));
        assert_eq!(em.f, CVec3::real(-1.0, 0.0, 0.0));

        let zero = PotentialField(Field::zero());
        let em0 = em_from_potential(&zero, at(), &PhysConstants::default(), DiffMode::Exact);
        assert_eq!(
            em0,
            EMValue {
                scalar: real(0.0),
                f: CVec3::ZERO
            }
        );
    }

    #[test]
    fn gauss_law_for_static_field() {
        let f: Field =
            PolynomialField::monomial([0, 1, 0, 0], Paravector::real(0.0, 1.0, 0.0, 0.0))
                .unwrap()
                .into();
        let k = PhysConstants::default();
        let s = sources_from_em(&f, at(), &k, DiffMode::Exact);
        assert_eq!(s.rho_over_eps, real(1.0));
        assert_eq!(
            sources_from_em(&Field::zero(), at(), &k, DiffMode::Exact).max_abs(),
            0.0
        );
    }

    #[test]
    fn canonical_plane_wave() {
        let k = PhysConstants::default();
        let pot = plane_wave_potential(
            CVec3::real(0.0, 0.0, 1.0),
            CVec3::real(1.0, 0.0, 0.0),
            real(1.0),
            &k,
        )
        .unwrap();
        if let Field::PlaneWave(w) = pot.field() {
            assert_eq!(w.kappa0, c(0.0, 1.0));
        } else {
            panic!("plane wave expected");
        }
        let em = em_from_potential(&pot, at(), &k, DiffMode::Exact);
        assert!(em.scalar.norm() <= 1e-12);
        let emf = em_field(&pot, &k);
        assert!(sources_from_em(&emf, at(), &k, DiffMode::Exact).max_abs() <= 1e-10);
        assert!(wave_residual(&pot, &Field::zero(), at(), &k, DiffMode::Exact).max_abs() <= 1e-10);
    }

    #[test]
    fn plane_wave_errors() {
        let k = PhysConstants::default();
        assert_eq!(
            plane_wave_potential(
                CVec3::real(0.0, 0.0, 1.0),
                CVec3::real(0.0, 0.0, 1.0),
                real(1.0),
                &k
            ),
            Err(EmError::NonTransverse(1.0))
        );
        assert_eq!(
            plane_wave_potential(CVec3::ZERO, CVec3::real(1.0, 0.0, 0.0), real(1.0), &k),
            Err(EmError::ZeroWaveVector)
        );
    }

    #[test]
    fn lorenz_potential_has_zero_gauge_scalar() {
        let vector = PolynomialField::new(vec![
            MonomialTerm {
                exps: [1, 1, 0, 0],
                coeff: Paravector::real(0.0, 1.0, -0.5, 0.0),
            },
            MonomialTerm {
                exps: [0, 0, 2, 1],
                coeff: Paravector::new(real(0.0), CVec3::new(real(0.3), c(0.0, 1.0), real(2.0))),
            },
        ])
        .unwrap();
        for cval in [1.0, 2.0] {
            let k = PhysConstants::new(cval, 1.0).unwrap();
            let pot = lorenz_gauge_potential(&vector, &k).unwrap();
            let em = em_from_potential(&pot, at(), &k, DiffMode::Exact);
            assert!(em.scalar.norm() <= 1e-13, "c = {cval}: {}", em.scalar);
            // ∂∂⁻ = □
            let emf = em_field(&pot, &k);
            let src = sources_field(&emf, &k);
            assert!(wave_residual(&pot, &src, at(), &k, DiffMode::Exact).max_abs() <= 1e-9);
        }
    }

    #[test]
    fn source_density_conversions() {
        let k = PhysConstants::new(2.0, 3.0).unwrap();
        let s = SourceValue {
            rho_over_eps: real(2.0),
            j_term: CVec3::real(1.0, 0.0, 0.0),
        };
        assert_eq!(s.charge_density(&k), real(6.0));
        assert_eq!(s.current_density(&k), CVec3::real(-6.0, 0.0, 0.0));
    }
}
