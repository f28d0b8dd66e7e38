//! Seeded random inputs for the identity checks.
//!
//! Streams come from ChaCha8 seeded with the user seed; every `(suite, case)`
//! pair gets its own ChaCha stream id, so adding cases never shifts the
//! inputs of existing ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{c, CVec3, ComplexScalar, Event, Paravector};
use crate::fields::{
    Exponents, Field, MonomialTerm, PlaneWaveField, PolynomialField, ScalarField, ScalarTerm,
};

/// Smallest `|det|` accepted for randomly drawn paravectors.
pub const MIN_DET: f64 = 0.1;

/// Deterministic generator of paravectors, events and fields.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent substream `(domain, index)` of `seed`.
    pub fn substream(seed: u64, domain: u32, index: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((domain as u64) << 32) | index as u64);
        Sampler { rng }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Complex number with modulus at most `scale`.
    pub fn complex(&mut self, scale: f64) -> ComplexScalar {
        let r = scale * std::f64::consts::FRAC_1_SQRT_2;
        c(self.uniform(-r, r), self.uniform(-r, r))
    }

    pub fn cvec3(&mut self, scale: f64) -> CVec3 {
        CVec3::new(
            self.complex(scale),
            self.complex(scale),
            self.complex(scale),
        )
    }

    /// Paravector with all components bounded by `scale`, no determinant check.
    pub fn any_paravector(&mut self, scale: f64) -> Paravector {
        Paravector::new(self.complex(scale), self.cvec3(scale))
    }

    /// Paravector with components bounded by `scale`, redrawn until `|det| ≥ 0.1`.
    pub fn paravector(&mut self, scale: f64) -> Paravector {
        self.conditioned(scale, MIN_DET)
    }

    /// Paravector with components bounded by `scale`, redrawn until `|det| ≥ min_det`.
    pub fn conditioned(&mut self, scale: f64, min_det: f64) -> Paravector {
        loop {
            let p = self.any_paravector(scale);
            if p.det().norm() >= min_det {
                return p;
            }
        }
    }

    /// Unit-determinant paravector with components bounded by `scale`,
    /// obtained by normalizing non-singular draws.
    pub fn orthogonal(&mut self, scale: f64) -> Paravector {
        loop {
            let l = self
                .paravector(scale)
                .normalize_orthogonal()
                .expect("|det| >= 0.1 is never singular");
            if l.max_abs() <= scale {
                return l;
            }
        }
    }

    /// Event with real parts in `[-re, re]` and imaginary parts in `[-im, im]`.
    pub fn event(&mut self, re: f64, im: f64) -> Event {
        let mut coord = || c(self.uniform(-re, re), self.uniform(-im, im));
        Event::from_coords([coord(), coord(), coord(), coord()])
    }

    fn exponents(&mut self, degree: u32, count: usize) -> Vec<Exponents> {
        let d = degree.min(crate::fields::DEGREE_CAP) as u8;
        let mut pool: Vec<Exponents> = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                for cc in 0..=d - a - b {
                    for e in 0..=d - a - b - cc {
                        pool.push([a, b, cc, e]);
                    }
                }
            }
        }
        let count = count.min(pool.len());
        // partial Fisher-Yates
        for i in 0..count {
            let j = i + self.below(pool.len() - i);
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }

    /// Sparse polynomial of total degree ≤ `degree` with 2 to 6 terms.
    pub fn polynomial(&mut self, degree: u32, scale: f64) -> PolynomialField {
        let count = 2 + self.below(5);
        let terms = self
            .exponents(degree, count)
            .into_iter()
            .map(|exps| MonomialTerm {
                exps,
                coeff: self.any_paravector(scale),
            })
            .collect();
        PolynomialField::new(terms).expect("exponents are distinct and below the cap")
    }

    pub fn scalar_field(&mut self, degree: u32, scale: f64) -> ScalarField {
        let count = 2 + self.below(4);
        let terms = self
            .exponents(degree, count)
            .into_iter()
            .map(|exps| ScalarTerm {
                exps,
                coeff: self.complex(scale),
            })
            .collect();
        ScalarField::new(terms).expect("exponents are distinct and below the cap")
    }

    /// Plane wave with wave numbers and amplitude bounded by `scale`.
    pub fn plane_wave(&mut self, scale: f64) -> PlaneWaveField {
        PlaneWaveField {
            kappa0: self.complex(scale),
            kappa: self.cvec3(scale),
            amp: self.any_paravector(scale),
        }
    }

    /// Plane wave whose phase is null (`κ₀² = κ·κ`), so `□` annihilates it.
    pub fn null_plane_wave(&mut self, scale: f64) -> PlaneWaveField {
        let kappa = self.cvec3(scale);
        PlaneWaveField {
            kappa0: kappa.dot(kappa).sqrt(),
            kappa,
            amp: self.any_paravector(scale),
        }
    }
}

pub fn random_field(seed: u64, degree: u32, scale: f64) -> Field {
    Field::Polynomial(Sampler::new(seed).polynomial(degree, scale))
}

pub fn random_paravector(seed: u64) -> Paravector {
    Sampler::new(seed).paravector(2.0)
}

pub fn random_event(seed: u64) -> Event {
    Sampler::new(seed).event(1.0, 0.5)
}
