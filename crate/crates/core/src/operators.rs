//! Operators in the phase representation.
//!
//! H = iħω d/dφ + ħω/2, φ acts by multiplication and χ = (π/2 − φ)/ω.
//! Every action is defined on the full [`PhasePolyFourier`] space, including
//! aperiodic functions such as φ itself.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::phasefn::{Bounds, PhasePolyFourier, PhysicalConstants};

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseRepOperator {
    /// f ↦ iħω f′ + (ħω/2) f
    Hamiltonian(PhysicalConstants),
    /// f ↦ φ f
    Phase,
    /// f ↦ ((π/2) f − φ f) / ω
    Time(PhysicalConstants),
    /// f ↦ a f′ + m f
    Custom {
        derivative: Complex64,
        multiplier: PhasePolyFourier,
    },
}

impl PhaseRepOperator {
    pub fn hamiltonian(c: PhysicalConstants) -> Self {
        Self::Hamiltonian(c)
    }

    pub fn time(c: PhysicalConstants) -> Self {
        Self::Time(c)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hamiltonian(_) => "hamiltonian",
            Self::Phase => "phase",
            Self::Time(_) => "time",
            Self::Custom { .. } => "custom",
        }
    }

    /// Applies the operator and checks the result against `bounds`.
    pub fn apply_within(&self, f: &PhasePolyFourier, bounds: &Bounds) -> Result<PhasePolyFourier> {
        let out = match self {
            Self::Hamiltonian(c) => apply_hamiltonian(f, c),
            Self::Phase => apply_phase(f),
            Self::Time(c) => apply_time(f, c),
            Self::Custom {
                derivative,
                multiplier,
            } => f.differentiate().scale(*derivative).add(&multiplier.product(f)),
        };
        out.check_bounds(bounds)?;
        Ok(out)
    }

    pub fn apply(&self, f: &PhasePolyFourier) -> Result<PhasePolyFourier> {
        self.apply_within(f, &Bounds::default())
    }
}

pub fn apply_hamiltonian(f: &PhasePolyFourier, c: &PhysicalConstants) -> PhasePolyFourier {
    let q = c.quantum();
    f.differentiate()
        .scale(Complex64::new(0.0, q))
        .add(&f.scale(Complex64::new(0.5 * q, 0.0)))
}

pub fn apply_phase(f: &PhasePolyFourier) -> PhasePolyFourier {
    f.mul_by_phase()
}

/// χ with G(H) = 0.
pub fn apply_time(f: &PhasePolyFourier, c: &PhysicalConstants) -> PhasePolyFourier {
    let inv = 1.0 / c.omega();
    f.scale(Complex64::new(FRAC_PI_2 * inv, 0.0))
        .sub(&f.mul_by_phase().scale(Complex64::new(inv, 0.0)))
}

/// A(B f) − B(A f).
pub fn commutator_action(
    a: &PhaseRepOperator,
    b: &PhaseRepOperator,
    f: &PhasePolyFourier,
) -> Result<PhasePolyFourier> {
    let bounds = Bounds::default();
    f.check_bounds(&bounds)?;
    let ab = a.apply_within(&b.apply_within(f, &bounds)?, &bounds)?;
    let ba = b.apply_within(&a.apply_within(f, &bounds)?, &bounds)?;
    Ok(ab.sub(&ba))
}
