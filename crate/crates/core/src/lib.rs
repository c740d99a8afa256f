//! Time operator of the quantum harmonic oscillator in the phase representation.
//!
//! Wave functions are functions of the phase variable φ on [0, 2π]. The
//! Hamiltonian acts as `iħω d/dφ + ħω/2`, the phase operator multiplies by φ
//! and the time operator χ satisfies `ωχ = π/2 − φ`. Because φ·|n⟩ is not
//! periodic, H is not hermitian on the space those operators generate, and
//! the matrix elements ⟨m|[χ,H]|n⟩ pick up a boundary term that turns the
//! naive `(n−m)ħω⟨m|χ|n⟩` into `iħδ_mn`.
//!
//! Modules:
//! - [`phasefn`]: the function algebra (polynomials in φ times Fourier series).
//! - [`operators`]: H, φ and χ acting on that algebra.
//! - [`integrals`]: exact inner products, a Gauss–Legendre oracle and the
//!   hermiticity defect.
//! - [`matrices`]: Fock-window matrices and residual reports.
//! - [`cli`]: the `oscitime` command-line front end.

pub mod cli;
pub mod error;
pub mod integrals;
pub mod matrices;
pub mod operators;
pub mod phasefn;

pub use error::{Error, Result};
pub use integrals::{
    hermiticity_defect, inner_product, inner_product_quadrature, monomial_integral, Integrator,
    QuadratureSpec,
};
pub use matrices::{
    commutator_matrix_correct, commutator_matrix_naive, hermiticity_defect_matrix, paradox_gap,
    phase_matrix, residual_report, time_matrix, FockWindow, OperatorMatrix, ResidualReport, Target,
};
pub use operators::{apply_hamiltonian, apply_phase, apply_time, commutator_action, PhaseRepOperator};
pub use phasefn::{fock_eigenfunction, Bounds, FourierSeries, PhasePolyFourier, PhysicalConstants};
