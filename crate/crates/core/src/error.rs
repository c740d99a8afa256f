use thiserror::Error;

/// Errors produced by the oscitime library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("harmonic support overflow: |k| = {k} exceeds bound {bound}")]
    HarmonicOverflow { k: i64, bound: i64 },

    #[error("series support overflow: {len} harmonics exceeds bound {bound}")]
    SupportOverflow { len: usize, bound: usize },

    #[error("degree overflow: degree {degree} exceeds bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },

    #[error("invalid physical constants: hbar = {hbar}, omega = {omega} (both must be finite and > 0)")]
    InvalidConstants { hbar: f64, omega: f64 },

    #[error("invalid Fock window [{n_min}, {n_max}]: {reason}")]
    InvalidWindow {
        n_min: i64,
        n_max: i64,
        reason: &'static str,
    },

    #[error("Fock window of dimension {dim} exceeds the cap of {cap}")]
    WindowTooLarge { dim: usize, cap: usize },

    #[error("invalid quadrature spec {panels}x{nodes}: panels >= 1 and nodes in [2, 64] required")]
    InvalidQuadrature { panels: usize, nodes: usize },

    #[error(
        "internal inconsistency: inner-product difference {via_inner} disagrees with boundary term {via_boundary}"
    )]
    Inconsistency {
        via_inner: num_complex::Complex64,
        via_boundary: num_complex::Complex64,
    },

    #[error("matrix shape mismatch: {0} vs {1}")]
    ShapeMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
