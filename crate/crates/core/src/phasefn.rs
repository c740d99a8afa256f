//! Functions of the phase variable: finite Fourier series multiplied by
//! polynomials in φ.
//!
//! A [`PhasePolyFourier`] represents Σ_d φ^d · Σ_k c_{d,k} e^{ikφ}. The space is
//! closed under d/dφ, multiplication by φ and multiplication by periodic
//! functions, so the Hamiltonian, phase and time operators all act inside it.
//! Degree-0 elements are exactly the 2π-periodic functions; anything with a
//! positive degree is aperiodic on the fundamental interval [0, 2π].
//!
//! Storage is canonical: a coefficient is dropped only when it is exactly zero,
//! so algebraic cancellations produce the empty function bit-for-bit.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEGREE: u32 = 8;
pub const DEFAULT_MAX_HARMONIC: i64 = 2048;
pub const DEFAULT_MAX_SUPPORT: usize = 4096;

/// Growth limits for degree and harmonic content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_degree: u32,
    pub max_harmonic: i64,
    pub max_support: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
            max_harmonic: DEFAULT_MAX_HARMONIC,
            max_support: DEFAULT_MAX_SUPPORT,
        }
    }
}

/// ħ (action) and ω (inverse time).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    hbar: f64,
    omega: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, omega: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(hbar) && ok(omega) {
            Ok(Self { hbar, omega })
        } else {
            Err(Error::InvalidConstants { hbar, omega })
        }
    }

    /// ħ = ω = 1.
    pub const fn unit() -> Self {
        Self {
            hbar: 1.0,
            omega: 1.0,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// ħω, the level spacing.
    pub fn quantum(&self) -> f64 {
        self.hbar * self.omega
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::unit()
    }
}

#[inline]
fn is_exact_zero(c: Complex64) -> bool {
    c.re == 0.0 && c.im == 0.0
}

/// Finite Fourier series Σ_k c_k e^{ikφ}.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FourierSeries {
    coeffs: BTreeMap<i64, Complex64>,
}

impl FourierSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    /// c · e^{ikφ}.
    pub fn single(k: i64, c: Complex64) -> Self {
        let mut s = Self::zero();
        s.accumulate(k, c);
        s
    }

    pub fn constant(c: Complex64) -> Self {
        Self::single(0, c)
    }

    /// Builds a series from (k, c_k) pairs. Repeated harmonics are summed.
    pub fn from_coeffs<I>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut s = Self::zero();
        for (k, c) in coeffs {
            s.accumulate(k, c);
        }
        s.check_bounds(&Bounds::default())?;
        Ok(s)
    }

    fn accumulate(&mut self, k: i64, c: Complex64) {
        if is_exact_zero(c) {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if is_exact_zero(*slot) {
            self.coeffs.remove(&k);
        }
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    /// Harmonics in ascending order of k.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |k| present, 0 for the zero series.
    pub fn max_harmonic(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Σ_k c_k, the value at any multiple of 2π.
    pub fn sum(&self) -> Complex64 {
        self.coeffs.values().sum()
    }

    pub fn check_bounds(&self, bounds: &Bounds) -> Result<()> {
        if self.len() > bounds.max_support {
            return Err(Error::SupportOverflow {
                len: self.len(),
                bound: bounds.max_support,
            });
        }
        let k = self.max_harmonic();
        if k > bounds.max_harmonic {
            return Err(Error::HarmonicOverflow {
                k,
                bound: bounds.max_harmonic,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.accumulate(k, c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (k, a) in self.iter() {
            out.accumulate(k, a * c);
        }
        out
    }

    /// Complex conjugate as a function of real φ: c_k → conj(c_{-k}).
    pub fn conjugate(&self) -> Self {
        Self {
            coeffs: self.iter().map(|(k, c)| (-k, c.conj())).collect(),
        }
    }

    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.iter() {
            out.accumulate(k, c * Complex64::new(0.0, k as f64));
        }
        out
    }

    /// Harmonic convolution without bound checks.
    pub(crate) fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, a) in self.iter() {
            for (kb, b) in other.iter() {
                out.accumulate(ka + kb, a * b);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self, bounds: &Bounds) -> Result<Self> {
        // Extreme harmonics may cancel, so the bound applies to the actual result.
        let out = self.convolve(other);
        out.check_bounds(bounds)?;
        Ok(out)
    }

    pub fn evaluate(&self, phi: f64) -> Complex64 {
        self.iter()
            .map(|(k, c)| c * Complex64::cis(k as f64 * phi))
            .sum()
    }
}

/// Σ_d φ^d · (Fourier series), the function space closed under H, φ· and χ·.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "FunctionRepr", try_from = "FunctionRepr")]
pub struct PhasePolyFourier {
    terms: BTreeMap<u32, FourierSeries>,
}

impl PhasePolyFourier {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The phase variable φ itself.
    pub fn phase() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    /// e^{ikφ}.
    pub fn exp(k: i64) -> Self {
        Self::monomial(0, k, Complex64::new(1.0, 0.0))
    }

    /// c · φ^d · e^{ikφ}.
    pub fn monomial(degree: u32, k: i64, c: Complex64) -> Self {
        let mut f = Self::zero();
        f.accumulate(degree, k, c);
        f
    }

    /// Builds a function from (degree, series) pairs. Repeated degrees are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, FourierSeries)>,
    {
        let mut f = Self::zero();
        for (d, s) in terms {
            for (k, c) in s.iter() {
                f.accumulate(d, k, c);
            }
        }
        f
    }

    fn accumulate(&mut self, degree: u32, k: i64, c: Complex64) {
        if is_exact_zero(c) {
            return;
        }
        let series = self.terms.entry(degree).or_default();
        series.accumulate(k, c);
        if series.is_zero() {
            self.terms.remove(&degree);
        }
    }

    fn accumulate_series(&mut self, degree: u32, s: &FourierSeries, factor: Complex64) {
        for (k, c) in s.iter() {
            self.accumulate(degree, k, c * factor);
        }
    }

    /// Terms in ascending degree.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &FourierSeries)> + '_ {
        self.terms.iter().map(|(&d, s)| (d, s))
    }

    pub fn term(&self, degree: u32) -> Option<&FourierSeries> {
        self.terms.get(&degree)
    }

    pub fn coefficient(&self, degree: u32, k: i64) -> Complex64 {
        self.term(degree).map(|s| s.get(k)).unwrap_or_default()
    }

    /// Iterates every (degree, k, coefficient) triple in canonical order.
    pub fn coefficients(&self) -> impl Iterator<Item = (u32, i64, Complex64)> + '_ {
        self.terms()
            .flat_map(|(d, s)| s.iter().map(move |(k, c)| (d, k, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of φ present; 0 for periodic functions and for zero.
    pub fn degree_max(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_periodic(&self) -> bool {
        self.degree_max() == 0
    }

    pub fn max_harmonic(&self) -> i64 {
        self.terms.values().map(FourierSeries::max_harmonic).max().unwrap_or(0)
    }

    pub fn check_bounds(&self, bounds: &Bounds) -> Result<()> {
        let degree = self.degree_max();
        if degree > bounds.max_degree {
            return Err(Error::DegreeOverflow {
                degree,
                bound: bounds.max_degree,
            });
        }
        self.terms.values().try_for_each(|s| s.check_bounds(bounds))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, s) in other.terms() {
            out.accumulate_series(d, s, Complex64::new(1.0, 0.0));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, s) in other.terms() {
            out.accumulate_series(d, s, Complex64::new(-1.0, 0.0));
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (d, s) in self.terms() {
            out.accumulate_series(d, s, c);
        }
        out
    }

    /// φ · f: every degree shifts up by one.
    pub fn mul_by_phase(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&d, s)| (d + 1, s.clone())).collect(),
        }
    }

    /// Product rule, term by term.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (d, s) in self.terms() {
            if d > 0 {
                out.accumulate_series(d - 1, s, Complex64::new(d as f64, 0.0));
            }
            out.accumulate_series(d, &s.differentiate(), Complex64::new(1.0, 0.0));
        }
        out
    }

    /// Pointwise complex conjugate for real φ.
    pub fn conjugate(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&d, s)| (d, s.conjugate())).collect(),
        }
    }

    pub fn evaluate(&self, phi: f64) -> Complex64 {
        self.terms()
            .map(|(d, s)| s.evaluate(phi) * phi.powi(d as i32))
            .sum()
    }

    /// f(2π) − f(0), using that every Fourier factor takes the same value at both ends.
    pub fn period_jump(&self) -> Complex64 {
        self.terms()
            .filter(|&(d, _)| d > 0)
            .map(|(d, s)| s.sum() * TAU.powi(d as i32))
            .sum()
    }

    pub fn mul_by_fourier(&self, g: &FourierSeries) -> Result<Self> {
        self.mul_by_fourier_within(g, &Bounds::default())
    }

    pub fn mul_by_fourier_within(&self, g: &FourierSeries, bounds: &Bounds) -> Result<Self> {
        let mut out = Self::zero();
        for (d, s) in self.terms() {
            let prod = s.mul(g, bounds)?;
            out.accumulate_series(d, &prod, Complex64::new(1.0, 0.0));
        }
        Ok(out)
    }

    /// Full pointwise product, unchecked. Degrees add and harmonics convolve.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (da, sa) in self.terms() {
            for (db, sb) in other.terms() {
                out.accumulate_series(da + db, &sa.convolve(sb), Complex64::new(1.0, 0.0));
            }
        }
        out
    }

    /// Drops coefficients with magnitude at most `eps`. Display helper only.
    pub fn prune(&self, eps: f64) -> Self {
        let mut out = Self::zero();
        for (d, k, c) in self.coefficients() {
            if c.norm() > eps {
                out.accumulate(d, k, c);
            }
        }
        out
    }
}

/// ⟨φ|n⟩ = e^{−inφ}/√(2π).
pub fn fock_eigenfunction(n: i64) -> PhasePolyFourier {
    PhasePolyFourier::monomial(0, -n, Complex64::new(1.0 / (2.0 * PI).sqrt(), 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct HarmonicRepr {
    k: i64,
    re: f64,
    im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TermRepr {
    degree: u32,
    harmonics: Vec<HarmonicRepr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FunctionRepr {
    terms: Vec<TermRepr>,
}

impl From<PhasePolyFourier> for FunctionRepr {
    fn from(f: PhasePolyFourier) -> Self {
        let terms = f
            .terms()
            .map(|(degree, s)| TermRepr {
                degree,
                harmonics: s
                    .iter()
                    .map(|(k, c)| HarmonicRepr { k, re: c.re, im: c.im })
                    .collect(),
            })
            .collect();
        Self { terms }
    }
}

impl TryFrom<FunctionRepr> for PhasePolyFourier {
    type Error = Error;

    fn try_from(repr: FunctionRepr) -> Result<Self> {
        let mut f = PhasePolyFourier::zero();
        for term in repr.terms {
            if f.terms.contains_key(&term.degree) {
                return Err(Error::Parse(format!("duplicate degree {}", term.degree)));
            }
            let mut seen = std::collections::BTreeSet::new();
            for h in term.harmonics {
                if !seen.insert(h.k) {
                    return Err(Error::Parse(format!(
                        "duplicate harmonic {} in degree {}",
                        h.k, term.degree
                    )));
                }
                if !(h.re.is_finite() && h.im.is_finite()) {
                    return Err(Error::Parse(format!("non-finite coefficient at k = {}", h.k)));
                }
                f.accumulate(term.degree, h.k, Complex64::new(h.re, h.im));
            }
        }
        Ok(f)
    }
}
