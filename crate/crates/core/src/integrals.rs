//! Inner products on [0, 2π].
//!
//! The exact path expands f*·g into monomials φ^d e^{ikφ} and integrates each
//! one with an integration-by-parts recurrence. The oracle path is composite
//! Gauss–Legendre on pointwise values; the integrands are not periodic once
//! d ≥ 1, so the trapezoid rule's spectral accuracy is not available.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::apply_hamiltonian;
use crate::phasefn::{Bounds, PhasePolyFourier, PhysicalConstants};

/// Absolute agreement required between the two hermiticity-defect paths at unit ħω.
pub const DEFECT_CONSISTENCY_TOL: f64 = 1e-12;

/// ∫₀^{2π} φ^d e^{ikφ} dφ.
///
/// For k ≠ 0 the upward recurrence I_d = ((2π)^d − d·I_{d−1}) / (ik), I_0 = 0
/// is used; it is well conditioned for the degrees this crate produces.
pub fn monomial_integral(d: u32, k: i64) -> Complex64 {
    if k == 0 {
        return Complex64::new(TAU.powi(d as i32 + 1) / (d as f64 + 1.0), 0.0);
    }
    let ik = Complex64::new(0.0, k as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pow = 1.0;
    for j in 1..=d {
        pow *= TAU;
        acc = (Complex64::new(pow, 0.0) - acc * j as f64) / ik;
    }
    acc
}

/// ∫₀^{2π} f(φ) dφ for a function in canonical form.
pub fn integrate(f: &PhasePolyFourier) -> Complex64 {
    let mut sum = NeumaierSum::default();
    for (d, k, c) in f.coefficients() {
        sum.add(c * monomial_integral(d, k));
    }
    sum.value()
}

/// ⟨f|g⟩ = ∫₀^{2π} f*(φ) g(φ) dφ, exactly up to rounding.
pub fn inner_product(f: &PhasePolyFourier, g: &PhasePolyFourier) -> Result<Complex64> {
    let bounds = Bounds::default();
    f.check_bounds(&bounds)?;
    g.check_bounds(&bounds)?;
    Ok(integrate(&f.conjugate().product(g)))
}

/// Composite Gauss–Legendre rule: `panels` equal subintervals of [0, 2π],
/// `nodes_per_panel` nodes in each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    panels: usize,
    nodes_per_panel: usize,
}

impl QuadratureSpec {
    pub fn new(panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if panels >= 1 && (2..=64).contains(&nodes_per_panel) {
            Ok(Self {
                panels,
                nodes_per_panel,
            })
        } else {
            Err(Error::InvalidQuadrature {
                panels,
                nodes: nodes_per_panel,
            })
        }
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 16,
            nodes_per_panel: 24,
        }
    }
}

impl fmt::Display for QuadratureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.panels, self.nodes_per_panel)
    }
}

impl FromStr for QuadratureSpec {
    type Err = Error;

    /// Parses `PxN`, e.g. `16x24`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected PANELSxNODES, got {s:?}"));
        let (p, n) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        Self::new(p, n)
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term Legendre recurrence.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite Gauss–Legendre approximation of ⟨f|g⟩ from pointwise values.
pub fn inner_product_quadrature(
    f: &PhasePolyFourier,
    g: &PhasePolyFourier,
    q: &QuadratureSpec,
) -> Complex64 {
    let rule = GaussLegendre::new(q.nodes_per_panel);
    let h = TAU / q.panels as f64;
    let mut sum = NeumaierSum::default();
    for p in 0..q.panels {
        let mid = (p as f64 + 0.5) * h;
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let x = mid + 0.5 * h * t;
            sum.add(f.evaluate(x).conj() * g.evaluate(x) * (0.5 * h * w));
        }
    }
    sum.value()
}

/// Selects how inner products are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    #[default]
    ClosedForm,
    Quadrature(QuadratureSpec),
}

impl Integrator {
    pub fn inner(&self, f: &PhasePolyFourier, g: &PhasePolyFourier) -> Result<Complex64> {
        match self {
            Self::ClosedForm => inner_product(f, g),
            Self::Quadrature(q) => Ok(inner_product_quadrature(f, g, q)),
        }
    }
}

/// Both evaluations of ⟨f|Hg⟩ − ⟨Hf|g⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectPaths {
    /// Difference of the two inner products.
    pub via_inner: Complex64,
    /// iħω·[(f*g)(2π) − (f*g)(0)].
    pub via_boundary: Complex64,
    /// Σ|c·I| over both inner products; bounds the rounding in `via_inner`.
    pub magnitude: f64,
    /// ħω.
    pub quantum: f64,
}

impl DefectPaths {
    pub fn discrepancy(&self) -> f64 {
        (self.via_inner - self.via_boundary).norm()
    }

    /// 1e-12 at unit ħω, widened to a rounding bound when the cancelling
    /// inner products are large.
    pub fn tolerance(&self) -> f64 {
        let floor = DEFECT_CONSISTENCY_TOL * self.quantum.max(1.0);
        floor.max(64.0 * f64::EPSILON * self.magnitude)
    }
}

/// Σ |c_{d,k}|·|∫φ^d e^{ikφ}|, an upper bound on every partial sum of [`integrate`].
pub fn integrate_abs(f: &PhasePolyFourier) -> f64 {
    f.coefficients()
        .map(|(d, k, c)| c.norm() * monomial_integral(d, k).norm())
        .sum()
}

/// Evaluates the hermiticity defect along both paths without judging agreement.
pub fn hermiticity_defect_paths(
    f: &PhasePolyFourier,
    g: &PhasePolyFourier,
    c: &PhysicalConstants,
) -> Result<DefectPaths> {
    let hg = apply_hamiltonian(g, c);
    let hf = apply_hamiltonian(f, c);
    let lhs = inner_product(f, &hg)?;
    let rhs = inner_product(&hf, g)?;
    let fc = f.conjugate();
    let jump = fc.product(g).period_jump();
    let magnitude = integrate_abs(&fc.product(&hg)) + integrate_abs(&hf.conjugate().product(g));
    Ok(DefectPaths {
        via_inner: lhs - rhs,
        via_boundary: Complex64::new(0.0, c.quantum()) * jump,
        magnitude,
        quantum: c.quantum(),
    })
}

/// D = ⟨f|Hg⟩ − ⟨Hf|g⟩, the failure of H to be hermitian on the pair (f, g).
///
/// Zero whenever both functions are periodic. The inner-product difference and
/// the boundary term must agree, otherwise [`Error::Inconsistency`] is returned.
pub fn hermiticity_defect(
    f: &PhasePolyFourier,
    g: &PhasePolyFourier,
    c: &PhysicalConstants,
) -> Result<Complex64> {
    let paths = hermiticity_defect_paths(f, g, c)?;
    // Negated so that a NaN discrepancy is reported as inconsistent.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(paths.discrepancy() <= paths.tolerance()) {
        return Err(Error::Inconsistency {
            via_inner: paths.via_inner,
            via_boundary: paths.via_boundary,
        });
    }
    Ok(paths.via_boundary)
}

/// Compensated summation of complex terms.
#[derive(Debug, Default, Clone, Copy)]
struct NeumaierSum {
    sum: Complex64,
    comp: Complex64,
}

impl NeumaierSum {
    fn add(&mut self, x: Complex64) {
        let step = |s: &mut f64, c: &mut f64, x: f64| {
            let t = *s + x;
            if s.abs() >= x.abs() {
                *c += (*s - t) + x;
            } else {
                *c += (x - t) + *s;
            }
            *s = t;
        };
        step(&mut self.sum.re, &mut self.comp.re, x.re);
        step(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}
