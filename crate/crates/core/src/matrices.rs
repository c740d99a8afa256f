//! Matrix elements ⟨m|·|n⟩ over a window of Fock states.
//!
//! The "correct" commutator integrates e_m* against H applied to the aperiodic
//! function φ·e_n, so the boundary term from integration by parts is kept. The
//! "naive" commutator inserts the spectrum of H on the bra side, i.e. assumes H
//! is hermitian on φ·e_n, and reproduces the relation
//! ⟨m|[B,H]|n⟩ = (n−m)ħω⟨m|B|n⟩. The two differ by iħ in every entry.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::{hermiticity_defect, Integrator};
use crate::operators::apply_hamiltonian;
use crate::phasefn::{fock_eigenfunction, PhysicalConstants};

pub const DEFAULT_WINDOW_CAP: usize = 512;
pub const WINDOW_CAP_ENV: &str = "OSCITIME_MAX_WINDOW";

// Below this many entries a single thread is faster.
const PARALLEL_THRESHOLD: usize = 1024;

/// Largest admissible window dimension; `OSCITIME_MAX_WINDOW` overrides the default of 512.
pub fn window_cap() -> usize {
    std::env::var(WINDOW_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_WINDOW_CAP)
}

/// Contiguous range of oscillator quantum numbers [n_min, n_max].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockWindow {
    n_min: i64,
    n_max: i64,
}

impl FockWindow {
    /// A window of physical states, n_min ≥ 0.
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min < 0 {
            return Err(Error::InvalidWindow {
                n_min,
                n_max,
                reason: "negative quantum numbers need an explicit override",
            });
        }
        Self::with_negative(n_min, n_max)
    }

    /// A window that may include negative n.
    pub fn with_negative(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::InvalidWindow {
                n_min,
                n_max,
                reason: "n_min must not exceed n_max",
            });
        }
        Ok(Self { n_min, n_max })
    }

    /// Parses `a:b` (inclusive).
    pub fn parse(s: &str, allow_negative: bool) -> Result<Self> {
        let bad = || Error::Parse(format!("expected window as a:b, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        if allow_negative {
            Self::with_negative(a, b)
        } else {
            Self::new(a, b)
        }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn states(&self) -> RangeInclusive<i64> {
        self.n_min..=self.n_max
    }

    pub fn index_of(&self, n: i64) -> Option<usize> {
        self.states().contains(&n).then(|| (n - self.n_min) as usize)
    }

    fn check_cap(&self) -> Result<()> {
        let cap = window_cap();
        if self.dim() > cap {
            Err(Error::WindowTooLarge {
                dim: self.dim(),
                cap,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for FockWindow {
    fn default() -> Self {
        Self { n_min: 0, n_max: 15 }
    }
}

impl FromStr for FockWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, false)
    }
}

/// Dense matrix of elements ⟨m|A|n⟩, row m, column n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct OperatorMatrix {
    label: String,
    window: FockWindow,
    constants: PhysicalConstants,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    /// Builds a matrix from an element function. Large windows are filled by
    /// several threads, one contiguous block of rows each.
    pub fn from_fn<F>(
        label: impl Into<String>,
        window: FockWindow,
        constants: PhysicalConstants,
        element: F,
    ) -> Result<Self>
    where
        F: Fn(i64, i64) -> Result<Complex64> + Sync,
    {
        window.check_cap()?;
        let dim = window.dim();
        let fill_rows = |rows: std::ops::Range<usize>, out: &mut [Complex64]| -> Result<()> {
            for (slot, idx) in out.iter_mut().zip(rows.start * dim..rows.end * dim) {
                let m = window.n_min + (idx / dim) as i64;
                let n = window.n_min + (idx % dim) as i64;
                *slot = element(m, n)?;
            }
            Ok(())
        };
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(dim);
        if dim * dim < PARALLEL_THRESHOLD || workers <= 1 {
            fill_rows(0..dim, &mut entries)?;
        } else {
            let rows_per = dim.div_ceil(workers);
            std::thread::scope(|scope| {
                let handles: Vec<_> = entries
                    .chunks_mut(rows_per * dim)
                    .enumerate()
                    .map(|(i, chunk)| {
                        let start = i * rows_per;
                        let end = start + chunk.len() / dim;
                        let fill_rows = &fill_rows;
                        scope.spawn(move || fill_rows(start..end, chunk))
                    })
                    .collect();
                handles
                    .into_iter()
                    .try_for_each(|h| h.join().expect("matrix worker panicked"))
            })?;
        }
        Ok(Self {
            label: label.into(),
            window,
            constants,
            entries,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn window(&self) -> FockWindow {
        self.window
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Entry by array position.
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    /// ⟨m|A|n⟩ by quantum numbers.
    pub fn get(&self, m: i64, n: i64) -> Option<Complex64> {
        let i = self.window.index_of(m)?;
        let j = self.window.index_of(n)?;
        Some(self.at(i, j))
    }

    /// (m, n, value) in row-major order.
    pub fn elements(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let w = self.window;
        let dim = self.dim();
        self.entries.iter().enumerate().map(move |(idx, &v)| {
            (w.n_min + (idx / dim) as i64, w.n_min + (idx % dim) as i64, v)
        })
    }

    fn zip_with(
        &self,
        other: &Self,
        label: &str,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.window != other.window {
            return Err(Error::ShapeMismatch(self.dim(), other.dim()));
        }
        Ok(Self {
            label: label.to_owned(),
            window: self.window,
            constants: self.constants,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, &format!("{}-{}", self.label, other.label), |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|&v| v * c).collect(),
            ..self.clone()
        }
    }

    /// Ordinary matrix product on the window.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.window != other.window {
            return Err(Error::ShapeMismatch(self.dim(), other.dim()));
        }
        let dim = self.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.at(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    entries[i * dim + j] += a * other.at(k, j);
                }
            }
        }
        Ok(Self {
            label: format!("{}*{}", self.label, other.label),
            window: self.window,
            constants: self.constants,
            entries,
        })
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.sub(&ba)?.with_label(format!("[{},{}]", self.label, other.label)))
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(self.at(j, i).conj());
            }
        }
        Self {
            label: format!("{}^dagger", self.label),
            entries,
            ..self.clone()
        }
    }

    /// max |A − A†|.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst
    }

    /// max |entry| − min |entry|.
    pub fn magnitude_spread(&self) -> f64 {
        let (lo, hi) = self
            .entries
            .iter()
            .map(|v| v.norm())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        hi - lo
    }

    /// Header `m,n,re,im`, one row per entry, shortest round-trip float text.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,re,im\n");
        for (m, n, v) in self.elements() {
            let _ = writeln!(out, "{m},{n},{},{}", v.re, v.im);
        }
        out
    }

    /// Parses the CSV layout of [`to_csv`](Self::to_csv). The window is inferred
    /// from the rows, which must cover it completely.
    pub fn from_csv(label: &str, constants: PhysicalConstants, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "m,n,re,im" => {}
            other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
        }
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!("bad CSV row {line:?}")));
            }
            let p = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()));
            let q = |s: &str| s.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()));
            rows.push((q(fields[0])?, q(fields[1])?, Complex64::new(p(fields[2])?, p(fields[3])?)));
        }
        let lo = rows.iter().map(|r| r.0.min(r.1)).min();
        let hi = rows.iter().map(|r| r.0.max(r.1)).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::Parse("empty CSV".into()));
        };
        let window = FockWindow::with_negative(lo, hi)?;
        if rows.len() != window.dim() * window.dim() {
            return Err(Error::Parse(format!(
                "expected {} rows for window {lo}:{hi}, got {}",
                window.dim() * window.dim(),
                rows.len()
            )));
        }
        let mut entries = vec![None; rows.len()];
        for (m, n, v) in rows {
            let idx = window.index_of(m).unwrap() * window.dim() + window.index_of(n).unwrap();
            if entries[idx].replace(v).is_some() {
                return Err(Error::Parse(format!("duplicate entry ({m},{n})")));
            }
        }
        Ok(Self {
            label: label.to_owned(),
            window,
            constants,
            entries: entries.into_iter().map(Option::unwrap).collect(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EntryRepr {
    re: f64,
    im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixRepr {
    label: String,
    hbar: f64,
    omega: f64,
    window: FockWindow,
    entries: Vec<Vec<EntryRepr>>,
}

impl From<OperatorMatrix> for MatrixRepr {
    fn from(m: OperatorMatrix) -> Self {
        let dim = m.dim();
        Self {
            hbar: m.constants.hbar(),
            omega: m.constants.omega(),
            window: m.window,
            entries: m
                .entries
                .chunks(dim)
                .map(|row| row.iter().map(|v| EntryRepr { re: v.re, im: v.im }).collect())
                .collect(),
            label: m.label,
        }
    }
}

impl TryFrom<MatrixRepr> for OperatorMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let window = FockWindow::with_negative(r.window.n_min, r.window.n_max)?;
        let constants = PhysicalConstants::new(r.hbar, r.omega)?;
        let dim = window.dim();
        if r.entries.len() != dim || r.entries.iter().any(|row| row.len() != dim) {
            return Err(Error::Parse(format!("entries do not form a {dim}x{dim} matrix")));
        }
        let entries = r
            .entries
            .into_iter()
            .flatten()
            .map(|e| Complex64::new(e.re, e.im))
            .collect();
        Ok(Self {
            label: r.label,
            window,
            constants,
            entries,
        })
    }
}

/// ⟨m|φ|n⟩ = ∫₀^{2π} e_m* φ e_n dφ, exactly: −i/(m−n) off the diagonal and π on it.
pub fn phase_matrix(w: FockWindow) -> Result<OperatorMatrix> {
    phase_matrix_with(w, &Integrator::ClosedForm)
}

pub fn phase_matrix_with(w: FockWindow, integrator: &Integrator) -> Result<OperatorMatrix> {
    OperatorMatrix::from_fn("phase", w, PhysicalConstants::unit(), |m, n| {
        integrator.inner(&fock_eigenfunction(m), &fock_eigenfunction(n).mul_by_phase())
    })
}

/// ⟨m|χ|n⟩ = ((π/2)δ_mn − ⟨m|φ|n⟩)/ω, taking G(H) = 0.
pub fn time_matrix(w: FockWindow, c: PhysicalConstants) -> Result<OperatorMatrix> {
    time_matrix_with(w, c, &Integrator::ClosedForm)
}

pub fn time_matrix_with(
    w: FockWindow,
    c: PhysicalConstants,
    integrator: &Integrator,
) -> Result<OperatorMatrix> {
    let phase = phase_matrix_with(w, integrator)?;
    let inv = 1.0 / c.omega();
    OperatorMatrix::from_fn("time", w, c, |m, n| {
        let diag = if m == n { FRAC_PI_2 } else { 0.0 };
        Ok((Complex64::new(diag, 0.0) - phase.get(m, n).unwrap()) * inv)
    })
}

/// ⟨m|[χ,H]|n⟩ = −(n+½)ħ⟨m|φ|n⟩ + (1/ω)⟨e_m|H(φ e_n)⟩, with H applied to the
/// aperiodic ket before integrating. Equals iħδ_mn.
pub fn commutator_matrix_correct(w: FockWindow, c: PhysicalConstants) -> Result<OperatorMatrix> {
    commutator_matrix_correct_with(w, c, &Integrator::ClosedForm)
}

pub fn commutator_matrix_correct_with(
    w: FockWindow,
    c: PhysicalConstants,
    integrator: &Integrator,
) -> Result<OperatorMatrix> {
    let phase = phase_matrix_with(w, integrator)?;
    OperatorMatrix::from_fn("commutator_correct", w, c, |m, n| {
        let phi_en = fock_eigenfunction(n).mul_by_phase();
        let h_phi_en = apply_hamiltonian(&phi_en, &c);
        let h_term = integrator.inner(&fock_eigenfunction(m), &h_phi_en)? / c.omega();
        Ok(h_term - phase.get(m, n).unwrap() * ((n as f64 + 0.5) * c.hbar()))
    })
}

/// (n−m)ħω⟨m|χ|n⟩: what the commutator would be if H were hermitian on φ e_n.
pub fn commutator_matrix_naive(w: FockWindow, c: PhysicalConstants) -> Result<OperatorMatrix> {
    let time = time_matrix(w, c)?;
    OperatorMatrix::from_fn("commutator_naive", w, c, |m, n| {
        Ok(time.get(m, n).unwrap() * ((n - m) as f64 * c.quantum()))
    })
}

/// correct − naive; iħ in every entry.
pub fn paradox_gap(w: FockWindow, c: PhysicalConstants) -> Result<OperatorMatrix> {
    let correct = commutator_matrix_correct(w, c)?;
    let naive = commutator_matrix_naive(w, c)?;
    Ok(correct.sub(&naive)?.with_label("paradox_gap"))
}

/// hermiticity_defect(e_m, φ e_n); iħω in every entry.
pub fn hermiticity_defect_matrix(w: FockWindow, c: PhysicalConstants) -> Result<OperatorMatrix> {
    OperatorMatrix::from_fn("hermiticity_defect", w, c, |m, n| {
        hermiticity_defect(&fock_eigenfunction(m), &fock_eigenfunction(n).mul_by_phase(), &c)
    })
}

/// hermiticity_defect(e_m, e_n) on periodic pairs; identically zero.
pub fn periodic_defect_matrix(w: FockWindow, c: PhysicalConstants) -> Result<OperatorMatrix> {
    OperatorMatrix::from_fn("periodic_defect", w, c, |m, n| {
        hermiticity_defect(&fock_eigenfunction(m), &fock_eigenfunction(n), &c)
    })
}

/// H restricted to the window: diag((n+½)ħω).
pub fn hamiltonian_matrix(w: FockWindow, c: PhysicalConstants) -> Result<OperatorMatrix> {
    OperatorMatrix::from_fn("hamiltonian", w, c, |m, n| {
        let v = if m == n { (n as f64 + 0.5) * c.quantum() } else { 0.0 };
        Ok(Complex64::new(v, 0.0))
    })
}

/// (n−m)ħω·B_mn, the right-hand side of the naive relation for a window-confined B.
pub fn naive_relation(b: &OperatorMatrix, c: PhysicalConstants) -> Result<OperatorMatrix> {
    OperatorMatrix::from_fn("naive_relation", b.window(), c, |m, n| {
        Ok(b.get(m, n).unwrap() * ((n - m) as f64 * c.quantum()))
    })
}

/// Reference a matrix is compared against in a [`ResidualReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// iħ·I
    IhbarIdentity,
    Zero,
    /// The same value in every entry.
    Uniform(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub frobenius: f64,
    /// (m, n) of the largest deviation.
    pub worst: (i64, i64),
}

pub fn residual_report(matrix: &OperatorMatrix, target: Target) -> ResidualReport {
    let hbar = matrix.constants().hbar();
    let mut report = ResidualReport {
        max_abs: 0.0,
        frobenius: 0.0,
        worst: (matrix.window().n_min(), matrix.window().n_min()),
    };
    let mut sq = 0.0;
    for (m, n, v) in matrix.elements() {
        let expected = match target {
            Target::IhbarIdentity if m == n => Complex64::new(0.0, hbar),
            Target::IhbarIdentity | Target::Zero => Complex64::new(0.0, 0.0),
            Target::Uniform(u) => u,
        };
        let dev = (v - expected).norm();
        sq += dev * dev;
        if dev > report.max_abs {
            report.max_abs = dev;
            report.worst = (m, n);
        }
    }
    report.frobenius = sq.sqrt();
    report
}
