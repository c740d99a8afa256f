//! The `oscitime` command line.
//!
//! Exit codes: 0 success, 1 numerical check failed, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::integrals::{Integrator, QuadratureSpec};
use crate::matrices::{
    commutator_matrix_correct, commutator_matrix_naive, hermiticity_defect_matrix, paradox_gap,
    periodic_defect_matrix, phase_matrix, phase_matrix_with, residual_report, time_matrix,
    FockWindow, OperatorMatrix, Target,
};
use crate::operators::PhaseRepOperator;
use crate::phasefn::{fock_eigenfunction, PhasePolyFourier, PhysicalConstants};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerances applied by `verify`.
pub mod tolerance {
    pub const CORRECT_VS_IHBAR: f64 = 1e-10;
    pub const GAP_SPREAD: f64 = 1e-10;
    pub const GAP_VS_IHBAR: f64 = 1e-10;
    pub const DEFECT_VS_GAP: f64 = 1e-10;
    pub const QUADRATURE_PHASE: f64 = 1e-8;
}

const PHASE_NOTE: &str = "off-diagonal <m|phi|n> = -i/(m-n); the factor i is what makes \
<m|[chi,H]|n> = i*hbar*delta_mn, and a real -1/(m-n) would not. \
The diagonal is pi when integrating over [0, 2pi] (sometimes quoted as 0); no commutator depends on it.";

const TIME_NOTE: &str = "omega*chi = pi/2 - phi with G(H) = 0; any G(H) commutes with H and leaves commutators unchanged.";

#[derive(Debug, Parser)]
#[command(
    name = "oscitime",
    version,
    about = "Time operator of the quantum harmonic oscillator in the phase representation"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArg,

    /// Fock window as a:b (inclusive)
    #[arg(long, global = true, default_value = "0:15", allow_hyphen_values = true)]
    window: String,

    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,

    #[arg(long, global = true, default_value_t = 1.0)]
    omega: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Gauss-Legendre rule as PANELSxNODES, e.g. 16x24
    #[arg(long, global = true)]
    quadrature: Option<String>,

    /// Write output to PATH instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Permit negative quantum numbers
    #[arg(long, global = true)]
    allow_negative_n: bool,
}

#[derive(Debug, Clone, Subcommand)]
enum CommandArg {
    /// Matrix elements <m|phi|n>
    PhaseElements,
    /// Matrix elements <m|chi|n>
    TimeElements,
    /// Check <m|[chi,H]|n> = i*hbar*delta_mn and the related identities
    Verify,
    /// Naive, correct and gap commutator matrices side by side
    Paradox,
    /// Hermiticity defect <e_m|H(phi e_n)> - <H e_m|phi e_n> with a periodic control
    Defect,
    /// Print a phase-representation function as JSON/CSV/table
    DumpFunction {
        /// Fock state n to start from
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        state: i64,
        /// Comma-separated operators applied in order: hamiltonian, phase, time
        #[arg(long, value_delimiter = ',')]
        apply: Vec<OperatorArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    Hamiltonian,
    Phase,
    Time,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    PhaseElements,
    TimeElements,
    Verify,
    Paradox,
    Defect,
    DumpFunction { state: i64, apply: Vec<OperatorArg> },
}

/// Validated options for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub window: FockWindow,
    pub constants: PhysicalConstants,
    pub format: Format,
    pub quadrature: Option<QuadratureSpec>,
    pub output_path: Option<PathBuf>,
    pub allow_negative_n: bool,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self, Error> {
        let window = FockWindow::parse(&cli.window, cli.allow_negative_n)?;
        let constants = PhysicalConstants::new(cli.hbar, cli.omega)?;
        let quadrature = cli.quadrature.as_deref().map(str::parse).transpose()?;
        let command = match cli.command {
            CommandArg::PhaseElements => Command::PhaseElements,
            CommandArg::TimeElements => Command::TimeElements,
            CommandArg::Verify => Command::Verify,
            CommandArg::Paradox => Command::Paradox,
            CommandArg::Defect => Command::Defect,
            CommandArg::DumpFunction { state, apply } => {
                if state < 0 && !cli.allow_negative_n {
                    return Err(Error::Parse(format!(
                        "state {state} is negative; pass --allow-negative-n"
                    )));
                }
                Command::DumpFunction { state, apply }
            }
        };
        Ok(Self {
            command,
            window,
            constants,
            format: cli.format,
            quadrature,
            output_path: cli.out,
            allow_negative_n: cli.allow_negative_n,
        })
    }

    fn quadrature_or_default(&self) -> QuadratureSpec {
        self.quadrature.unwrap_or_default()
    }
}

/// Output of a command: rendered text and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Emitted {
    pub text: String,
    pub status: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let emitted = match execute(&cfg) {
        Ok(emitted) => emitted,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return match e {
                Error::Inconsistency { .. } => EXIT_CHECK_FAILED,
                _ => EXIT_USAGE,
            };
        }
    };
    let written = match &cfg.output_path {
        Some(path) => std::fs::write(path, emitted.text.as_bytes()),
        None => stdout.write_all(emitted.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    emitted.status
}

/// Runs a validated configuration.
pub fn execute(cfg: &RunConfig) -> Result<Emitted, Error> {
    match &cfg.command {
        Command::PhaseElements => cmd_phase_elements(cfg),
        Command::TimeElements => cmd_time_elements(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Paradox => cmd_paradox(cfg),
        Command::Defect => cmd_defect(cfg),
        Command::DumpFunction { state, apply } => cmd_dump_function(cfg, *state, apply),
    }
}

fn ok(text: String) -> Result<Emitted, Error> {
    Ok(Emitted {
        text,
        status: EXIT_OK,
    })
}

fn header(out: &mut String, command: &str, cfg: &RunConfig) {
    let _ = writeln!(out, "# oscitime {} {command}", env!("CARGO_PKG_VERSION"));
    let w = cfg.window;
    let _ = writeln!(
        out,
        "# window {}:{}  hbar = {}  omega = {}",
        w.n_min(),
        w.n_max(),
        cfg.constants.hbar(),
        cfg.constants.omega()
    );
}

fn single_matrix(cfg: &RunConfig, command: &str, note: &str, m: &OperatorMatrix) -> Result<Emitted, Error> {
    let text = match cfg.format {
        Format::Csv => m.to_csv(),
        Format::Json => to_json(m),
        Format::Table => {
            let mut out = String::new();
            header(&mut out, command, cfg);
            let _ = writeln!(out, "# note: {note}");
            let _ = writeln!(out, "{:>6} {:>6}  value", "m", "n");
            for (r, c, v) in m.elements() {
                let _ = writeln!(out, "{r:>6} {c:>6}  {}", format_complex(v));
            }
            out
        }
    };
    ok(text)
}

pub fn cmd_phase_elements(cfg: &RunConfig) -> Result<Emitted, Error> {
    let m = phase_matrix(cfg.window)?;
    single_matrix(cfg, "phase-elements", PHASE_NOTE, &m)
}

pub fn cmd_time_elements(cfg: &RunConfig) -> Result<Emitted, Error> {
    let m = time_matrix(cfg.window, cfg.constants)?;
    single_matrix(cfg, "time-elements", TIME_NOTE, &m)
}

/// Side-by-side matrices sharing one window, rendered in every format.
fn multi_matrix(cfg: &RunConfig, command: &str, note: &str, named: &[(&str, &OperatorMatrix)]) -> String {
    match cfg.format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = named
                .iter()
                .map(|(name, m)| (name.to_string(), serde_json::to_value(m).expect("matrix serializes")))
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("m,n");
            for (name, _) in named {
                let _ = write!(out, ",{name}_re,{name}_im");
            }
            out.push('\n');
            let first = named[0].1;
            for (idx, (r, c, _)) in first.elements().enumerate() {
                let _ = write!(out, "{r},{c}");
                for (_, m) in named {
                    let v = m.entries()[idx];
                    let _ = write!(out, ",{},{}", v.re, v.im);
                }
                out.push('\n');
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            header(&mut out, command, cfg);
            let _ = writeln!(out, "# note: {note}");
            let _ = write!(out, "{:>6} {:>6}", "m", "n");
            for (name, _) in named {
                let _ = write!(out, "  {name:>24}");
            }
            out.push('\n');
            let first = named[0].1;
            for (idx, (r, c, _)) in first.elements().enumerate() {
                let _ = write!(out, "{r:>6} {c:>6}");
                for (_, m) in named {
                    let _ = write!(out, "  {:>24}", format_complex(m.entries()[idx]));
                }
                out.push('\n');
            }
            out
        }
    }
}

pub fn cmd_paradox(cfg: &RunConfig) -> Result<Emitted, Error> {
    let naive = commutator_matrix_naive(cfg.window, cfg.constants)?;
    let correct = commutator_matrix_correct(cfg.window, cfg.constants)?;
    let gap = correct.sub(&naive)?.with_label("paradox_gap");
    let note = "naive = (n-m)*hbar*omega*<m|chi|n> assumes H hermitian on phi*e_n; \
correct keeps the boundary term; gap = correct - naive = i*hbar everywhere";
    ok(multi_matrix(
        cfg,
        "paradox",
        note,
        &[("naive", &naive), ("correct", &correct), ("gap", &gap)],
    ))
}

pub fn cmd_defect(cfg: &RunConfig) -> Result<Emitted, Error> {
    let defect = hermiticity_defect_matrix(cfg.window, cfg.constants)?;
    let control = periodic_defect_matrix(cfg.window, cfg.constants)?;
    let note = "defect = <e_m|H(phi e_n)> - <H e_m|phi e_n> = i*hbar*omega; control uses periodic e_n";
    ok(multi_matrix(
        cfg,
        "defect",
        note,
        &[("defect", &defect), ("control", &control)],
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
struct VerifyReport {
    window: FockWindow,
    hbar: f64,
    omega: f64,
    quadrature: String,
    naive_residual: f64,
    checks: Vec<CheckResult>,
    pass: bool,
}

/// Runs every identity check and returns the results without rendering them.
pub fn verify_checks(cfg: &RunConfig) -> Result<(Vec<CheckResult>, f64), Error> {
    let (w, c) = (cfg.window, cfg.constants);
    let ihbar = Complex64::new(0.0, c.hbar());
    let correct = commutator_matrix_correct(w, c)?;
    let naive = commutator_matrix_naive(w, c)?;
    let gap = paradox_gap(w, c)?;
    let defect = hermiticity_defect_matrix(w, c)?;
    let closed = phase_matrix(w)?;
    let quad = phase_matrix_with(w, &Integrator::Quadrature(cfg.quadrature_or_default()))?;

    let check = |name, value: f64, tolerance| CheckResult {
        name,
        value,
        tolerance,
        pass: value <= tolerance,
    };
    let checks = vec![
        check(
            "correct_vs_ihbar_identity",
            residual_report(&correct, Target::IhbarIdentity).max_abs,
            tolerance::CORRECT_VS_IHBAR,
        ),
        check("gap_spread", gap.magnitude_spread(), tolerance::GAP_SPREAD),
        check(
            "gap_vs_ihbar",
            residual_report(&gap, Target::Uniform(ihbar)).max_abs,
            tolerance::GAP_VS_IHBAR,
        ),
        check(
            "defect_vs_omega_gap",
            residual_report(&defect.sub(&gap.scale(Complex64::new(c.omega(), 0.0)))?, Target::Zero)
                .max_abs,
            tolerance::DEFECT_VS_GAP,
        ),
        check(
            "phase_quadrature_vs_closed_form",
            residual_report(&closed.sub(&quad)?, Target::Zero).max_abs,
            tolerance::QUADRATURE_PHASE,
        ),
    ];
    let naive_residual = residual_report(&naive, Target::IhbarIdentity).max_abs;
    Ok((checks, naive_residual))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Emitted, Error> {
    let (checks, naive_residual) = verify_checks(cfg)?;
    let pass = checks.iter().all(|c| c.pass);
    let status = if pass { EXIT_OK } else { EXIT_CHECK_FAILED };
    let text = match cfg.format {
        Format::Json => {
            let report = VerifyReport {
                window: cfg.window,
                hbar: cfg.constants.hbar(),
                omega: cfg.constants.omega(),
                quadrature: cfg.quadrature_or_default().to_string(),
                naive_residual,
                checks,
                pass,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("check,value,tolerance,pass\n");
            for c in &checks {
                let _ = writeln!(out, "{},{},{},{}", c.name, c.value, c.tolerance, c.pass);
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            header(&mut out, "verify", cfg);
            let _ = writeln!(out, "# quadrature {}", cfg.quadrature_or_default());
            let _ = writeln!(out, "# {TIME_NOTE}");
            let _ = writeln!(out, "{:<34} {:>12} {:>12}  result", "check", "value", "tolerance");
            for c in &checks {
                let _ = writeln!(
                    out,
                    "{:<34} {:>12.3e} {:>12.1e}  {}",
                    c.name,
                    c.value,
                    c.tolerance,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            let _ = writeln!(
                out,
                "naive (n-m)*hbar*omega*<m|chi|n> misses i*hbar*delta_mn by {} (expected: hbar = {})",
                format_real(naive_residual),
                format_real(cfg.constants.hbar())
            );
            let _ = writeln!(out, "{}", if pass { "verify: PASS" } else { "verify: FAIL" });
            out
        }
    };
    Ok(Emitted { text, status })
}

pub fn cmd_dump_function(cfg: &RunConfig, state: i64, apply: &[OperatorArg]) -> Result<Emitted, Error> {
    let mut f = fock_eigenfunction(state);
    for op in apply {
        let op = match op {
            OperatorArg::Hamiltonian => PhaseRepOperator::hamiltonian(cfg.constants),
            OperatorArg::Phase => PhaseRepOperator::Phase,
            OperatorArg::Time => PhaseRepOperator::time(cfg.constants),
        };
        f = op.apply(&f)?;
    }
    ok(render_function(cfg, &f))
}

fn render_function(cfg: &RunConfig, f: &PhasePolyFourier) -> String {
    match cfg.format {
        Format::Json => {
            let mut s = to_json(f);
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("degree,k,re,im\n");
            for (d, k, c) in f.coefficients() {
                let _ = writeln!(out, "{d},{k},{},{}", c.re, c.im);
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "# oscitime {} dump-function", env!("CARGO_PKG_VERSION"));
            let _ = writeln!(out, "# f(phi) = sum_d phi^d sum_k c[d,k] e^(i k phi)");
            let _ = writeln!(out, "{:>6} {:>6}  coefficient", "degree", "k");
            for (d, k, c) in f.coefficients() {
                let _ = writeln!(out, "{d:>6} {k:>6}  {}", format_complex(c));
            }
            out
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("value serializes")
}

/// `%g`-style rendering with 6 significant digits.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = trim(format!("{x:.decimals$}"));
        // rounding can carry into a new digit, e.g. 999999.5
        if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 6 {
            return format_real_exp(x);
        }
        s
    } else {
        format_real_exp(x)
    }
}

fn format_real_exp(x: f64) -> String {
    let s = format!("{x:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}e{exp}")
}

/// `re+im i`, 6 significant digits per part.
pub fn format_complex(z: Complex64) -> String {
    let im = format_real(z.im.abs());
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{sign}{im}i", format_real(z.re))
}
