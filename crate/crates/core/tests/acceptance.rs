//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use oscitime::integrals::{hermiticity_defect_paths, QuadratureSpec};
use oscitime::matrices::{
    commutator_matrix_correct_with, hamiltonian_matrix, naive_relation, periodic_defect_matrix,
    phase_matrix_with,
};
use oscitime::{
    apply_hamiltonian, commutator_action, commutator_matrix_correct, commutator_matrix_naive,
    fock_eigenfunction, hermiticity_defect, inner_product, inner_product_quadrature, paradox_gap,
    phase_matrix, residual_report, FockWindow, Integrator, OperatorMatrix, PhasePolyFourier,
    PhaseRepOperator, PhysicalConstants, Target,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances, one per criterion clause.
const C1_CLOSED: f64 = 1e-12;
const C1_QUADRATURE: f64 = 1e-8;
const C2_SPREAD: f64 = 1e-10;
const C2_VALUES: f64 = 1e-10;
const C3_AGREEMENT: f64 = 1e-12;
const C3_CONTROL: f64 = 1e-13;
const C4_QUADRATURE: f64 = 1e-9;
const C4_CLOSED: f64 = 1e-12;
const C5_RELATIVE: f64 = 1e-14;
const C6_RELATIVE: f64 = 1e-14;
const C7_ABS: f64 = 1e-13;
const C8_RELATIVE: f64 = 1e-9;
const C8_RUNTIME: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn unit() -> PhysicalConstants {
    PhysicalConstants::unit()
}

fn ihbar(c: &PhysicalConstants) -> Complex64 {
    Complex64::new(0.0, c.hbar())
}

/// ⟨m|[χ,H]|n⟩ = iħδ_mn on [0,15], closed form and 16×24 quadrature.
fn criterion_1() -> Outcome {
    let w = FockWindow::new(0, 15).unwrap();
    let closed = commutator_matrix_correct(w, unit()).map_err(|e| e.to_string())?;
    let quad = Integrator::Quadrature(QuadratureSpec::new(16, 24).unwrap());
    let quad = commutator_matrix_correct_with(w, unit(), &quad).map_err(|e| e.to_string())?;
    let rc = residual_report(&closed, Target::IhbarIdentity).max_abs;
    let rq = residual_report(&quad, Target::IhbarIdentity).max_abs;
    ensure(
        rc <= C1_CLOSED && rq <= C1_QUADRATURE,
        format!("closed-form {rc:.2e} (<= {C1_CLOSED:e}), quadrature {rq:.2e} (<= {C1_QUADRATURE:e})"),
    )
}

/// Naive diagonal 0, off-diagonal −iħ; gap constant iħ on [0,3] and [0,15].
fn criterion_2() -> Outcome {
    let mut worst_naive: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let mut worst_spread: f64 = 0.0;
    for c in [unit(), PhysicalConstants::new(0.5, 3.0).unwrap()] {
        for w in [FockWindow::new(0, 3).unwrap(), FockWindow::new(0, 15).unwrap()] {
            let naive = commutator_matrix_naive(w, c).map_err(|e| e.to_string())?;
            for (m, n, v) in naive.elements() {
                let expected = if m == n { Complex64::new(0.0, 0.0) } else { -ihbar(&c) };
                worst_naive = worst_naive.max((v - expected).norm());
            }
            let gap = paradox_gap(w, c).map_err(|e| e.to_string())?;
            worst_gap = worst_gap.max(residual_report(&gap, Target::Uniform(ihbar(&c))).max_abs);
            worst_spread = worst_spread.max(gap.magnitude_spread());
        }
    }
    ensure(
        worst_naive <= C2_VALUES && worst_gap <= C2_VALUES && worst_spread <= C2_SPREAD,
        format!("naive dev {worst_naive:.2e}, gap dev {worst_gap:.2e}, gap spread {worst_spread:.2e}"),
    )
}

/// Boundary term iħω for all (m,n) in [0,6]², both paths; periodic control zero.
fn criterion_3() -> Outcome {
    let mut worst_path: f64 = 0.0;
    let mut worst_value: f64 = 0.0;
    let mut worst_control: f64 = 0.0;
    for c in [unit(), PhysicalConstants::new(0.5, 3.0).unwrap()] {
        let expected = Complex64::new(0.0, c.quantum());
        for m in 0..=6 {
            for n in 0..=6 {
                let e_m = fock_eigenfunction(m);
                let g = fock_eigenfunction(n).mul_by_phase();
                let p = hermiticity_defect_paths(&e_m, &g, &c).map_err(|e| e.to_string())?;
                worst_path = worst_path.max(p.discrepancy());
                worst_value = worst_value
                    .max((p.via_inner - expected).norm())
                    .max((p.via_boundary - expected).norm());
                let control = hermiticity_defect_paths(&e_m, &fock_eigenfunction(n), &c)
                    .map_err(|e| e.to_string())?;
                worst_control = worst_control
                    .max(control.via_inner.norm())
                    .max(control.via_boundary.norm());
                let d = hermiticity_defect(&e_m, &g, &c).map_err(|e| e.to_string())?;
                worst_value = worst_value.max((d - expected).norm());
            }
        }
        let control = periodic_defect_matrix(FockWindow::new(0, 6).unwrap(), c).unwrap();
        worst_control = worst_control.max(residual_report(&control, Target::Zero).max_abs);
    }
    ensure(
        worst_path <= C3_AGREEMENT && worst_value <= C3_AGREEMENT && worst_control <= C3_CONTROL,
        format!(
            "path agreement {worst_path:.2e}, deviation from i*hbar*omega {worst_value:.2e}, control {worst_control:.2e}"
        ),
    )
}

/// ⟨m|φ|n⟩ = −i/(m−n) for 1 ≤ |m−n| ≤ 10, π on the diagonal; quadrature agrees.
fn criterion_4() -> Outcome {
    let w = FockWindow::new(0, 10).unwrap();
    let closed = phase_matrix(w).map_err(|e| e.to_string())?;
    let quad = phase_matrix_with(w, &Integrator::Quadrature(QuadratureSpec::default()))
        .map_err(|e| e.to_string())?;
    let agreement = residual_report(&closed.sub(&quad).unwrap(), Target::Zero).max_abs;
    let mut worst_formula: f64 = 0.0;
    for (m, n, v) in closed.elements() {
        let expected = if m == n {
            Complex64::new(PI, 0.0)
        } else {
            Complex64::new(0.0, -1.0 / (m - n) as f64)
        };
        worst_formula = worst_formula.max((v - expected).norm());
        if m != n {
            // same magnitude as 1/(m-n), but purely imaginary
            let real_form = Complex64::new(-1.0 / (m - n) as f64, 0.0);
            if (v.norm() - real_form.norm()).abs() > C4_CLOSED || (v - real_form).norm() < 0.5 / 10.0 {
                return Err(format!("({m},{n}) = {v} not of the form -i/(m-n)"));
            }
        }
    }
    ensure(
        agreement <= C4_QUADRATURE && worst_formula <= C4_CLOSED,
        format!("closed vs quadrature {agreement:.2e}, closed vs -i/(m-n) & pi {worst_formula:.2e}"),
    )
}

/// H e_n = (n+½)ħω e_n for n in [0,12] and three constant sets.
fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for (h, w) in [(1.0, 1.0), (1.0, 2.5), (0.5, 3.0)] {
        let c = PhysicalConstants::new(h, w).unwrap();
        for n in 0..=12 {
            let e = fock_eigenfunction(n);
            let expected = e.scale(Complex64::new((n as f64 + 0.5) * c.quantum(), 0.0));
            let rel = common::max_coeff_diff(&apply_hamiltonian(&e, &c), &expected)
                / common::max_coeff(&expected);
            worst = worst.max(rel);
        }
    }
    ensure(worst <= C5_RELATIVE, format!("max relative coefficient error {worst:.2e}"))
}

/// [φ,H]f = −iħω f on 100 random functions, degree ≤ 3, |k| ≤ 16.
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let c = match i % 3 {
            0 => unit(),
            1 => PhysicalConstants::new(0.5, 3.0).unwrap(),
            _ => PhysicalConstants::new(2.0, 0.25).unwrap(),
        };
        let terms = rng.gen_range(1..=32);
        let f = common::random_function(&mut rng, 3, 16, terms);
        let out = commutator_action(&PhaseRepOperator::Phase, &PhaseRepOperator::hamiltonian(c), &f)
            .map_err(|e| e.to_string())?;
        let expected = f.scale(Complex64::new(0.0, -c.quantum()));
        let rel = common::max_coeff_diff(&out, &expected) / common::max_coeff(&expected);
        worst = worst.max(rel);
    }
    ensure(worst <= C6_RELATIVE, format!("max relative coefficient error {worst:.2e}"))
}

/// [B, H_w] = (n−m)ħω B for the window-truncated phase matrix on [0,7].
fn criterion_7() -> Outcome {
    let w = FockWindow::new(0, 7).unwrap();
    let mut worst: f64 = 0.0;
    for c in [unit(), PhysicalConstants::new(0.5, 3.0).unwrap()] {
        let b = phase_matrix(w).unwrap();
        let lhs = b.commutator(&hamiltonian_matrix(w, c).unwrap()).unwrap();
        let rhs = naive_relation(&b, c).unwrap();
        worst = worst.max(residual_report(&lhs.sub(&rhs).unwrap(), Target::Zero).max_abs);
    }
    ensure(worst <= C7_ABS, format!("max entry deviation {worst:.2e}"))
}

/// 200 random inner products: closed form vs quadrature.
fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    let q = QuadratureSpec::new(16, 24).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (nf, ng) = (rng.gen_range(1..=24), rng.gen_range(1..=24));
        let f = common::random_function(&mut rng, 2, 12, nf);
        let g = common::random_function(&mut rng, 2, 12, ng);
        let exact = inner_product(&f, &g).map_err(|e| e.to_string())?;
        let oracle = inner_product_quadrature(&f, &g, &q);
        worst = worst.max((exact - oracle).norm() / (1.0 + exact.norm()));
    }
    ensure(worst <= C8_RELATIVE, format!("max relative error {worst:.2e}"))
}

fn oscitime(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_oscitime"))
        .args(args)
        .env_remove("OSCITIME_MAX_WINDOW")
        .output()
        .expect("oscitime binary runs")
}

/// verify exits 0; machine formats decode to the in-memory values; output is byte-stable.
fn criterion_9() -> Outcome {
    let verify = oscitime(&["verify"]);
    if verify.status.code() != Some(0) {
        return Err(format!("verify exited {:?}", verify.status.code()));
    }

    let w = FockWindow::new(0, 7).unwrap();
    let c = PhysicalConstants::new(0.5, 3.0).unwrap();
    let flags = ["--window", "0:7", "--hbar", "0.5", "--omega", "3"];
    let with = |cmd: &str, format: &str| {
        let mut args = vec![cmd];
        args.extend_from_slice(&flags);
        args.extend_from_slice(&["--format", format]);
        args.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    };
    let run = |args: &[String]| {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        oscitime(&refs).stdout
    };

    // phase-elements, csv and json
    let phase = phase_matrix(w).unwrap();
    let csv = String::from_utf8(run(&with("phase-elements", "csv"))).unwrap();
    let back = OperatorMatrix::from_csv("phase", PhysicalConstants::unit(), &csv).map_err(|e| e.to_string())?;
    if back != phase {
        return Err("phase-elements CSV does not round-trip".into());
    }
    let back: OperatorMatrix =
        serde_json::from_slice(&run(&with("phase-elements", "json"))).map_err(|e| e.to_string())?;
    if back != phase {
        return Err("phase-elements JSON does not round-trip".into());
    }

    // paradox json: three matrices in the documented schema
    let json: serde_json::Value =
        serde_json::from_slice(&run(&with("paradox", "json"))).map_err(|e| e.to_string())?;
    let naive = commutator_matrix_naive(w, c).unwrap();
    let correct = commutator_matrix_correct(w, c).unwrap();
    let gap = correct.sub(&naive).unwrap().with_label("paradox_gap");
    for (key, expected) in [("naive", &naive), ("correct", &correct), ("gap", &gap)] {
        let m: OperatorMatrix = serde_json::from_value(json[key].clone()).map_err(|e| e.to_string())?;
        if &m != expected {
            return Err(format!("paradox JSON field {key} does not round-trip"));
        }
    }

    // dump-function json
    let dumped = oscitime(&["dump-function", "--state", "3", "--apply", "phase,hamiltonian,time", "--format", "json"]);
    let f: PhasePolyFourier = serde_json::from_slice(&dumped.stdout).map_err(|e| e.to_string())?;
    let expected = PhaseRepOperator::time(unit())
        .apply(&apply_hamiltonian(&fock_eigenfunction(3).mul_by_phase(), &unit()))
        .unwrap();
    if f != expected {
        return Err("dump-function JSON does not round-trip".into());
    }

    // determinism
    let mut checked = 0;
    for cmd in ["phase-elements", "time-elements", "paradox", "defect", "verify"] {
        for format in ["table", "csv", "json"] {
            let args = with(cmd, format);
            if run(&args) != run(&args) {
                return Err(format!("{cmd} --format {format} is not byte-stable"));
            }
            checked += 1;
        }
    }
    Ok(format!("verify exit 0; CSV/JSON round-trip exact; {checked} command/format pairs byte-stable"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 commutator = i*hbar*delta_mn", criterion_1),
        ("2 paradox gap is uniform i*hbar", criterion_2),
        ("3 boundary term = i*hbar*omega", criterion_3),
        ("4 <m|phi|n> = -i/(m-n), diagonal pi", criterion_4),
        ("5 Fock spectrum (n+1/2)hbar*omega", criterion_5),
        ("6 [phi,H] = -i*hbar*omega pointwise", criterion_6),
        ("7 naive relation for window-confined B", criterion_7),
        ("8 closed form vs quadrature", criterion_8),
        ("9 CLI contract", criterion_9),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = check();
        let ms = t.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{ms:.0} ms]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  criterion {name}: {detail} [{ms:.0} ms]");
            }
        }
    }
    let total = start.elapsed();
    let runtime_ok = total < C8_RUNTIME;
    if !runtime_ok {
        failures += 1;
    }
    println!(
        "{}  criterion 8 runtime: suite took {:.2} s (< {} s)",
        if runtime_ok { "PASS" } else { "FAIL" },
        total.as_secs_f64(),
        C8_RUNTIME.as_secs()
    );
    if failures > 0 {
        println!("acceptance: {failures} failure(s)");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
