mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use oscitime::integrals::hermiticity_defect_paths;
use oscitime::matrices::{
    commutator_matrix_correct, commutator_matrix_naive, hamiltonian_matrix, hermiticity_defect_matrix,
    naive_relation, paradox_gap, phase_matrix, time_matrix,
};
use oscitime::{
    apply_hamiltonian, fock_eigenfunction, residual_report, FockWindow, PhysicalConstants, Target,
};

fn windows() -> Vec<FockWindow> {
    vec![
        FockWindow::new(0, 3).unwrap(),
        FockWindow::new(0, 15).unwrap(),
        FockWindow::new(2, 9).unwrap(),
    ]
}

fn constants() -> Vec<PhysicalConstants> {
    [(1.0, 1.0), (0.5, 3.0), (2.0, 0.25)]
        .into_iter()
        .map(|(h, w)| PhysicalConstants::new(h, w).unwrap())
        .collect()
}

#[test]
fn eigenvalues_over_integer_states() {
    for (h, w) in [(1.0, 1.0), (1.0, 2.5), (0.5, 3.0)] {
        let c = PhysicalConstants::new(h, w).unwrap();
        for n in -8..=8 {
            let e = fock_eigenfunction(n);
            let expected = e.scale(Complex64::new((n as f64 + 0.5) * c.quantum(), 0.0));
            let err = common::max_coeff_diff(&apply_hamiltonian(&e, &c), &expected);
            assert!(err <= 1e-14 * common::max_coeff(&expected), "n = {n}, ({h}, {w})");
        }
    }
}

#[test]
fn commutator_identity_over_windows_and_constants() {
    for w in windows() {
        for c in constants() {
            let correct = commutator_matrix_correct(w, c).unwrap();
            assert!(residual_report(&correct, Target::IhbarIdentity).max_abs <= 1e-12);

            let naive = commutator_matrix_naive(w, c).unwrap();
            let diff = correct.sub(&naive).unwrap();
            let ihbar = Complex64::new(0.0, c.hbar());
            assert!(residual_report(&diff, Target::Uniform(ihbar)).max_abs <= 1e-12);

            let gap = paradox_gap(w, c).unwrap();
            let defect = hermiticity_defect_matrix(w, c).unwrap();
            let linked = defect.sub(&gap.scale(Complex64::new(c.omega(), 0.0))).unwrap();
            assert!(residual_report(&linked, Target::Zero).max_abs <= 1e-12);
        }
    }
}

#[test]
fn phase_and_time_matrices_are_hermitian() {
    for w in windows() {
        assert!(phase_matrix(w).unwrap().hermiticity_error() <= 1e-13);
        for c in constants() {
            let t = time_matrix(w, c).unwrap();
            assert!(t.hermiticity_error() <= 1e-13);
            assert!(residual_report(&t.sub(&t.adjoint()).unwrap(), Target::Zero).max_abs <= 1e-13);
        }
    }
}

#[test]
fn boundary_term_is_uniform_over_negative_and_positive_states() {
    for c in constants() {
        for m in -6..=6 {
            for n in -6..=6 {
                let g = fock_eigenfunction(n).mul_by_phase();
                let p = hermiticity_defect_paths(&fock_eigenfunction(m), &g, &c).unwrap();
                let expected = Complex64::new(0.0, c.quantum());
                assert!((p.via_boundary - expected).norm() <= 1e-12);
                assert!((p.via_inner - expected).norm() <= 1e-12 * c.quantum().max(1.0));
            }
        }
    }
}

#[test]
fn window_confined_operators_obey_naive_relation() {
    for w in windows() {
        for c in constants() {
            let b = phase_matrix(w).unwrap();
            let lhs = b.commutator(&hamiltonian_matrix(w, c).unwrap()).unwrap();
            let rhs = naive_relation(&b, c).unwrap();
            assert!(residual_report(&lhs.sub(&rhs).unwrap(), Target::Zero).max_abs <= 1e-13);
        }
    }
}

#[test]
fn negative_windows_work_with_override() {
    let w = FockWindow::with_negative(-4, 4).unwrap();
    let c = PhysicalConstants::unit();
    let p = phase_matrix(w).unwrap();
    assert!((p.get(-4, -4).unwrap() - Complex64::new(PI, 0.0)).norm() < 1e-14);
    assert!((p.get(-4, 4).unwrap() - Complex64::new(0.0, 1.0 / 8.0)).norm() < 1e-15);
    let correct = commutator_matrix_correct(w, c).unwrap();
    assert!(residual_report(&correct, Target::IhbarIdentity).max_abs <= 1e-12);
}
