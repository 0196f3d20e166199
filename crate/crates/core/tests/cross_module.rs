use std::f64::consts::PI;

use sinwell::dipole_poly::{kernel, q_sequence};
use sinwell::fd_oracle::richardson_pair;
use sinwell::jacobi_basis::hamiltonian_matrix;
use sinwell::spectrum::{solve_general, solve_sinusoidal_well};
use sinwell::wavefunction::{eigenstate_coefficients, sample_wavefunction_with};
use sinwell::{CoefficientMethod, PotentialSpec};

#[test]
fn general_solver_reduces_to_sinusoidal_well() {
    for c in [-3.0, 0.7, 5.0, 12.0] {
        let a = solve_general(0.0, 0.0, c, 1, PI, 24, 8).unwrap();
        let b = solve_sinusoidal_well(c, 1, PI, 24, 8).unwrap();
        assert_eq!(a.epsilons(), b.epsilons());
    }
}

#[test]
fn spectral_and_fd_agree_for_several_couplings() {
    for c in [1.0, 5.0, 10.0] {
        let spec = PotentialSpec::sinusoidal(c, 1, 2.0).unwrap();
        let fd = richardson_pair(&spec, 1024, 4).unwrap();
        let s = solve_sinusoidal_well(c, 1, 2.0, 30, 4).unwrap();
        for (e, f) in s.energies().iter().zip(&fd) {
            assert!(
                (e - f).abs() < 1e-5 * e.abs().max(1.0),
                "C = {c}: {e} vs {f}"
            );
        }
    }
}

#[test]
fn eigenvector_is_proportional_to_q_at_small_n() {
    let h = hamiltonian_matrix(2.0, 0.5, 0.5, 8).unwrap();
    for pair in h.eigenpairs(8).unwrap() {
        let q = q_sequence(pair.value, 2.0, 8).unwrap();
        let omega = kernel(pair.value, 2.0, 8).unwrap().omega;
        let sign = pair.vector[0].signum();
        for (v, qm) in pair.vector.iter().zip(&q.values) {
            assert!((v - sign * omega * qm).abs() < 1e-8, "{}", pair.value);
        }
    }
}

#[test]
fn coefficient_methods_give_the_same_state() {
    for level in 0..4 {
        let e = eigenstate_coefficients(5.0, 13, level, CoefficientMethod::Eigenvector).unwrap();
        let b = eigenstate_coefficients(5.0, 13, level, CoefficientMethod::Backward).unwrap();
        let len = e.coefficients.len().max(b.coefficients.len());
        let diff = e
            .padded(len)
            .iter()
            .zip(b.padded(len))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-6, "level {level}: {diff}");
    }
}

#[test]
fn higher_k_state_is_a_folded_narrow_well() {
    let narrow =
        sample_wavefunction_with(5.0, 1, PI / 2.0, 13, 1, 101, CoefficientMethod::Eigenvector)
            .unwrap();
    let wide =
        sample_wavefunction_with(5.0, 2, PI, 13, 1, 201, CoefficientMethod::Eigenvector).unwrap();
    for i in 0..101 {
        assert!(
            (wide.values[i] - narrow.values[i] / 2f64.sqrt()).abs() < 1e-12,
            "{i}"
        );
    }
    assert!((wide.norm_squared().unwrap() - 1.0).abs() < 1e-6);
}
