mod common;

use common::*;
use e2e_core::spin::{
    bell_basis_closed_form, bell_coefficients, from_bell_basis, reduced_density, rho_mixed, rho_pure,
    spinor_along, swap_qubits, to_bell_basis, AmplitudePair, PairSpinState, PolarizationVector, Subsystem,
};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bell_entries_match_construction_pure(a in amps(), z1 in unit(), z2 in unit()) {
        if let Ok(rho) = rho_pure(&a, &z1, &z2) {
            let built = to_bell_basis(&rho).unwrap();
            let closed = bell_basis_closed_form(&a, &z1, &z2).unwrap();
            prop_assert!(max_diff(built.matrix(), closed.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn bell_entries_match_construction_mixed(a in amps(), p1 in ball(), p2 in ball()) {
        if let Ok(rho) = rho_mixed(&a, &p1, &p2) {
            let built = to_bell_basis(&rho).unwrap();
            let closed = bell_basis_closed_form(&a, &p1, &p2).unwrap();
            prop_assert!(max_diff(built.matrix(), closed.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn global_phase_drops_out(a in amps(), z1 in unit(), z2 in unit(), phase in 0.0..6.3f64) {
        let w = Complex64::from_polar(1.0, phase);
        let b = AmplitudePair::new(a.td * w, a.te * w);
        if let (Ok(x), Ok(y)) = (rho_pure(&a, &z1, &z2), rho_pure(&b, &z1, &z2)) {
            prop_assert!(max_diff(x.matrix(), y.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn swapping_electrons_swaps_amplitudes(a in amps(), p1 in ball(), p2 in ball()) {
        let b = AmplitudePair::new(a.te, a.td);
        if let (Ok(x), Ok(y)) = (rho_mixed(&a, &p1, &p2), rho_mixed(&b, &p1, &p2)) {
            prop_assert!(max_diff(&swap_qubits(x.matrix()), y.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn bell_coefficients_rebuild_the_state(a in amps(), z1 in unit(), z2 in unit()) {
        if let Ok(rho) = rho_pure(&a, &z1, &z2) {
            let coeffs = bell_coefficients(&a, &spinor_along(&z1).unwrap(), &spinor_along(&z2).unwrap());
            let psi = PairSpinState::from_bell_coefficients(&coeffs).normalized().unwrap();
            prop_assert!(max_diff(&psi.outer(), rho.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn basis_round_trip(rho in density()) {
        let back = from_bell_basis(&to_bell_basis(&rho).unwrap()).unwrap();
        prop_assert!(max_diff(back.matrix(), rho.matrix()) <= 1e-14);
    }

    #[test]
    fn reduced_matrices_have_unit_trace(a in amps(), p1 in ball(), p2 in ball()) {
        if let Ok(rho) = rho_mixed(&a, &p1, &p2) {
            for s in [Subsystem::First, Subsystem::Second] {
                let r = reduced_density(&rho, s).unwrap();
                prop_assert!((r.trace() - Complex64::from(1.0)).norm() <= 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn mixed_states_are_valid(a in amps(), p1 in ball(), p2 in ball()) {
        if let Ok(rho) = rho_mixed(&a, &p1, &p2) {
            prop_assert!(rho.validate().is_ok());
            prop_assert!(rho.eigenvalues()[0] >= -1e-12);
        }
    }
}

#[test]
fn unit_polarizations_reduce_to_pure_states() {
    let a = AmplitudePair::new(c(0.7, -0.2), c(-0.1, 0.4));
    let z1 = PolarizationVector::new(0.6, 0.0, 0.8).unwrap();
    let z2 = PolarizationVector::new(0.0, -1.0, 0.0).unwrap();
    let pure = rho_pure(&a, &z1, &z2).unwrap();
    let mixed = rho_mixed(&a, &z1, &z2).unwrap();
    assert!(max_diff(pure.matrix(), mixed.matrix()) <= 1e-14);
}
