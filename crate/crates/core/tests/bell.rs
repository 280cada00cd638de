mod common;

use std::f64::consts::SQRT_2;

use common::*;
use e2e_core::bell::{
    bell_lhs_cross_sections, chsh_closed_form, chsh_expectation, chsh_operator, spectral_radius,
    DetectorSettings,
};
use e2e_core::kinematics::{build_coplanar, tdcs_basic};
use e2e_core::spin::{rho_mixed, rho_pure, SpinDensityMatrix, BellState};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn closed_form_matches_trace_pure(a in amps(), z1 in unit(), z2 in unit()) {
        if let Ok(rho) = rho_pure(&a, &z1, &z2) {
            let s = DetectorSettings::default();
            let tr = chsh_expectation(&rho, &s).unwrap();
            prop_assert!((chsh_closed_form(&a, &z1, &z2).unwrap() - tr).abs() <= 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_trace_mixed(a in amps(), p1 in ball(), p2 in ball()) {
        if let Ok(rho) = rho_mixed(&a, &p1, &p2) {
            let s = DetectorSettings::default();
            let tr = chsh_expectation(&rho, &s).unwrap();
            prop_assert!((chsh_closed_form(&a, &p1, &p2).unwrap() - tr).abs() <= 1e-12);
        }
    }

    #[test]
    fn cross_section_form_is_scaled_expectation(a in amps(), p1 in ball(), p2 in ball()) {
        let kin = build_coplanar(2.0, 0.6, 0.4, -1.1, -0.5).unwrap();
        let cs = tdcs_basic(&a, &kin);
        if let (Ok(lhs), Ok(pi)) = (bell_lhs_cross_sections(cs.i_anti, cs.i_par, &p1, &p2), chsh_closed_form(&a, &p1, &p2)) {
            prop_assert!((lhs * 2.0 * SQRT_2 - pi).abs() <= 1e-12);
        }
    }

    #[test]
    fn tsirelson_bound(rho in density(), a1 in unit_vec3(), a2 in unit_vec3(), b1 in unit_vec3(), b2 in unit_vec3()) {
        let s = DetectorSettings::new(a1, a2, b1, b2).unwrap();
        prop_assert!(chsh_expectation(&rho, &s).unwrap().abs() <= 2.0 * SQRT_2 + 1e-12);
        prop_assert!(spectral_radius(&chsh_operator(&s).unwrap()) <= 2.0 * SQRT_2 + 1e-12);
    }
}

#[test]
fn singlet_reaches_tsirelson() {
    let s = SpinDensityMatrix::bell_projector(BellState::PsiMinus);
    let v = chsh_expectation(&s, &DetectorSettings::default()).unwrap();
    assert!((v - 2.0 * SQRT_2).abs() <= 1e-12);
}
