mod common;

use common::*;
use e2e_core::entanglement::{
    concurrence_pure_closed, concurrence_pure_from_state, concurrence_unpolarized, concurrence_wootters,
    entropy_from_concurrence, singlet_triplet_concurrence, von_neumann_entropy,
};
use e2e_core::kinematics::{build_coplanar, tdcs_basic};
use e2e_core::spin::{
    final_state, reduced_density, rho_mixed, rho_pure, spinor_along, PolarizationVector, Subsystem,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn closed_form_matches_wootters(a in amps(), z1 in unit(), z2 in unit()) {
        if let (Ok(rho), Ok(closed)) = (rho_pure(&a, &z1, &z2), concurrence_pure_closed(&a, &z1, &z2)) {
            let w = concurrence_wootters(&rho).unwrap();
            prop_assert!((w - closed).abs() <= 1e-10, "{} vs {}", w, closed);
        }
    }

    #[test]
    fn purity_route_matches_closed_form(a in amps(), z1 in unit(), z2 in unit()) {
        let psi = final_state(&a, &spinor_along(&z1).unwrap(), &spinor_along(&z2).unwrap());
        if let (Ok(psi), Ok(closed)) = (psi.normalized(), concurrence_pure_closed(&a, &z1, &z2)) {
            prop_assert!((concurrence_pure_from_state(&psi).unwrap() - closed).abs() <= 1e-10);
        }
    }

    #[test]
    fn unpolarized_formula_matches_wootters(a in amps()) {
        let zero = PolarizationVector::ZERO;
        let rho = rho_mixed(&a, &zero, &zero).unwrap();
        let w = concurrence_wootters(&rho).unwrap();
        prop_assert!((w - concurrence_unpolarized(&a).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn one_unpolarized_matches_perpendicular(a in amps(), p in unit(), w in unit()) {
        // Any direction perpendicular to p will do.
        let v = w.to_vec3() - p.to_vec3() * w.dot(&p);
        prop_assume!(v.norm() > 1e-3);
        let v = v.normalize();
        let perp_dir = PolarizationVector::new(v.x, v.y, v.z).unwrap();
        let rho = rho_mixed(&a, &p, &PolarizationVector::ZERO).unwrap();
        if let Ok(perp) = concurrence_pure_closed(&a, &p, &perp_dir) {
            prop_assert!((concurrence_wootters(&rho).unwrap() - perp).abs() <= 1e-10);
        }
    }

    #[test]
    fn singlet_triplet_route_agrees(a in amps()) {
        let kin = build_coplanar(2.0, 0.75, 0.7, -0.7, -0.5).unwrap();
        let cs = tdcs_basic(&a, &kin);
        if cs.i_s + cs.i_t > 0.0 {
            let st = singlet_triplet_concurrence(cs.i_s, cs.i_t).unwrap();
            prop_assert!((st - concurrence_unpolarized(&a).unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn antiparallel_beats_perpendicular(a in amps()) {
        let z = PolarizationVector::Z;
        let anti = concurrence_pure_closed(&a, &z, &-z).unwrap();
        if let Ok(perp) = concurrence_pure_closed(&a, &z, &PolarizationVector::X) {
            prop_assert!(perp <= anti + 1e-15);
        }
    }

    #[test]
    fn marginal_entropy_follows_concurrence(a in amps(), z1 in unit(), z2 in unit()) {
        if let Ok(rho) = rho_pure(&a, &z1, &z2) {
            let c = concurrence_pure_closed(&a, &z1, &z2).unwrap();
            let want = entropy_from_concurrence(c).unwrap();
            for s in [Subsystem::First, Subsystem::Second] {
                let got = von_neumann_entropy(&reduced_density(&rho, s).unwrap()).unwrap();
                prop_assert!((got - want).abs() <= 1e-8, "{} vs {}", got, want);
            }
        }
    }

    #[test]
    fn wootters_is_bounded(rho in density()) {
        let w = concurrence_wootters(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&w));
    }
}
