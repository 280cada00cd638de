mod common;

use common::*;
use e2e_core::bell::spin_asymmetry;
use e2e_core::kinematics::{build_coplanar, ev_to_hartree, tdcs_basic, tdcs_polarized, HARTREE_EV};
use e2e_core::spin::rho_mixed_unnormalized;
use e2e_core::Error;
use proptest::prelude::*;

fn kinematics() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (1.0..5.0f64, 0.05..0.95f64, -3.1..3.1f64, -3.1..3.1f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn on_shell_vectors((e0, frac, ta, tb) in kinematics()) {
        let et = -0.5;
        let eb = frac * (e0 + et);
        let k = build_coplanar(e0, eb, ta, tb, et).unwrap();
        prop_assert!((k.e_a + k.e_b - (e0 + et)).abs() <= 1e-12);
        for (v, e) in [(k.k0, k.e0), (k.ka, k.e_a), (k.kb, k.e_b)] {
            prop_assert!((v.norm() - (2.0 * e).sqrt()).abs() <= 1e-12);
            prop_assert_eq!(v.y, 0.0);
        }
        prop_assert!(((k.ka + k.kb - k.k0) - k.q).norm() <= 1e-12);
    }

    #[test]
    fn cross_section_identities(a in amps(), p1 in ball(), p2 in ball()) {
        let k = build_coplanar(2.0, 0.6, 0.4, -1.1, -0.5).unwrap();
        let cs = tdcs_basic(&a, &k);
        for v in [cs.i_par, cs.i_anti_d, cs.i_anti_e, cs.i_s, cs.i_t] {
            prop_assert!(v >= 0.0);
        }
        let tol = 1e-12 * cs.i_anti.max(1e-300);
        prop_assert!((cs.i_t - 0.75 * cs.i_par).abs() <= tol);
        prop_assert!((cs.unpolarized() - tdcs_polarized(&a, 0.0, &k).unwrap()).abs() <= tol);
        prop_assert!((tdcs_polarized(&a, 1.0, &k).unwrap() - cs.i_par).abs() <= tol);

        let d = p1.dot(&p2);
        let trace = rho_mixed_unnormalized(&a, &p1, &p2).unwrap().trace().re * k.prefactor();
        prop_assert!((tdcs_polarized(&a, d, &k).unwrap() - trace).abs() <= tol);

        let s = a.td.norm_sqr() + a.te.norm_sqr();
        let m = (a.td - a.te).norm_sqr();
        let want = (s - m) / (s + m);
        prop_assert!((spin_asymmetry(cs.i_anti, cs.i_par).unwrap() - want).abs() <= 1e-12);
    }
}

#[test]
fn symmetric_angles_keep_q_on_axis() {
    let k = build_coplanar(2.0, 0.75, 0.9, -0.9, -0.5).unwrap();
    assert_eq!(k.q.x, 0.0);
}

#[test]
fn unit_conversion() {
    assert!((ev_to_hartree(54.4) - 54.4 / HARTREE_EV).abs() < 1e-16);
    assert!((ev_to_hartree(-13.605693122994) + 0.5).abs() < 1e-12);
}

#[test]
fn bad_inputs() {
    assert!(matches!(build_coplanar(2.0, 1.6, 0.0, 0.0, -0.5), Err(Error::ClosedChannel { .. })));
    assert!(matches!(build_coplanar(f64::NAN, 0.5, 0.0, 0.0, -0.5), Err(Error::Domain(_))));
    let k = build_coplanar(2.0, 0.75, 0.0, 0.0, -0.5).unwrap();
    let a = e2e_core::spin::AmplitudePair::new(c(1.0, 0.0), c(0.0, 1.0));
    assert!(tdcs_polarized(&a, 1.5, &k).is_err());
}
