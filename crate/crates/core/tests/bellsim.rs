mod common;

use std::f64::consts::SQRT_2;

use common::*;
use e2e_core::bell::{chsh_expectation, DetectorSettings};
use e2e_core::bellsim::{outcome_probabilities, sample_coincidences, simulate_chsh};
use e2e_core::linalg::{kron, sigma_dot};
use e2e_core::spin::{rho_pure, AmplitudePair, BellState, PolarizationVector, SpinDensityMatrix};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn probabilities_form_a_distribution(rho in density(), a in unit_vec3(), b in unit_vec3()) {
        let p = outcome_probabilities(&rho, &a, &b).unwrap();
        prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let corr = p[0] + p[3] - p[1] - p[2];
        let op = (rho.matrix() * kron(&sigma_dot(&a), &sigma_dot(&b))).trace().re;
        prop_assert!((corr - op).abs() <= 1e-12);
    }
}

#[test]
fn frequencies_follow_probabilities() {
    let a = AmplitudePair::new(c(0.9, 0.2), c(-0.3, 0.5));
    let rho = rho_pure(&a, &PolarizationVector::Z, &PolarizationVector::X).unwrap();
    let (x, y) = (e2e_core::linalg::Vec3::new(0.0, 0.0, 1.0), e2e_core::linalg::Vec3::new(0.6, 0.0, 0.8));
    let n = 1_000_000u64;
    let p = outcome_probabilities(&rho, &x, &y).unwrap();
    let counts = sample_coincidences(&rho, &x, &y, n, 42).unwrap();
    let got = [counts.n_pp, counts.n_pm, counts.n_mp, counts.n_mm];
    for (k, pk) in got.iter().zip(p) {
        let sd = (n as f64 * pk * (1.0 - pk)).sqrt();
        assert!((*k as f64 - n as f64 * pk).abs() <= 5.0 * sd.max(1.0));
    }
}

#[test]
fn singlet_stderr_matches_variance_formula() {
    let s = SpinDensityMatrix::bell_projector(BellState::PsiMinus);
    let run = simulate_chsh(&s, &DetectorSettings::default(), 1_000_000, 9).unwrap();
    let want = (2.0f64 / 1e6).sqrt();
    assert!((run.stderr / want - 1.0).abs() <= 0.1);
    assert!((run.estimate - 2.0 * SQRT_2).abs() <= 5.0 * run.stderr);
    assert_eq!(run, simulate_chsh(&s, &DetectorSettings::default(), 1_000_000, 9).unwrap());
}

#[test]
fn product_state_never_violates() {
    let a = AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0));
    let z = PolarizationVector::Z;
    let rho = rho_pure(&a, &z, &z).unwrap();
    let exact = chsh_expectation(&rho, &DetectorSettings::default()).unwrap();
    assert!((exact + SQRT_2).abs() < 1e-12);
    for seed in 0..5 {
        let run = simulate_chsh(&rho, &DetectorSettings::default(), 100_000, seed).unwrap();
        assert!(run.estimate < 2.0);
        assert!((run.estimate - exact).abs() <= 5.0 * run.stderr);
    }
}
