//! Simulated coincidence experiment on the final spin state of one point.

use e2e_core::amplitudes::amplitude_pair;
use e2e_core::bell::{chsh_expectation, DetectorSettings};
use e2e_core::bellsim::simulate_chsh;
use e2e_core::spin::rho_mixed;
use serde_json::{json, Value};

use crate::config::ScanConfig;
use crate::scan::point_mc;
use crate::CliError;

pub fn bell_sim(cfg: &ScanConfig, theta_a_deg: f64, theta_b_deg: f64, n: u64, seed: u64) -> Result<Value, CliError> {
    cfg.validate()?;
    if n == 0 {
        return Err(CliError::Config("samples: need at least one coincidence per setting".into()));
    }
    let kin = cfg.kinematics(theta_a_deg, theta_b_deg)?;
    let (p1, p2) = cfg.scenario.polarizations()?;
    let (amps, _) = amplitude_pair(cfg.model.into(), &kin, &point_mc(cfg, 0)).map_err(CliError::Numeric)?;
    let rho = rho_mixed(&amps, &p1, &p2).map_err(CliError::Numeric)?;
    let settings = DetectorSettings::default();
    let exact = chsh_expectation(&rho, &settings).map_err(CliError::Numeric)?;
    let run = simulate_chsh(&rho, &settings, n, seed).map_err(CliError::Numeric)?;
    let counts: Vec<Value> = run
        .counts
        .iter()
        .map(|c| json!({ "pp": c.n_pp, "pm": c.n_pm, "mp": c.n_mp, "mm": c.n_mm }))
        .collect();
    Ok(json!({
        "theta_a_deg": theta_a_deg,
        "theta_b_deg": theta_b_deg,
        "scenario": cfg.scenario.name(),
        "samples_per_setting": n,
        "seed": seed,
        "counts": counts,
        "estimate": run.estimate,
        "stderr": run.stderr,
        "expectation": exact,
        "pull": (run.estimate - exact) / run.stderr,
        "violates_classical_bound": run.estimate > 2.0,
    }))
}
