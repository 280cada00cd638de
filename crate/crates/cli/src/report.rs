//! Single-point report.

use e2e_core::amplitudes::amplitude_pair;
use e2e_core::bell::{chsh_closed_form, chsh_expectation, violates, DetectorSettings};
use e2e_core::entanglement::{
    concurrence_pure_closed, concurrence_unpolarized, concurrence_wootters, linear_entropy, von_neumann_entropy,
};
use e2e_core::spin::{reduced_density, rho_mixed, PolarizationVector, Subsystem};
use e2e_core::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{ScanConfig, Scenario};
use crate::scan::{observables, point_mc};
use crate::CliError;

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn vector(p: &PolarizationVector) -> Value {
    json!([p.x, p.y, p.z])
}

fn optional(r: Result<f64, Error>) -> Result<Value, CliError> {
    match r {
        Ok(v) => Ok(json!(v)),
        Err(Error::DegenerateState) => Ok(Value::Null),
        Err(e) => Err(CliError::Numeric(e)),
    }
}

/// Everything the library computes at one (θA, θB).
pub fn point_report(cfg: &ScanConfig, theta_a_deg: f64, theta_b_deg: f64) -> Result<Value, CliError> {
    cfg.validate()?;
    let kin = cfg.kinematics(theta_a_deg, theta_b_deg)?;
    let (p1, p2) = cfg.scenario.polarizations()?;
    let (amps, est) = amplitude_pair(cfg.model.into(), &kin, &point_mc(cfg, 0)).map_err(CliError::Numeric)?;
    let obs = observables(amps, est, &kin, &p1, &p2).map_err(CliError::Numeric)?;
    let cs = obs.cs;

    let closed = match cfg.scenario {
        Scenario::Unpolarized => optional(concurrence_unpolarized(&amps))?,
        // Same as fully polarized electrons with perpendicular spins.
        Scenario::OneUnpolarized => {
            optional(concurrence_pure_closed(&amps, &PolarizationVector::Z, &PolarizationVector::X))?
        }
        _ if p1.is_unit() && p2.is_unit() => optional(concurrence_pure_closed(&amps, &p1, &p2))?,
        _ => Value::Null,
    };

    let state = match rho_mixed(&amps, &p1, &p2) {
        Ok(rho) => {
            let settings = DetectorSettings::default();
            let ra = reduced_density(&rho, Subsystem::First).map_err(CliError::Numeric)?;
            let rb = reduced_density(&rho, Subsystem::Second).map_err(CliError::Numeric)?;
            let expectation = chsh_expectation(&rho, &settings).map_err(CliError::Numeric)?;
            json!({
                "concurrence_wootters": concurrence_wootters(&rho).map_err(CliError::Numeric)?,
                "entropy_a": von_neumann_entropy(&ra).map_err(CliError::Numeric)?,
                "entropy_b": von_neumann_entropy(&rb).map_err(CliError::Numeric)?,
                "linear_entropy_a": linear_entropy(&ra),
                "linear_entropy_b": linear_entropy(&rb),
                "chsh_expectation": expectation,
                "chsh_closed_form": optional(chsh_closed_form(&amps, &p1, &p2))?,
                "chsh_violated": expectation > 2.0,
            })
        }
        Err(Error::DegenerateState) => Value::Null,
        Err(e) => return Err(CliError::Numeric(e)),
    };

    let mc = |i: usize| {
        json!({ "re": est[i].stderr_re, "im": est[i].stderr_im, "rejected": est[i].rejected })
    };
    Ok(json!({
        "model": cfg.model,
        "scenario": cfg.scenario.name(),
        "p1": vector(&p1),
        "p2": vector(&p2),
        "theta_a_deg": theta_a_deg,
        "theta_b_deg": theta_b_deg,
        "kinematics": {
            "e0": kin.e0, "e_a": kin.e_a, "e_b": kin.e_b, "e_t": kin.e_t,
            "q": [kin.q.x, kin.q.y, kin.q.z],
        },
        "amplitudes": { "td": complex(amps.td), "te": complex(amps.te) },
        "stderr": { "td": mc(0), "te": mc(1) },
        "cross_sections": {
            "i_par": cs.i_par,
            "i_anti_d": cs.i_anti_d,
            "i_anti_e": cs.i_anti_e,
            "i_anti": cs.i_anti,
            "i_s": cs.i_s,
            "i_t": cs.i_t,
            "unpolarized": cs.unpolarized(),
            "scenario": obs.tdcs,
            "scenario_stderr": obs.tdcs_stderr,
        },
        "degenerate": obs.degenerate,
        "concurrence_closed_form": closed,
        "concurrence": obs.concurrence,
        "eof": obs.eof,
        "bell_lhs": obs.bell_lhs,
        "bell_violated": !obs.degenerate && violates(obs.bell_lhs),
        "asymmetry": obs.asymmetry,
        "state": state,
    }))
}
