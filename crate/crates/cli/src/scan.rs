//! Angle-grid sweeps.

use e2e_core::amplitudes::{amplitude_pair, AmplitudeEstimate, McConfig, Model};
use e2e_core::bell::{bell_lhs_cross_sections, spin_asymmetry};
use e2e_core::entanglement::{concurrence_pure_closed, concurrence_wootters, entanglement_of_formation};
use e2e_core::kinematics::{tdcs_basic, tdcs_polarized, CrossSections, Kinematics};
use e2e_core::rng::derive_seed;
use e2e_core::spin::{rho_mixed, AmplitudePair, PolarizationVector};
use e2e_core::Error;
use rayon::prelude::*;

use crate::config::{ModelName, ScanConfig, Scenario};
use crate::CliError;

/// Everything derived from one pair of amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub amps: AmplitudePair,
    pub estimates: [AmplitudeEstimate; 2],
    pub cs: CrossSections,
    /// Spin-unresolved TDCS for the scenario's P₁·P₂.
    pub tdcs: f64,
    /// Linear bound on the MC error of `tdcs`; zero for analytic models.
    pub tdcs_stderr: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub bell_lhs: f64,
    pub asymmetry: f64,
    /// The final spin state is undefined (vanishing cross section).
    pub degenerate: bool,
}

fn tdcs_error_bound(amps: &AmplitudePair, est: &[AmplitudeEstimate; 2], p_dot: f64, kin: &Kinematics) -> f64 {
    let (d, e) = (amps.td, amps.te);
    let g = 1.0 + p_dot;
    let terms = [
        (2.0 * d.re - g * e.re).abs() * est[0].stderr_re,
        (2.0 * d.im - g * e.im).abs() * est[0].stderr_im,
        (2.0 * e.re - g * d.re).abs() * est[1].stderr_re,
        (2.0 * e.im - g * d.im).abs() * est[1].stderr_im,
    ];
    kin.prefactor() * terms.iter().sum::<f64>()
}

/// Concurrence from the closed form for fully polarized electrons and from
/// Wootters' formula on the averaged state otherwise.
pub fn scenario_concurrence(
    amps: &AmplitudePair,
    p1: &PolarizationVector,
    p2: &PolarizationVector,
) -> Result<f64, Error> {
    if p1.is_unit() && p2.is_unit() {
        concurrence_pure_closed(amps, p1, p2)
    } else {
        concurrence_wootters(&rho_mixed(amps, p1, p2)?)
    }
}

pub fn observables(
    amps: AmplitudePair,
    estimates: [AmplitudeEstimate; 2],
    kin: &Kinematics,
    p1: &PolarizationVector,
    p2: &PolarizationVector,
) -> Result<Observables, Error> {
    let d = p1.dot(p2);
    let cs = tdcs_basic(&amps, kin);
    let tdcs = tdcs_polarized(&amps, d, kin)?;
    let tdcs_stderr = tdcs_error_bound(&amps, &estimates, d, kin);
    let mut out = Observables {
        amps,
        estimates,
        cs,
        tdcs,
        tdcs_stderr,
        concurrence: 0.0,
        eof: 0.0,
        bell_lhs: 0.0,
        asymmetry: 0.0,
        degenerate: true,
    };
    let concurrence = match scenario_concurrence(&amps, p1, p2) {
        Ok(c) => c,
        Err(Error::DegenerateState) => return Ok(out),
        Err(e) => return Err(e),
    };
    let (Ok(bell_lhs), Ok(asymmetry)) =
        (bell_lhs_cross_sections(cs.i_anti, cs.i_par, p1, p2), spin_asymmetry(cs.i_anti, cs.i_par))
    else {
        return Ok(out);
    };
    out.concurrence = concurrence;
    out.eof = entanglement_of_formation(concurrence)?;
    out.bell_lhs = bell_lhs;
    out.asymmetry = asymmetry;
    out.degenerate = false;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub theta_a_deg: f64,
    pub theta_b_deg: f64,
    pub tdcs: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub bell_lhs: f64,
    pub asymmetry: f64,
    pub measurable: bool,
    /// Present for Monte Carlo models.
    pub tdcs_stderr: Option<f64>,
    pub cs: CrossSections,
    pub degenerate: bool,
}

/// Scan results on the grid, θA-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub theta_a: Vec<f64>,
    pub theta_b: Vec<f64>,
    pub records: Vec<ScanRecord>,
}

impl Scan {
    pub fn at(&self, ia: usize, ib: usize) -> &ScanRecord {
        &self.records[ia * self.theta_b.len() + ib]
    }

    pub fn max_tdcs(&self) -> f64 {
        self.records.iter().fold(0.0, |m, r| m.max(r.tdcs))
    }
}

/// MC settings for grid point `index`: the master seed is replaced by a
/// derived one so every point draws an independent stream.
pub fn point_mc(cfg: &ScanConfig, index: u64) -> McConfig {
    let mut mc = McConfig::from(cfg.mc);
    mc.seed = derive_seed(cfg.mc.seed, index);
    mc
}

/// Amplitudes at one grid point.
struct PointAmplitudes {
    kin: Kinematics,
    amps: AmplitudePair,
    est: [AmplitudeEstimate; 2],
}

fn amplitudes_at(cfg: &ScanConfig, ta: f64, tb: f64, index: u64) -> Result<PointAmplitudes, CliError> {
    let kin = cfg.kinematics(ta, tb)?;
    let model: Model = cfg.model.into();
    let (amps, est) = amplitude_pair(model, &kin, &point_mc(cfg, index))        .map_err(|source| CliError::Point { theta_a: ta, theta_b: tb, source })?;
    Ok(PointAmplitudes { kin, amps, est })
}

/// Runs the full grid on `workers` threads (all available when `None`).
/// Output does not depend on the worker count.
pub fn run_scan(cfg: &ScanConfig, workers: Option<usize>) -> Result<Scan, CliError> {
    Ok(run_scans(cfg, &[cfg.scenario], workers)?.remove(0))
}

/// One scan per scenario from a single set of amplitudes; `cfg.scenario`
/// is ignored.
pub fn run_scans(cfg: &ScanConfig, scenarios: &[Scenario], workers: Option<usize>) -> Result<Vec<Scan>, CliError> {
    cfg.validate()?;
    let theta_a = cfg.grid.angles()?;
    let theta_b = theta_a.clone();
    let nb = theta_b.len();
    let points: Vec<(usize, f64, f64)> = theta_a
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| theta_b.iter().enumerate().map(move |(j, &b)| (i * nb + j, a, b)))
        .collect();

    let work = || -> Result<Vec<PointAmplitudes>, CliError> {
        points.par_iter().map(|&(idx, a, b)| amplitudes_at(cfg, a, b, idx as u64)).collect()
    };
    let amps = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("workers: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let mc = cfg.model == ModelName::C3;
    scenarios
        .iter()
        .map(|scenario| {
            let (p1, p2) = scenario.polarizations()?;
            let obs = points
                .iter()
                .zip(&amps)
                .map(|(&(_, a, b), pt)| {
                    observables(pt.amps, pt.est, &pt.kin, &p1, &p2)
                        .map_err(|source| CliError::Point { theta_a: a, theta_b: b, source })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let max = obs.iter().fold(0.0f64, |m, o| m.max(o.tdcs));
            let cut = cfg.threshold_frac * max;
            let records = points
                .iter()
                .zip(&obs)
                .map(|(&(_, a, b), o)| ScanRecord {
                    theta_a_deg: a,
                    theta_b_deg: b,
                    tdcs: o.tdcs,
                    concurrence: o.concurrence,
                    eof: o.eof,
                    bell_lhs: o.bell_lhs,
                    asymmetry: o.asymmetry,
                    measurable: !o.degenerate && o.tdcs >= cut,
                    tdcs_stderr: mc.then_some(o.tdcs_stderr),
                    cs: o.cs,
                    degenerate: o.degenerate,
                })
                .collect();
            Ok(Scan { theta_a: theta_a.clone(), theta_b: theta_b.clone(), records })
        })
        .collect()
}
