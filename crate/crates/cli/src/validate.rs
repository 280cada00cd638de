//! Cross-checks of every closed form against an independent route.
//!
//! The implementations under test are passed in through [`Formulas`], so a
//! deliberately broken formula can be shown to make its suite fail.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::time::Instant;

use e2e_core::amplitudes::{c3_tmatrix, free_limit_amplitude, pwba_amplitudes, McConfig, Ordering};
use e2e_core::bell::{bell_lhs_cross_sections, chsh_closed_form, chsh_expectation, spectral_radius, chsh_operator, DetectorSettings};
use e2e_core::entanglement::{concurrence_pure_closed, concurrence_unpolarized, concurrence_wootters};
use e2e_core::kinematics::{build_coplanar, tdcs_basic};
use e2e_core::linalg::Vec3;
use e2e_core::rng::{stream, StreamRng};
use e2e_core::spin::{
    bell_basis_closed_form, rho_mixed, rho_pure, to_bell_basis, AmplitudePair, PolarizationVector,
    SpinDensityMatrix,
};
use e2e_core::Result;
use num_complex::Complex64;
use rand::Rng;

type PairFormula = fn(&AmplitudePair, &PolarizationVector, &PolarizationVector) -> Result<f64>;
type BellMatrix = fn(&AmplitudePair, &PolarizationVector, &PolarizationVector) -> Result<SpinDensityMatrix>;
type LhsFormula = fn(f64, f64, &PolarizationVector, &PolarizationVector) -> Result<f64>;

/// The closed forms the suites check.
#[derive(Clone, Copy)]
pub struct Formulas {
    pub concurrence_pure: PairFormula,
    pub concurrence_unpolarized: fn(&AmplitudePair) -> Result<f64>,
    pub bell_basis: BellMatrix,
    pub chsh: PairFormula,
    pub bell_lhs: LhsFormula,
}

impl Default for Formulas {
    fn default() -> Self {
        Formulas {
            concurrence_pure: concurrence_pure_closed,
            concurrence_unpolarized,
            bell_basis: bell_basis_closed_form,
            chsh: chsh_closed_form,
            bell_lhs: bell_lhs_cross_sections,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub passed: bool,
    /// Set when a case could not be evaluated at all.
    pub error: Option<String>,
}

impl std::fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:<48} cases={:<6} worst={:.3e} tol={:.1e} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance,
            self.seconds
        )?;
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    pub cases: usize,
    pub seed: u64,
    /// Include the Monte Carlo free-limit suite.
    pub monte_carlo: bool,
    pub mc_samples: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { cases: 10_000, seed: 2024, monte_carlo: true, mc_samples: 2_000_000 }
    }
}

struct Inputs {
    rng: StreamRng,
}

impl Inputs {
    fn new(seed: u64, suite: u64) -> Inputs {
        Inputs { rng: stream(seed, suite) }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    fn amps(&mut self) -> AmplitudePair {
        loop {
            let v: [f64; 4] = std::array::from_fn(|_| self.uniform(-2.0, 2.0));
            let a = AmplitudePair::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
            if !a.is_zero() {
                return a;
            }
        }
    }

    fn unit(&mut self) -> PolarizationVector {
        let u = self.uniform(-1.0, 1.0);
        let phi = self.uniform(0.0, std::f64::consts::TAU);
        let s = (1.0 - u * u).sqrt();
        let v = Vec3::new(s * phi.cos(), s * phi.sin(), u).normalize();
        PolarizationVector { x: v.x, y: v.y, z: v.z }
    }

    fn ball(&mut self) -> PolarizationVector {
        let r = self.uniform(0.0, 1.0);
        self.unit().scaled(r)
    }
}

/// Runs `case` and tracks the worst deviation; errors from degenerate
/// inputs are skipped by the case itself returning `None`.
fn suite(
    name: &'static str,
    tolerance: f64,
    cases: usize,
    mut case: impl FnMut(usize) -> std::result::Result<Option<f64>, String>,
) -> SuiteResult {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut error = None;
    let mut count = 0;
    for i in 0..cases {
        match case(i) {
            Ok(Some(d)) => {
                worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
                count += 1;
            }
            Ok(None) => {}
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }
    SuiteResult {
        name,
        cases: count,
        worst,
        tolerance,
        seconds: start.elapsed().as_secs_f64(),
        passed: error.is_none() && count > 0 && worst <= tolerance,
        error,
    }
}

fn max_diff(a: &SpinDensityMatrix, b: &SpinDensityMatrix) -> f64 {
    (a.matrix() - b.matrix()).iter().fold(0.0, |m, v| m.max(v.norm()))
}

fn skip_degenerate<T>(r: Result<T>) -> std::result::Result<Option<T>, String> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e2e_core::Error::DegenerateState) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

pub fn run_suites(f: &Formulas, opts: &ValidateOptions) -> Vec<SuiteResult> {
    let n = opts.cases;
    let mut out = Vec::new();

    let mut g = Inputs::new(opts.seed, 1);
    out.push(suite("pure concurrence: closed form vs Wootters", 1e-10, n, |_| {
        let (a, z1, z2) = (g.amps(), g.unit(), g.unit());
        let Some(rho) = skip_degenerate(rho_pure(&a, &z1, &z2))? else { return Ok(None) };
        let Some(c) = skip_degenerate((f.concurrence_pure)(&a, &z1, &z2))? else { return Ok(None) };
        Ok(Some((c - concurrence_wootters(&rho).map_err(|e| e.to_string())?).abs()))
    }));

    let mut g = Inputs::new(opts.seed, 2);
    let zero = PolarizationVector::ZERO;
    out.push(suite("mixed concurrence: unpolarized and one-unpolarized", 1e-10, n, |i| {
        let a = g.amps();
        if i % 2 == 0 {
            let rho = rho_mixed(&a, &zero, &zero).map_err(|e| e.to_string())?;
            let c = (f.concurrence_unpolarized)(&a).map_err(|e| e.to_string())?;
            Ok(Some((c - concurrence_wootters(&rho).map_err(|e| e.to_string())?).abs()))
        } else {
            let rho = rho_mixed(&a, &PolarizationVector::Z, &zero).map_err(|e| e.to_string())?;
            let Some(c) = skip_degenerate((f.concurrence_pure)(&a, &PolarizationVector::Z, &PolarizationVector::X))?
            else {
                return Ok(None);
            };
            Ok(Some((c - concurrence_wootters(&rho).map_err(|e| e.to_string())?).abs()))
        }
    }));

    let mut g = Inputs::new(opts.seed, 3);
    out.push(suite("Bell-basis matrix: closed form vs construction", 1e-12, n / 5, |i| {
        let a = g.amps();
        let (p1, p2) = if i % 2 == 0 { (g.unit(), g.unit()) } else { (g.ball(), g.ball()) };
        let Some(rho) = skip_degenerate(rho_mixed(&a, &p1, &p2))? else { return Ok(None) };
        let built = to_bell_basis(&rho).map_err(|e| e.to_string())?;
        let Some(closed) = skip_degenerate((f.bell_basis)(&a, &p1, &p2))? else { return Ok(None) };
        Ok(Some(max_diff(&built, &closed)))
    }));

    let mut g = Inputs::new(opts.seed, 4);
    let settings = DetectorSettings::default();
    out.push(suite("CHSH: closed form vs Tr(rho Pi)", 1e-12, n, |i| {
        let a = g.amps();
        let (p1, p2) = if i % 2 == 0 { (g.unit(), g.unit()) } else { (g.ball(), g.ball()) };
        let Some(rho) = skip_degenerate(rho_mixed(&a, &p1, &p2))? else { return Ok(None) };
        let Some(c) = skip_degenerate((f.chsh)(&a, &p1, &p2))? else { return Ok(None) };
        Ok(Some((c - chsh_expectation(&rho, &settings).map_err(|e| e.to_string())?).abs()))
    }));

    let mut g = Inputs::new(opts.seed, 5);
    let kin = build_coplanar(2.0, 0.6, 0.4, -1.1, -0.5).expect("open channel");
    out.push(suite("CHSH: cross-section form times 2 sqrt 2", 1e-12, n, |_| {
        let (a, p1, p2) = (g.amps(), g.ball(), g.ball());
        let cs = tdcs_basic(&a, &kin);
        let Some(rho) = skip_degenerate(rho_mixed(&a, &p1, &p2))? else { return Ok(None) };
        let lhs = (f.bell_lhs)(cs.i_anti, cs.i_par, &p1, &p2).map_err(|e| e.to_string())?;
        let pi = chsh_expectation(&rho, &settings).map_err(|e| e.to_string())?;
        Ok(Some((lhs * 2.0 * SQRT_2 - pi).abs()))
    }));

    let mut g = Inputs::new(opts.seed, 6);
    out.push(suite("CHSH: Tsirelson bound", 1e-12, n / 5, |_| {
        let s = DetectorSettings {
            a1: g.unit().to_vec3(),
            a2: g.unit().to_vec3(),
            b1: g.unit().to_vec3(),
            b2: g.unit().to_vec3(),
        };
        let op = chsh_operator(&s).map_err(|e| e.to_string())?;
        Ok(Some((spectral_radius(&op) - 2.0 * SQRT_2).max(0.0)))
    }));

    out.push(suite("PWBA: t_d = t_e at symmetric angles", 1e-15, 179, |i| {
        let th = (i as f64 + 1.0).to_radians();
        let kin = build_coplanar(2.0, 0.75, th, -th, -0.5).map_err(|e| e.to_string())?;
        let p = pwba_amplitudes(&kin).map_err(|e| e.to_string())?;
        Ok(Some((p.td - p.te).norm() / p.td.norm()))
    }));

    if opts.monte_carlo {
        let points = [(FRAC_PI_4, -FRAC_PI_4), (0.3, -1.0)];
        out.push(suite("3C free limit: pull against plane-wave closed form", 3.0, points.len(), |i| {
            let (ta, tb) = points[i];
            let kin = build_coplanar(2.0, 0.75, ta, tb, -0.5).map_err(|e| e.to_string())?;
            let cfg = McConfig { samples: opts.mc_samples, seed: opts.seed, debug_free_limit: true, ..Default::default() };
            let est = c3_tmatrix(&kin, Ordering::Direct, &cfg).map_err(|e| e.to_string())?;
            let oracle = free_limit_amplitude(&kin, Ordering::Direct).map_err(|e| e.to_string())?;
            let pull_re = (est.value.re - oracle.re) / est.stderr_re;
            let pull_im = (est.value.im - oracle.im) / est.stderr_im;
            Ok(Some(pull_re.abs().max(pull_im.abs())))
        }));
    }
    out
}
