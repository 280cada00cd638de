//! Importance-sampled Monte Carlo for the six-dimensional 3C T-matrix
//! integral
//!
//!   t = ∫∫ ψ*_{k1}(r1) ψ*_{k2}(r2) f*_{k12}(r12) (1/r12 − 1/r1) e^{ik0·r1} ψ_1s(r2),
//!
//! with (k1, k2) = (kA, kB) for the direct and (kB, kA) for the exchange
//! amplitude, and k12 = (k1 − k2)/2.
//!
//! Sampling:
//! * r2: |r2| ~ Gamma(3, 1) with a uniform direction, density e^{−r2}/(8π).
//! * r1: an even mixture centred on the nucleus and on r2. The offset has a
//!   radial density mixing a truncated exponential (rate λ₁) with a uniform
//!   law on [0, r_max), spread uniformly over directions. The 1/s² of the
//!   3-D density absorbs both Coulomb singularities.
//! * Every point is paired with its mirror image through the plane that
//!   contains k0 and bisects (kA, kB). At symmetric kinematics the mirror
//!   exchanges the roles of kA and kB, so direct and exchange estimates are
//!   built from identical terms and agree bit for bit.
//!
//! The r1 integral converges only conditionally. It is regularized by a
//! window that equals 1 out to r_max/5 and falls to 0 at r_max through a C^∞
//! step. Far out, the bracket (1/r12 − 1/r1) is a dipole, and the window's
//! error on it is the Fourier transform of the step at p·L (p = |k0 − k1|,
//! L the step length), which decays faster than any power. A window that is
//! not flat near the origin, such as a Gaussian, smooths the 4π/p² pole of
//! the Coulomb transform and leaves an O(1/(pL)²) bias. r2 is cut at r_max,
//! where the bound state has decayed by e^{−r_max}.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, UnitSphere};
use rayon::prelude::*;

use super::coulomb::{table, CoulombTable};
use super::{AmplitudeEstimate, McConfig, Ordering};
use crate::error::{Error, Result};
use crate::kinematics::Kinematics;
use crate::linalg::Vec3;
use crate::rng::stream;
use crate::special::coulomb_norm;
use crate::sum::Neumaier;

/// Mirrored pairs per RNG stream. Fixed, so results do not depend on how
/// chunks are spread over threads.
const CHUNK: u64 = 4096;

/// Weight of the exponential part of the projectile radial density.
const EXP_WEIGHT: f64 = 0.4;

/// Start of the projectile window's fall-off, as a fraction of r_max.
const WINDOW_START: f64 = 0.2;

#[inline]
fn window(r: f64, r_max: f64) -> f64 {
    let t = ((r - WINDOW_START * r_max) / ((1.0 - WINDOW_START) * r_max)).clamp(0.0, 1.0);
    let f = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
    let (a, b) = (f(1.0 - t), f(t));
    a / (a + b)
}

/// Largest tolerated fraction of dropped samples.
const MAX_REJECTED_FRACTION: f64 = 1e-3;

enum Wave {
    Plane,
    Coulomb { k: f64, table: Arc<CoulombTable> },
}

impl Wave {
    fn new(k: f64, xi: f64, r_extent: f64) -> Result<Wave> {
        Ok(Wave::Coulomb { k, table: table(xi, 2.0 * k * r_extent)? })
    }

    /// Distortion factor without the plane wave: N(ξ) 1F1(iξ, 1, −i(kr + k·r)).
    #[inline]
    fn distortion(&self, kvec: &Vec3, r: &Vec3, rn: f64) -> Complex64 {
        match self {
            Wave::Plane => Complex64::new(1.0, 0.0),
            Wave::Coulomb { k, table } => {
                let s = (k * rn + kvec.dot(r)).max(0.0);
                table.eval(s.min(table.s_max()))
            }
        }
    }
}

struct Integrand {
    k1: Vec3,
    k2: Vec3,
    k12: Vec3,
    // k0 − k1, the net plane-wave momentum on r1.
    p1: Vec3,
    wave1: Wave,
    wave2: Wave,
    corr: Wave,
    r_max: f64,
}

impl Integrand {
    #[inline]
    fn eval(&self, r1: &Vec3, r2: &Vec3) -> Complex64 {
        let n1 = r1.norm();
        let n2 = r2.norm();
        if n1 >= self.r_max || n2 >= self.r_max {
            return Complex64::new(0.0, 0.0);
        }
        let r12 = r1 - r2;
        let n12 = r12.norm();
        let phase = Complex64::from_polar(1.0, self.p1.dot(r1) - self.k2.dot(r2));
        let d1 = self.wave1.distortion(&self.k1, r1, n1);
        let d2 = self.wave2.distortion(&self.k2, r2, n2);
        let f = self.corr.distortion(&self.k12, &r12, n12);
        let radial = (1.0 / n12 - 1.0 / n1) * (-n2).exp() / PI.sqrt() * window(n1, self.r_max);
        (d1 * d2 * f).conj() * phase * radial
    }
}

/// Reflection r → r − 2(n·r)n.
#[derive(Clone, Copy)]
struct Mirror {
    n: Vec3,
}

impl Mirror {
    fn for_kinematics(kin: &Kinematics) -> Mirror {
        let axis = kin.k0 / kin.k0.norm();
        let perp = |k: &Vec3| {
            let p = k - axis * k.dot(&axis);
            let n = p.norm();
            if n > 1e-12 * k.norm().max(1.0) {
                Some(p / n)
            } else {
                None
            }
        };
        let a = perp(&kin.ka);
        let b = perp(&kin.kb);
        if let (Some(a), Some(b)) = (a, b) {
            let d = a - b;
            if d.norm() > 1e-12 {
                return Mirror { n: d / d.norm() };
            }
        }
        let n = match a.or(b) {
            Some(p) => {
                let c = axis.cross(&p);
                c / c.norm()
            }
            None => Vec3::new(0.0, 1.0, 0.0),
        };
        Mirror { n }
    }

    #[inline]
    fn apply(&self, r: &Vec3) -> Vec3 {
        r - self.n * (2.0 * self.n.dot(r))
    }
}

struct Sampler {
    lambda: f64,
    r_max: f64,
    exp_norm: f64,
    r2: Gamma<f64>,
}

impl Sampler {
    fn new(cfg: &McConfig) -> Sampler {
        Sampler {
            lambda: cfg.lambda1,
            r_max: cfg.r_max,
            exp_norm: 1.0 - (-cfg.lambda1 * cfg.r_max).exp(),
            r2: Gamma::new(3.0, 1.0).expect("valid gamma parameters"),
        }
    }

    #[inline]
    fn direction<R: Rng>(rng: &mut R) -> Vec3 {
        let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
        Vec3::new(x, y, z)
    }

    #[inline]
    fn offset_radius<R: Rng>(&self, rng: &mut R) -> f64 {
        if rng.random::<f64>() < EXP_WEIGHT {
            -(1.0 - rng.random::<f64>() * self.exp_norm).ln() / self.lambda
        } else {
            rng.random::<f64>() * self.r_max
        }
    }

    /// 3-D density of an offset vector of length s.
    #[inline]
    fn offset_density(&self, s: f64) -> f64 {
        if s >= self.r_max {
            return 0.0;
        }
        let radial =
            EXP_WEIGHT * self.lambda * (-self.lambda * s).exp() / self.exp_norm + (1.0 - EXP_WEIGHT) / self.r_max;
        radial / (4.0 * PI * s * s)
    }

    /// One point (r1, r2) and its joint density.
    #[inline]
    fn draw<R: Rng>(&self, rng: &mut R) -> (Vec3, Vec3, f64) {
        let rho2 = self.r2.sample(rng);
        let r2 = Self::direction(rng) * rho2;
        let centred_on_r2 = rng.random::<f64>() < 0.5;
        let off = Self::direction(rng) * self.offset_radius(rng);
        let r1 = if centred_on_r2 { r2 + off } else { off };
        let p2 = (-rho2).exp() / (8.0 * PI);
        let p1 = 0.5 * self.offset_density(r1.norm()) + 0.5 * self.offset_density((r1 - r2).norm());
        (r1, r2, p1 * p2)
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    re: Neumaier,
    im: Neumaier,
    re2: Neumaier,
    im2: Neumaier,
    accepted: u64,
    rejected: u64,
}

impl Moments {
    fn merge(&mut self, o: &Moments) {
        self.re.merge(&o.re);
        self.im.merge(&o.im);
        self.re2.merge(&o.re2);
        self.im2.merge(&o.im2);
        self.accepted += o.accepted;
        self.rejected += o.rejected;
    }
}

fn build_integrand(kin: &Kinematics, ordering: Ordering, cfg: &McConfig) -> Result<Option<Integrand>> {
    let (k1, k2, e1, e2) = match ordering {
        Ordering::Direct => (kin.ka, kin.kb, kin.e_a, kin.e_b),
        Ordering::Exchange => (kin.kb, kin.ka, kin.e_b, kin.e_a),
    };
    let k12 = (k1 - k2) * 0.5;
    let r = cfg.r_max;
    let (wave1, wave2, corr) = if cfg.debug_free_limit {
        (Wave::Plane, Wave::Plane, Wave::Plane)
    } else {
        let kab = k12.norm();
        if kab == 0.0 {
            return Ok(None);
        }
        let xi_ab = 1.0 / (2.0 * kab);
        if coulomb_norm(xi_ab)? == Complex64::new(0.0, 0.0) {
            return Ok(None);
        }
        // Magnitudes from the energies, so mirrored kinematics share tables.
        let ka = (2.0 * e1).sqrt();
        let kb = (2.0 * e2).sqrt();
        (Wave::new(ka, -1.0 / ka, r)?, Wave::new(kb, -1.0 / kb, r)?, Wave::new(kab, xi_ab, 2.0 * r)?)
    };
    Ok(Some(Integrand { k1, k2, k12, p1: kin.k0 - k1, wave1, wave2, corr, r_max: r }))
}

fn check(kin: &Kinematics, cfg: &McConfig) -> Result<()> {
    cfg.validate()?;
    if kin.e_a <= 0.0 || kin.e_b <= 0.0 {
        return Err(Error::ClosedChannel { e_a: kin.e_a.min(kin.e_b) });
    }
    Ok(())
}

/// Runs the sampler once and scores every integrand on the same points.
fn integrate(kin: &Kinematics, cfg: &McConfig, integrands: &[&Integrand]) -> Result<Vec<AmplitudeEstimate>> {
    let mirror = Mirror::for_kinematics(kin);
    let sampler = Sampler::new(cfg);
    let n = cfg.samples;
    let chunks = n.div_ceil(CHUNK);

    let parts: Vec<Vec<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(cfg.seed, c);
            let count = CHUNK.min(n - c * CHUNK);
            let mut m = vec![Moments::default(); integrands.len()];
            for _ in 0..count {
                let (r1, r2, p) = sampler.draw(&mut rng);
                let (m1, m2) = (mirror.apply(&r1), mirror.apply(&r2));
                for (f, acc) in integrands.iter().zip(m.iter_mut()) {
                    let y = (f.eval(&r1, &r2) + f.eval(&m1, &m2)) / (2.0 * p);
                    if y.re.is_finite() && y.im.is_finite() {
                        acc.re.add(y.re);
                        acc.im.add(y.im);
                        acc.re2.add(y.re * y.re);
                        acc.im2.add(y.im * y.im);
                        acc.accepted += 1;
                    } else {
                        acc.rejected += 1;
                    }
                }
            }
            m
        })
        .collect();

    (0..integrands.len())
        .map(|i| {
            let mut total = Moments::default();
            for p in &parts {
                total.merge(&p[i]);
            }
            summarize(&total, n)
        })
        .collect()
}

fn summarize(total: &Moments, n: u64) -> Result<AmplitudeEstimate> {
    if total.rejected as f64 > MAX_REJECTED_FRACTION * n as f64 {
        return Err(Error::MonteCarlo(format!("{} of {n} samples rejected", total.rejected)));
    }
    if total.accepted < 2 {
        return Err(Error::MonteCarlo("too few accepted samples".into()));
    }
    let k = total.accepted as f64;
    let mean_re = total.re.value() / k;
    let mean_im = total.im.value() / k;
    let var = |s2: f64, mean: f64| ((s2 - k * mean * mean) / (k - 1.0)).max(0.0);
    Ok(AmplitudeEstimate {
        value: Complex64::new(mean_re, mean_im),
        stderr_re: (var(total.re2.value(), mean_re) / k).sqrt(),
        stderr_im: (var(total.im2.value(), mean_im) / k).sqrt(),
        rejected: total.rejected,
    })
}

/// Monte Carlo estimate of the 3C direct or exchange T matrix.
///
/// When the electrons leave with equal momenta the correlation factor
/// vanishes identically and the amplitude is exactly zero.
pub fn c3_tmatrix(kin: &Kinematics, ordering: Ordering, cfg: &McConfig) -> Result<AmplitudeEstimate> {
    check(kin, cfg)?;
    match build_integrand(kin, ordering, cfg)? {
        None => Ok(AmplitudeEstimate::exact(Complex64::new(0.0, 0.0))),
        Some(f) => Ok(integrate(kin, cfg, &[&f])?.remove(0)),
    }
}

/// Direct and exchange estimates from a single sample set. Each equals the
/// corresponding [`c3_tmatrix`] result bit for bit.
pub fn c3_pair(kin: &Kinematics, cfg: &McConfig) -> Result<[AmplitudeEstimate; 2]> {
    check(kin, cfg)?;
    let d = build_integrand(kin, Ordering::Direct, cfg)?;
    let e = build_integrand(kin, Ordering::Exchange, cfg)?;
    let zero = AmplitudeEstimate::exact(Complex64::new(0.0, 0.0));
    Ok(match (d, e) {
        (Some(d), Some(e)) => {
            let mut v = integrate(kin, cfg, &[&d, &e])?;
            let e = v.pop().expect("two estimates");
            [v.pop().expect("two estimates"), e]
        }
        (Some(d), None) => [integrate(kin, cfg, &[&d])?.remove(0), zero],
        (None, Some(e)) => [zero, integrate(kin, cfg, &[&e])?.remove(0)],
        (None, None) => [zero, zero],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::build_coplanar;

    #[test]
    fn mirror_swaps_symmetric_momenta() {
        let th = 40f64.to_radians();
        let kin = build_coplanar(2.0, 0.75, th, -th, -0.5).unwrap();
        let m = Mirror::for_kinematics(&kin);
        assert_eq!(m.apply(&kin.ka), kin.kb);
        assert_eq!(m.apply(&kin.k0), kin.k0);
        let r = Vec3::new(0.3, -1.7, 2.9);
        assert_eq!(m.apply(&r), Vec3::new(-0.3, -1.7, 2.9));
    }

    #[test]
    fn mirror_for_same_side_emission_is_the_scattering_plane() {
        let kin = build_coplanar(2.0, 0.5, 0.4, 1.2, -0.5).unwrap();
        let m = Mirror::for_kinematics(&kin);
        assert!((m.n.y.abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_integrates_to_one() {
        // Radial integral of the offset density over its support.
        let s = Sampler::new(&McConfig::default());
        let steps = 200_000;
        let h = s.r_max / steps as f64;
        let total: f64 = (0..steps)
            .map(|i| {
                let r = (i as f64 + 0.5) * h;
                4.0 * PI * r * r * s.offset_density(r) * h
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn equal_momenta_give_zero_amplitude() {
        let kin = build_coplanar(2.0, 0.75, 0.5, 0.5, -0.5).unwrap();
        let e = c3_tmatrix(&kin, Ordering::Direct, &McConfig { samples: 1000, ..Default::default() }).unwrap();
        assert_eq!(e.value, Complex64::new(0.0, 0.0));
        assert_eq!(e.stderr(), 0.0);
    }

    #[test]
    fn small_budget_is_rejected() {
        let kin = build_coplanar(2.0, 0.75, 0.5, -0.5, -0.5).unwrap();
        let cfg = McConfig { samples: 10, ..Default::default() };
        assert!(matches!(c3_tmatrix(&kin, Ordering::Direct, &cfg), Err(Error::MonteCarlo(_))));
    }
}
