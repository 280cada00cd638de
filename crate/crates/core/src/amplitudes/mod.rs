//! Direct and exchange amplitudes for electron-impact ionization of
//! hydrogen 1s: the plane-wave Born approximation and the 3C model.

mod coulomb;
mod mc;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::Kinematics;
use crate::linalg::Vec3;
use crate::spin::AmplitudePair;

pub use coulomb::{coulomb_wave, ee_correlation};
pub use mc::{c3_pair, c3_tmatrix};

/// Fewest samples for which an estimate is reported.
pub const MIN_SAMPLES: u64 = 1_000;

/// Monte Carlo settings for the 3C integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    /// Number of mirrored sample pairs.
    pub samples: u64,
    pub seed: u64,
    /// Decay rate of the exponential part of the projectile radial density.
    pub lambda1: f64,
    /// Radial cutoff (bohr). The projectile coordinate is weighted by a
    /// window that is flat up to r_max/5 and falls smoothly to zero at r_max.
    pub r_max: f64,
    /// Replace all distortions by plane waves and drop the e-e factor.
    pub debug_free_limit: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 10_000_000, seed: 0, lambda1: 1.0, r_max: 20.0, debug_free_limit: false }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::MonteCarlo(format!(
                "sample budget {} is below the minimum of {MIN_SAMPLES}",
                self.samples
            )));
        }
        if !(self.lambda1 > 0.0 && self.lambda1.is_finite()) {
            return Err(Error::MonteCarlo(format!("lambda1 = {} must be positive", self.lambda1)));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::MonteCarlo(format!("r_max = {} must be positive", self.r_max)));
        }
        Ok(())
    }
}

/// An amplitude with its Monte Carlo uncertainty (zero for analytic models).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeEstimate {
    pub value: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    /// Samples whose integrand was not finite and were dropped.
    pub rejected: u64,
}

impl AmplitudeEstimate {
    pub fn exact(value: Complex64) -> Self {
        AmplitudeEstimate { value, stderr_re: 0.0, stderr_im: 0.0, rejected: 0 }
    }

    /// Standard error of the complex value, √(σ_re² + σ_im²).
    pub fn stderr(&self) -> f64 {
        self.stderr_re.hypot(self.stderr_im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// Electron 1 (the projectile) detected at A.
    Direct,
    /// Electron 1 detected at B.
    Exchange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Pwba,
    C3,
}

/// Hydrogen-like 1s orbital √(Z³/π) e^{−Z r}.
pub fn hydrogen_1s_position(r: &Vec3, z: f64) -> f64 {
    (z * z * z / PI).sqrt() * (-z * r.norm()).exp()
}

/// Momentum-space 1s orbital 8√π Z^{5/2}/(q² + Z²)², normalized so that
/// ∫ d³q/(2π)³ |φ|² = 1.
pub fn hydrogen_1s_momentum(q: &Vec3, z: f64) -> f64 {
    momentum_radial(q.norm_squared(), z)
}

fn momentum_radial(q2: f64, z: f64) -> f64 {
    let d = q2 + z * z;
    8.0 * PI.sqrt() * z.powf(2.5) / (d * d)
}

fn transfers(kin: &Kinematics) -> Result<(f64, f64)> {
    let qa = (kin.k0 - kin.ka).norm_squared();
    let qb = (kin.k0 - kin.kb).norm_squared();
    if !(qa > 0.0 && qb > 0.0) {
        return Err(Error::SingularKinematics(
            "vanishing momentum transfer to one of the outgoing electrons".into(),
        ));
    }
    Ok((qa, qb))
}

/// Plane-wave Born amplitudes for hydrogen 1s.
pub fn pwba_amplitudes(kin: &Kinematics) -> Result<AmplitudePair> {
    let (qa, qb) = transfers(kin)?;
    let phi = hydrogen_1s_momentum(&kin.q, 1.0);
    Ok(AmplitudePair::new(Complex64::from(4.0 * PI * phi / qa), Complex64::from(4.0 * PI * phi / qb)))
}

/// The 3C integral with plane waves throughout and no e-e factor, in closed
/// form: 4π/|k0 − k1|² (φ(q) − φ(k2)). The second term is the projectile-
/// nucleus potential, which cannot ionize without distortion.
pub fn free_limit_amplitude(kin: &Kinematics, ordering: Ordering) -> Result<Complex64> {
    let (qa, qb) = transfers(kin)?;
    let (q1, k2) = match ordering {
        Ordering::Direct => (qa, kin.kb),
        Ordering::Exchange => (qb, kin.ka),
    };
    let v = 4.0 * PI / q1 * (hydrogen_1s_momentum(&kin.q, 1.0) - hydrogen_1s_momentum(&k2, 1.0));
    Ok(Complex64::from(v))
}

/// Both amplitudes under the chosen model. For 3C the exchange estimate
/// reuses the direct run's sample set.
pub fn amplitude_pair(
    model: Model,
    kin: &Kinematics,
    cfg: &McConfig,
) -> Result<(AmplitudePair, [AmplitudeEstimate; 2])> {
    match model {
        Model::Pwba => {
            let p = pwba_amplitudes(kin)?;
            Ok((p, [AmplitudeEstimate::exact(p.td), AmplitudeEstimate::exact(p.te)]))
        }
        Model::C3 => {
            let [d, e] = c3_pair(kin, cfg)?;
            Ok((AmplitudePair::new(d.value, e.value), [d, e]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::build_coplanar;

    #[test]
    fn position_orbital_values() {
        let v = hydrogen_1s_position(&Vec3::zeros(), 1.0);
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-16);
        let v = hydrogen_1s_position(&Vec3::new(0.0, 0.6, 0.8), 1.0);
        assert!((v - (-1.0f64).exp() / PI.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn momentum_orbital_values() {
        assert!((hydrogen_1s_momentum(&Vec3::zeros(), 1.0) - 8.0 * PI.sqrt()).abs() < 1e-14);
        let q = Vec3::new(0.3, -0.4, 1.1);
        assert_eq!(hydrogen_1s_momentum(&q, 1.0), hydrogen_1s_momentum(&-q, 1.0));
    }

    #[test]
    fn pwba_examples() {
        let th = 45f64.to_radians();
        let k = build_coplanar(2.0, 0.75, th, -th, -0.5).unwrap();
        let p = pwba_amplitudes(&k).unwrap();
        assert_eq!(p.td, p.te);
        let qn = (2.0 * 1.5f64.sqrt() * th.cos() - 2.0).abs();
        let want = 4.0 * PI * momentum_radial(qn * qn, 1.0) / (k.k0 - k.ka).norm_squared();
        assert!((p.td.re - want).abs() < 1e-13 * want);

        let k = build_coplanar(2.0, 0.6, 0.4, -1.3, -0.5).unwrap();
        let p = pwba_amplitudes(&k).unwrap();
        let ratio = (k.k0 - k.kb).norm_squared() / (k.k0 - k.ka).norm_squared();
        assert!((p.td.re / p.te.re - ratio).abs() < 1e-13 * ratio);
    }

    #[test]
    fn pwba_pair_has_no_error_bars() {
        let k = build_coplanar(2.0, 0.75, 0.7, -0.7, -0.5).unwrap();
        let (p, e) = amplitude_pair(Model::Pwba, &k, &McConfig::default()).unwrap();
        assert_eq!(p.td, p.te);
        assert_eq!((e[0].stderr(), e[1].stderr()), (0.0, 0.0));
    }

    #[test]
    fn zero_transfer_is_singular() {
        // kA = k0 needs eA = e0, i.e. an unphysical eT > 0; construct it directly.
        let k = build_coplanar(2.0, 0.5, 0.0, 1.0, 0.5).unwrap();
        assert!(matches!(pwba_amplitudes(&k), Err(Error::SingularKinematics(_))));
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::default().validate().is_ok());
        assert!(McConfig { samples: 999, ..Default::default() }.validate().is_err());
        assert!(McConfig { lambda1: 0.0, ..Default::default() }.validate().is_err());
        assert!(McConfig { r_max: f64::NAN, ..Default::default() }.validate().is_err());
    }
}
