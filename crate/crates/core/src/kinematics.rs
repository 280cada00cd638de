//! Coplanar (e,2e) kinematics for a fixed target and the spin-resolved
//! triple differential cross sections.
//!
//! The beam runs along +z and the scattering plane is xz. Emission angles
//! are measured from the beam, positive towards +x.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::spin::AmplitudePair;

/// One hartree in electron volts.
pub const HARTREE_EV: f64 = 27.211386245988;

pub fn ev_to_hartree(ev: f64) -> f64 {
    ev / HARTREE_EV
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub e0: f64,
    pub e_a: f64,
    pub e_b: f64,
    pub e_t: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    pub k0: Vec3,
    pub ka: Vec3,
    pub kb: Vec3,
    /// Momentum given to the residual system, kA + kB − k0.
    pub q: Vec3,
}

impl Kinematics {
    /// |k0 − kA|
    pub fn transfer_a(&self) -> f64 {
        (self.k0 - self.ka).norm()
    }

    /// |k0 − kB|
    pub fn transfer_b(&self) -> f64 {
        (self.k0 - self.kb).norm()
    }

    /// k_A k_B / ((2π)⁵ k₀)
    pub fn prefactor(&self) -> f64 {
        self.ka.norm() * self.kb.norm() / ((2.0 * PI).powi(5) * self.k0.norm())
    }

    /// The same collision with the two detected electrons relabeled.
    pub fn swapped(&self) -> Kinematics {
        Kinematics {
            e_a: self.e_b,
            e_b: self.e_a,
            theta_a: self.theta_b,
            theta_b: self.theta_a,
            ka: self.kb,
            kb: self.ka,
            ..*self
        }
    }
}

fn in_plane(k: f64, theta: f64) -> Vec3 {
    let (s, c) = theta.sin_cos();
    Vec3::new(k * s, 0.0, k * c)
}

/// Coplanar kinematics with `eA = e0 + eT − eB` from energy conservation.
pub fn build_coplanar(e0: f64, e_b: f64, theta_a: f64, theta_b: f64, e_t: f64) -> Result<Kinematics> {
    for (name, v) in [("e0", e0), ("eB", e_b), ("thetaA", theta_a), ("thetaB", theta_b), ("eT", e_t)] {
        if !v.is_finite() {
            return Err(Error::Domain(format!("kinematics input {name} is not finite")));
        }
    }
    if e0 <= 0.0 {
        return Err(Error::Domain(format!("incident energy {e0} must be positive")));
    }
    if e_b <= 0.0 {
        return Err(Error::ClosedChannel { e_a: e_b });
    }
    let e_a = e0 + e_t - e_b;
    if e_a <= 0.0 {
        return Err(Error::ClosedChannel { e_a });
    }
    let k0 = Vec3::new(0.0, 0.0, (2.0 * e0).sqrt());
    let ka = in_plane((2.0 * e_a).sqrt(), theta_a);
    let kb = in_plane((2.0 * e_b).sqrt(), theta_b);
    Ok(Kinematics { e0, e_a, e_b, e_t, theta_a, theta_b, k0, ka, kb, q: ka + kb - k0 })
}

/// Spin-resolved cross sections in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSections {
    /// I↑↑
    pub i_par: f64,
    /// I↑↓ direct part
    pub i_anti_d: f64,
    /// I↑↓ exchange part
    pub i_anti_e: f64,
    /// I↑↓ = direct + exchange
    pub i_anti: f64,
    pub i_s: f64,
    pub i_t: f64,
}

impl CrossSections {
    /// Spin-averaged cross section for unpolarized electrons.
    pub fn unpolarized(&self) -> f64 {
        self.i_s + self.i_t
    }
}

pub fn tdcs_basic(amps: &AmplitudePair, kin: &Kinematics) -> CrossSections {
    let f = kin.prefactor();
    let i_par = f * (amps.td - amps.te).norm_sqr();
    let i_anti_d = f * amps.td.norm_sqr();
    let i_anti_e = f * amps.te.norm_sqr();
    CrossSections {
        i_par,
        i_anti_d,
        i_anti_e,
        i_anti: i_anti_d + i_anti_e,
        i_s: 0.25 * f * (amps.td + amps.te).norm_sqr(),
        i_t: 0.75 * i_par,
    }
}

/// Spin-unresolved cross section for initial polarizations with P₁·P₂ = `p_dot`.
pub fn tdcs_polarized(amps: &AmplitudePair, p_dot: f64, kin: &Kinematics) -> Result<f64> {
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&p_dot) {
        return Err(Error::Domain(format!("P1·P2 = {p_dot} outside [-1, 1]")));
    }
    let u = amps.td.norm_sqr() + amps.te.norm_sqr() - (1.0 + p_dot) * amps.interference();
    Ok(kin.prefactor() * u.max(0.0))
}
