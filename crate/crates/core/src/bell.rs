//! CHSH operator, its expectation value and the cross-section forms of the
//! Bell inequality.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::{Error, Result};
use crate::linalg::{kron, sigma_dot, Mat4, Vec3};
use crate::spin::{AmplitudePair, PolarizationVector, SpinDensityMatrix};

/// Threshold for the normalized Bell quantities; strict inequality.
pub const VIOLATION_THRESHOLD: f64 = FRAC_1_SQRT_2;

/// `x > 1/√2`, no tolerance band.
pub fn violates(x: f64) -> bool {
    x > VIOLATION_THRESHOLD
}

/// Measurement directions: a₁, a₂ on electron A, b₁, b₂ on electron B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSettings {
    pub a1: Vec3,
    pub a2: Vec3,
    pub b1: Vec3,
    pub b2: Vec3,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        DetectorSettings {
            a1: Vec3::new(0.0, 0.0, 1.0),
            a2: Vec3::new(1.0, 0.0, 0.0),
            b1: Vec3::new(-FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2),
            b2: Vec3::new(-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2),
        }
    }
}

impl DetectorSettings {
    pub fn new(a1: Vec3, a2: Vec3, b1: Vec3, b2: Vec3) -> Result<Self> {
        let s = DetectorSettings { a1, a2, b1, b2 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2), ("b1", self.b1), ("b2", self.b2)] {
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Validation(format!("detector axis {name} is not a unit vector")));
            }
        }
        Ok(())
    }

    /// The four (a, b) pairs with the sign each correlator enters S with.
    pub fn pairs(&self) -> [(Vec3, Vec3, f64); 4] {
        [(self.a1, self.b1, 1.0), (self.a1, self.b2, -1.0), (self.a2, self.b1, 1.0), (self.a2, self.b2, 1.0)]
    }
}

/// Π = A₁(B₁ − B₂) + A₂(B₁ + B₂).
pub fn chsh_operator(settings: &DetectorSettings) -> Result<Mat4> {
    settings.validate()?;
    let a1 = sigma_dot(&settings.a1);
    let a2 = sigma_dot(&settings.a2);
    let b1 = sigma_dot(&settings.b1);
    let b2 = sigma_dot(&settings.b2);
    Ok(kron(&a1, &(b1 - b2)) + kron(&a2, &(b1 + b2)))
}

/// Tr(ρΠ).
pub fn chsh_expectation(rho: &SpinDensityMatrix, settings: &DetectorSettings) -> Result<f64> {
    rho.require_product()?;
    let pi = chsh_operator(settings)?;
    Ok((rho.matrix() * pi).trace().re)
}

/// ⟨Π⟩ at the default settings written in terms of the amplitudes and the
/// polarization vectors (unit vectors or ensemble polarizations).
pub fn chsh_closed_form(amps: &AmplitudePair, p1: &PolarizationVector, p2: &PolarizationVector) -> Result<f64> {
    let s = amps.td.norm_sqr() + amps.te.norm_sqr();
    let re = amps.interference();
    let den = s - re * (1.0 + p1.dot(p2));
    if amps.is_zero() || !(den > 1e-24 * s) {
        return Err(Error::DegenerateState);
    }
    let num = 2.0 * re * (1.0 - p1.y * p2.y) - s * (p1.x * p2.x + p1.z * p2.z);
    Ok(SQRT_2 * num / den)
}

/// Normalized Bell quantity from the parallel and antiparallel cross
/// sections I↑↑ and I↑↓; equals ⟨Π⟩/(2√2). Violation when above 1/√2.
pub fn bell_lhs_cross_sections(
    i_anti: f64,
    i_par: f64,
    p1: &PolarizationVector,
    p2: &PolarizationVector,
) -> Result<f64> {
    if !(i_anti >= 0.0 && i_par >= 0.0) {
        return Err(Error::Domain(format!("cross sections must be nonnegative: {i_anti}, {i_par}")));
    }
    let d = p1.dot(p2);
    let den = i_anti * (1.0 - d) + i_par * (1.0 + d);
    if !(den > 0.0) {
        return Err(Error::Domain("Bell ratio has a vanishing denominator".into()));
    }
    Ok((i_anti * (1.0 - d) - i_par * (1.0 - p1.y * p2.y)) / den)
}

/// A = (I↑↓ − I↑↑)/(I↑↓ + I↑↑).
pub fn spin_asymmetry(i_anti: f64, i_par: f64) -> Result<f64> {
    let den = i_anti + i_par;
    if !(den > 0.0) {
        return Err(Error::Domain("spin asymmetry has a vanishing denominator".into()));
    }
    Ok((i_anti - i_par) / den)
}

/// Largest |eigenvalue| of Π.
pub fn spectral_radius(op: &Mat4) -> f64 {
    crate::linalg::hermitian_eigenvalues(op).iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::linalg::hermitian_defect;
    use crate::spin::{rho_pure, Basis, BellState};

    fn c(re: f64) -> Complex64 {
        Complex64::from(re)
    }

    #[test]
    fn operator_properties() {
        let pi = chsh_operator(&DetectorSettings::default()).unwrap();
        assert!(hermitian_defect(&pi) < 1e-14);
        assert!((spectral_radius(&pi) - 2.0 * SQRT_2).abs() < 1e-13);
        let bad = DetectorSettings { a1: Vec3::new(1.0, 1.0, 0.0), ..Default::default() };
        assert!(chsh_operator(&bad).is_err());
    }

    #[test]
    fn expectation_reference_states() {
        let s = DetectorSettings::default();
        let singlet = SpinDensityMatrix::bell_projector(BellState::PsiMinus);
        assert!((chsh_expectation(&singlet, &s).unwrap() - 2.0 * SQRT_2).abs() < 1e-12);
        let id = SpinDensityMatrix::maximally_mixed(Basis::Product);
        assert!(chsh_expectation(&id, &s).unwrap().abs() < 1e-15);
        let amps = AmplitudePair::new(c(1.0), c(0.0));
        let z = PolarizationVector::Z;
        let upup = rho_pure(&amps, &z, &z).unwrap();
        assert!((chsh_expectation(&upup, &s).unwrap() + SQRT_2).abs() < 1e-12);
        assert!((chsh_closed_form(&amps, &z, &z).unwrap() + SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn closed_form_singlet() {
        let amps = AmplitudePair::new(Complex64::new(0.4, -0.9), Complex64::new(0.4, -0.9));
        let z = PolarizationVector::Z;
        assert!((chsh_closed_form(&amps, &z, &-z).unwrap() - 2.0 * SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn cross_section_forms() {
        let z = PolarizationVector::Z;
        let y = PolarizationVector::Y;
        let v = bell_lhs_cross_sections(2.0, 0.0, &z, &-z).unwrap();
        assert_eq!(v, 1.0);
        assert!(violates(v));
        assert_eq!(bell_lhs_cross_sections(2.0, 0.7, &y, &y).unwrap(), 0.0);
        assert!(bell_lhs_cross_sections(0.0, 0.0, &z, &z).is_err());

        assert_eq!(spin_asymmetry(1.0, 0.0).unwrap(), 1.0);
        assert!(violates(spin_asymmetry(1.0, 0.0).unwrap()));
        assert_eq!(spin_asymmetry(2.0, 2.0).unwrap(), 0.0);
        let a = spin_asymmetry(3.0, 1.0).unwrap();
        assert_eq!(a, 0.5);
        assert!(!violates(a));
        assert!(spin_asymmetry(0.0, 0.0).is_err());
    }
}
