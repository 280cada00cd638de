//! Concurrence, entanglement of formation and entropies.

use nalgebra::SVD;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, Mat4};
use crate::spin::{AmplitudePair, PairSpinState, PolarizationVector, SpinDensityMatrix};

const CLAMP_TOL: f64 = 1e-10;

/// σ_y ⊗ σ_y in the product basis.
fn sigma_yy() -> Mat4 {
    let o = Complex64::from(1.0);
    let z = Complex64::from(0.0);
    Mat4::new(
        z, z, z, -o, //
        z, z, o, z, //
        z, o, z, z, //
        -o, z, z, z,
    )
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// The square roots of the eigenvalues of ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y) are the
/// singular values of τ = Vᵀ(σ_y⊗σ_y)V, where the columns of V are the
/// eigenvectors of ρ scaled by the square roots of their weights. Working
/// with τ keeps the small roots at roundoff level instead of √roundoff.
pub fn concurrence_wootters(rho: &SpinDensityMatrix) -> Result<f64> {
    rho.require_product()?;
    rho.validate()?;
    let (vals, vecs) = linalg::hermitian_eigen4(rho.matrix());
    // Weights at the roundoff floor are zero; their square roots would not be.
    let floor = 16.0 * f64::EPSILON * vals.iter().fold(0.0f64, |m, p| m.max(*p));
    let mut v = vecs;
    for (k, &p) in vals.iter().enumerate() {
        let s = Complex64::from(if p > floor { p.sqrt() } else { 0.0 });
        for r in 0..4 {
            v[(r, k)] *= s;
        }
    }
    let tau = v.transpose() * sigma_yy() * v;
    let mut sv: Vec<f64> = SVD::new(tau, false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let c = sv[0] - sv[1] - sv[2] - sv[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Pure-state concurrence in terms of the two polarization directions.
pub fn concurrence_pure_closed(
    amps: &AmplitudePair,
    zeta1: &PolarizationVector,
    zeta2: &PolarizationVector,
) -> Result<f64> {
    for z in [zeta1, zeta2] {
        if !z.is_unit() {
            return Err(Error::Domain(format!("spin direction must be a unit vector, |ζ| = {}", z.norm())));
        }
    }
    let dot = zeta1.dot(zeta2);
    let u = amps.td.norm_sqr() + amps.te.norm_sqr() - amps.interference() * (1.0 + dot);
    if amps.is_zero() || !(u > 1e-24 * (amps.td.norm_sqr() + amps.te.norm_sqr())) {
        return Err(Error::DegenerateState);
    }
    Ok((amps.td.norm() * amps.te.norm() * (1.0 - dot) / u).clamp(0.0, 1.0))
}

/// Concurrence √(2(1 − Tr ρ₁²)) of a normalized pure pair state. The purity
/// defect is evaluated through 1 − Tr ρ₁² = 2|ψ↑↑ψ↓↓ − ψ↑↓ψ↓↑|², which is
/// free of cancellation near product states.
pub fn concurrence_pure_from_state(psi: &PairSpinState) -> Result<f64> {
    if !psi.is_normalized() {
        return Err(Error::Validation(format!("pair state norm² {} is not 1", psi.norm_sqr())));
    }
    let a = &psi.amps;
    let det = a[0] * a[3] - a[1] * a[2];
    let defect = 2.0 * det.norm_sqr();
    Ok((2.0 * defect).sqrt().min(1.0))
}

/// Concurrence for unpolarized incoming electrons. Nonzero only when the
/// singlet channel dominates.
pub fn concurrence_unpolarized(amps: &AmplitudePair) -> Result<f64> {
    if amps.is_zero() {
        return Err(Error::DegenerateState);
    }
    let gate = (amps.td + amps.te).norm_sqr() - 3.0 * (amps.td - amps.te).norm_sqr();
    if gate <= 0.0 {
        return Ok(0.0);
    }
    let (d2, e2, re) = (amps.td.norm_sqr(), amps.te.norm_sqr(), amps.interference());
    let c = (4.0 * re - d2 - e2) / (2.0 * (d2 + e2 - re));
    Ok(c.clamp(0.0, 1.0))
}

/// Concurrence from singlet and triplet cross sections.
pub fn singlet_triplet_concurrence(i_s: f64, i_t: f64) -> Result<f64> {
    if !(i_s >= 0.0 && i_t >= 0.0) || !(i_s.is_finite() && i_t.is_finite()) {
        return Err(Error::Domain(format!("cross sections must be nonnegative: I_s = {i_s}, I_t = {i_t}")));
    }
    if i_s + i_t == 0.0 {
        return Err(Error::Domain("singlet and triplet cross sections both vanish".into()));
    }
    if i_s <= i_t {
        return Ok(0.0);
    }
    Ok((i_s - i_t) / (i_s + i_t))
}

fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

fn check_concurrence(c: f64) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&c) {
        return Err(Error::Domain(format!("concurrence {c} outside [0, 1]")));
    }
    Ok(c.clamp(0.0, 1.0))
}

/// E_F(C) = h((1 + √(1 − C²))/2), base-2 logarithms.
pub fn entanglement_of_formation(c: f64) -> Result<f64> {
    let c = check_concurrence(c)?;
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// Entropy of either marginal of a pure pair state with concurrence `c`.
pub fn entropy_from_concurrence(c: f64) -> Result<f64> {
    entanglement_of_formation(c)
}

/// −Tr ρ₁ log₂ ρ₁ with 0·log 0 = 0.
pub fn von_neumann_entropy(rho1: &Mat2) -> Result<f64> {
    let ev = linalg::hermitian_eigenvalues2(rho1);
    if ev[0] < -CLAMP_TOL {
        return Err(Error::Validation(format!("reduced matrix has eigenvalue {:e}", ev[0])));
    }
    Ok(ev
        .iter()
        .map(|&p| if p <= 0.0 { 0.0 } else { -p * p.log2() })
        .sum::<f64>()
        .max(0.0))
}

/// 1 − Tr ρ₁².
pub fn linear_entropy(rho1: &Mat2) -> f64 {
    1.0 - (rho1 * rho1).trace().re
}
