//! Two-qubit spin algebra for the outgoing electron pair.
//!
//! Product basis order is (↑↑, ↑↓, ↓↑, ↓↓), the first factor being the
//! electron seen by detector A. Bell basis order is (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, Mat4, Vec3, ONE, ZERO};

const UNIT_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub up: Complex64,
    pub down: Complex64,
}

impl Spinor {
    pub const UP: Spinor = Spinor { up: ONE, down: ZERO };
    pub const DOWN: Spinor = Spinor { up: ZERO, down: ONE };

    pub fn new(up: Complex64, down: Complex64) -> Result<Spinor> {
        let n = up.norm_sqr() + down.norm_sqr();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::Domain(format!("spinor norm² {n} is not 1")));
        }
        Ok(Spinor { up, down })
    }

    /// Pauli expectation ⟨σ⟩.
    pub fn polarization(&self) -> PolarizationVector {
        let c = self.up.conj() * self.down;
        PolarizationVector::raw(2.0 * c.re, 2.0 * c.im, self.up.norm_sqr() - self.down.norm_sqr())
    }

    pub fn projector(&self) -> Mat2 {
        let v = nalgebra::Vector2::new(self.up, self.down);
        v * v.adjoint()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }
}

/// Polarization (Bloch) vector; unit for pure spin states, shorter for mixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PolarizationVector {
    pub const ZERO: PolarizationVector = PolarizationVector { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: PolarizationVector = PolarizationVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: PolarizationVector = PolarizationVector { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: PolarizationVector = PolarizationVector { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<PolarizationVector> {
        let p = PolarizationVector { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite("polarization vector"));
        }
        if p.norm() > 1.0 + UNIT_TOL {
            return Err(Error::Domain(format!("polarization |P| = {} exceeds 1", p.norm())));
        }
        Ok(p)
    }

    fn raw(x: f64, y: f64, z: f64) -> PolarizationVector {
        PolarizationVector { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, o: &PolarizationVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn scaled(&self, s: f64) -> PolarizationVector {
        PolarizationVector::raw(s * self.x, s * self.y, s * self.z)
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOL
    }

    pub fn to_vec3(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Spherical angles (θ ∈ [0, π], φ ∈ [0, 2π)) of the direction.
    pub fn angles(&self) -> (f64, f64) {
        let n = self.norm();
        let theta = (self.z / n).clamp(-1.0, 1.0).acos();
        let mut phi = self.y.atan2(self.x);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        (theta, phi)
    }

    fn require_unit(&self, what: &str) -> Result<()> {
        if self.is_unit() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} must be a unit vector, |ζ| = {}", self.norm())))
        }
    }
}

impl std::ops::Neg for PolarizationVector {
    type Output = PolarizationVector;
    fn neg(self) -> PolarizationVector {
        self.scaled(-1.0)
    }
}

/// Bloch-sphere spinor (cos θ/2, sin θ/2 · e^{iφ}).
pub fn bloch_spinor(theta: f64, phi: f64) -> Result<Spinor> {
    if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
        return Err(Error::Domain(format!("Bloch angles out of range: θ = {theta}, φ = {phi}")));
    }
    let (s, c) = (theta / 2.0).sin_cos();
    Ok(Spinor { up: Complex64::from(c), down: Complex64::from_polar(s, phi) })
}

/// Spinor polarized along the unit vector `zeta`.
pub fn spinor_along(zeta: &PolarizationVector) -> Result<Spinor> {
    zeta.require_unit("spin direction")?;
    let (theta, phi) = zeta.angles();
    bloch_spinor(theta, phi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub td: Complex64,
    pub te: Complex64,
}

impl AmplitudePair {
    pub fn new(td: Complex64, te: Complex64) -> AmplitudePair {
        AmplitudePair { td, te }
    }

    /// Re(t_d t_e*)
    pub fn interference(&self) -> f64 {
        (self.td * self.te.conj()).re
    }

    pub fn is_zero(&self) -> bool {
        self.td == ZERO && self.te == ZERO
    }

    fn scale(&self) -> f64 {
        self.td.norm_sqr() + self.te.norm_sqr()
    }
}

/// Pair state amplitudes in the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSpinState {
    pub amps: [Complex64; 4],
}

impl PairSpinState {
    pub fn product(a: &Spinor, b: &Spinor) -> PairSpinState {
        PairSpinState { amps: [a.up * b.up, a.up * b.down, a.down * b.up, a.down * b.down] }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= UNIT_TOL
    }

    pub fn normalized(&self) -> Result<PairSpinState> {
        let n = self.norm_sqr();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateState);
        }
        let s = 1.0 / n.sqrt();
        Ok(PairSpinState { amps: self.amps.map(|c| c * s) })
    }

    /// |ψ⟩⟨ψ| without normalization.
    pub fn outer(&self) -> Mat4 {
        let v = nalgebra::Vector4::from(self.amps);
        v * v.adjoint()
    }

    pub fn from_bell_coefficients(c: &[Complex64; 4]) -> PairSpinState {
        let v = bell_unitary() * nalgebra::Vector4::from(*c);
        PairSpinState { amps: [v[0], v[1], v[2], v[3]] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Product,
    Bell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Normalized two-qubit density matrix with its basis tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDensityMatrix {
    m: Mat4,
    basis: Basis,
}

impl SpinDensityMatrix {
    /// Checked constructor: Hermitian, unit trace and positive semidefinite.
    pub fn new(m: Mat4, basis: Basis) -> Result<SpinDensityMatrix> {
        let rho = SpinDensityMatrix { m, basis };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_trusted(m: Mat4, basis: Basis) -> SpinDensityMatrix {
        SpinDensityMatrix { m, basis }
    }

    /// Normalize a nonzero positive matrix by its trace.
    pub fn from_unnormalized(m: Mat4, basis: Basis) -> Result<SpinDensityMatrix> {
        let t = m.trace().re;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::DegenerateState);
        }
        Ok(SpinDensityMatrix { m: m / Complex64::from(t), basis })
    }

    pub fn maximally_mixed(basis: Basis) -> SpinDensityMatrix {
        SpinDensityMatrix { m: Mat4::identity() * Complex64::from(0.25), basis }
    }

    pub fn bell_projector(state: BellState) -> SpinDensityMatrix {
        let k = state as usize;
        let col = bell_unitary().column(k).into_owned();
        SpinDensityMatrix { m: col * col.adjoint(), basis: Basis::Product }
    }

    pub fn pure(psi: &PairSpinState) -> Result<SpinDensityMatrix> {
        SpinDensityMatrix::from_unnormalized(psi.outer(), Basis::Product)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.m)
    }

    pub fn validate(&self) -> Result<()> {
        let h = linalg::hermitian_defect(&self.m);
        if !(h <= HERMITIAN_TOL) {
            return Err(Error::Validation(format!("density matrix not Hermitian (defect {h:e})")));
        }
        let t = self.m.trace();
        if (t.re - 1.0).abs() > TRACE_TOL || t.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!("density matrix trace {t} is not 1")));
        }
        let min = self.eigenvalues()[0];
        if min < PSD_TOL {
            return Err(Error::Validation(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub(crate) fn require_product(&self) -> Result<()> {
        match self.basis {
            Basis::Product => Ok(()),
            Basis::Bell => Err(Error::Validation("expected a product-basis density matrix".into())),
        }
    }
}

/// Columns are the Bell states (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻) in the product basis.
pub fn bell_unitary() -> Mat4 {
    let s = Complex64::from(FRAC_1_SQRT_2);
    let z = ZERO;
    Mat4::new(
        s, s, z, z, //
        z, z, s, s, //
        z, z, s, -s, //
        s, -s, z, z,
    )
}

/// Unnormalized final pair state t_d χ⊗η − t_e η⊗χ.
pub fn final_state(amps: &AmplitudePair, chi: &Spinor, eta: &Spinor) -> PairSpinState {
    let d = PairSpinState::product(chi, eta);
    let e = PairSpinState::product(eta, chi);
    let mut out = [ZERO; 4];
    for k in 0..4 {
        out[k] = amps.td * d.amps[k] - amps.te * e.amps[k];
    }
    PairSpinState { amps: out }
}

/// Unnormalized coefficients on (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻); the final state is their
/// combination with an overall 1/√2.
pub fn bell_coefficients(amps: &AmplitudePair, chi: &Spinor, eta: &Spinor) -> [Complex64; 4] {
    let (a, b, g, d) = (chi.up, chi.down, eta.up, eta.down);
    let minus = amps.td - amps.te;
    let plus = amps.td + amps.te;
    [minus * (a * g + b * d), minus * (a * g - b * d), minus * (a * d + b * g), plus * (a * d - b * g)]
}

fn degenerate(u: f64, amps: &AmplitudePair) -> bool {
    amps.is_zero() || !(u > 1e-24 * amps.scale())
}

/// Normalized density matrix of the final state for pure initial spins.
pub fn rho_pure(
    amps: &AmplitudePair,
    zeta1: &PolarizationVector,
    zeta2: &PolarizationVector,
) -> Result<SpinDensityMatrix> {
    zeta1.require_unit("ζ₁")?;
    zeta2.require_unit("ζ₂")?;
    let x = final_state(amps, &spinor_along(zeta1)?, &spinor_along(zeta2)?);
    let u = x.norm_sqr();
    if degenerate(u, amps) {
        return Err(Error::DegenerateState);
    }
    Ok(SpinDensityMatrix::from_trusted(x.outer() / Complex64::from(u), Basis::Product))
}

/// Unnormalized polarization-averaged final matrix; its trace is the
/// spin-averaged u.
pub fn rho_mixed_unnormalized(
    amps: &AmplitudePair,
    p1: &PolarizationVector,
    p2: &PolarizationVector,
) -> Result<Mat4> {
    for p in [p1, p2] {
        PolarizationVector::new(p.x, p.y, p.z)?;
    }
    let dir = |p: &PolarizationVector| {
        let n = p.norm();
        if n == 0.0 {
            (PolarizationVector::Z, 0.0)
        } else {
            (p.scaled(1.0 / n), n.min(1.0))
        }
    };
    let (z1, n1) = dir(p1);
    let (z2, n2) = dir(p2);
    let mut acc = Mat4::zeros();
    for s1 in [1.0, -1.0] {
        let w1 = (1.0 + s1 * n1) / 2.0;
        if w1 == 0.0 {
            continue;
        }
        let chi = spinor_along(&z1.scaled(s1))?;
        for s2 in [1.0, -1.0] {
            let w2 = (1.0 + s2 * n2) / 2.0;
            if w2 == 0.0 {
                continue;
            }
            let eta = spinor_along(&z2.scaled(s2))?;
            acc += final_state(amps, &chi, &eta).outer() * Complex64::from(w1 * w2);
        }
    }
    Ok(acc)
}

/// Normalized density matrix for partially polarized initial electrons.
pub fn rho_mixed(
    amps: &AmplitudePair,
    p1: &PolarizationVector,
    p2: &PolarizationVector,
) -> Result<SpinDensityMatrix> {
    let acc = rho_mixed_unnormalized(amps, p1, p2)?;
    let u = acc.trace().re;
    if degenerate(u, amps) {
        return Err(Error::DegenerateState);
    }
    Ok(SpinDensityMatrix::from_trusted(acc / Complex64::from(u), Basis::Product))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace keeping one electron.
pub fn reduced_density(rho: &SpinDensityMatrix, keep: Subsystem) -> Result<Mat2> {
    rho.require_product()?;
    let m = rho.matrix();
    Ok(Mat2::from_fn(|r, c| match keep {
        Subsystem::First => m[(2 * r, 2 * c)] + m[(2 * r + 1, 2 * c + 1)],
        Subsystem::Second => m[(r, c)] + m[(r + 2, c + 2)],
    }))
}

pub fn to_bell_basis(rho: &SpinDensityMatrix) -> Result<SpinDensityMatrix> {
    rho.require_product()?;
    let u = bell_unitary();
    Ok(SpinDensityMatrix::from_trusted(u.adjoint() * rho.matrix() * u, Basis::Bell))
}

pub fn from_bell_basis(rho: &SpinDensityMatrix) -> Result<SpinDensityMatrix> {
    if rho.basis() != Basis::Bell {
        return Err(Error::Validation("expected a Bell-basis density matrix".into()));
    }
    let u = bell_unitary();
    Ok(SpinDensityMatrix::from_trusted(u * rho.matrix() * u.adjoint(), Basis::Product))
}

/// Exchange the two electrons: ρ → S ρ S with S the swap operator.
pub fn swap_qubits(m: &Mat4) -> Mat4 {
    const P: [usize; 4] = [0, 2, 1, 3];
    Mat4::from_fn(|r, c| m[(P[r], P[c])])
}

/// Entries of the final density matrix in the Bell basis written out
/// explicitly in terms of the amplitudes and the two polarization vectors.
/// Valid for unit vectors and, with the ensemble vectors P₁, P₂, for mixtures.
pub fn bell_basis_closed_form(
    amps: &AmplitudePair,
    p1: &PolarizationVector,
    p2: &PolarizationVector,
) -> Result<SpinDensityMatrix> {
    let (x1, y1, z1) = (p1.x, p1.y, p1.z);
    let (x2, y2, z2) = (p2.x, p2.y, p2.z);
    let i = Complex64::i();
    let (td, te) = (amps.td, amps.te);
    let u = amps.scale() - (1.0 + p1.dot(p2)) * amps.interference();
    if degenerate(u, amps) {
        return Err(Error::DegenerateState);
    }
    let m = Complex64::from((td - te).norm_sqr());
    let c = (td - te) * (td + te).conj();
    let p = Complex64::from((td + te).norm_sqr());
    let mut r = Mat4::zeros();
    r[(0, 0)] = m * (1.0 + x1 * x2 - y1 * y2 + z1 * z2);
    r[(0, 1)] = m * (z1 + z2 + i * x1 * y2 + i * y1 * x2);
    r[(0, 2)] = m * (x1 + x2 - i * y1 * z2 - i * z1 * y2);
    r[(0, 3)] = c * (i * y1 - i * y2 - x1 * z2 + z1 * x2);
    r[(1, 1)] = m * (1.0 - x1 * x2 + y1 * y2 + z1 * z2);
    r[(1, 2)] = m * (-i * y1 - i * y2 + x1 * z2 + z1 * x2);
    r[(1, 3)] = c * (-x1 + x2 + i * y1 * z2 - i * z1 * y2);
    r[(2, 2)] = m * (1.0 + x1 * x2 + y1 * y2 - z1 * z2);
    r[(2, 3)] = c * (z1 - z2 - i * x1 * y2 + i * y1 * x2);
    r[(3, 3)] = p * (1.0 - x1 * x2 - y1 * y2 - z1 * z2);
    for a in 0..4 {
        for b in 0..a {
            r[(a, b)] = r[(b, a)].conj();
        }
    }
    Ok(SpinDensityMatrix::from_trusted(r / Complex64::from(4.0 * u), Basis::Bell))
}
