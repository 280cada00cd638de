#![allow(dead_code)]

use e2e_core::linalg::{Mat4, Vec3};
use e2e_core::spin::{AmplitudePair, Basis, PolarizationVector, SpinDensityMatrix};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| c(re, im))
}

/// Amplitude pairs away from the all-zero point.
pub fn amps() -> impl Strategy<Value = AmplitudePair> {
    (complex(), complex())
        .prop_filter("nonzero", |(d, e)| d.norm() + e.norm() > 1e-3)
        .prop_map(|(d, e)| AmplitudePair::new(d, e))
}

pub fn unit() -> impl Strategy<Value = PolarizationVector> {
    (-1.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(u, phi)| {
        let s = (1.0 - u * u).max(0.0).sqrt();
        let v = Vec3::new(s * phi.cos(), s * phi.sin(), u);
        let v = v / v.norm();
        PolarizationVector { x: v.x, y: v.y, z: v.z }
    })
}

pub fn unit_vec3() -> impl Strategy<Value = Vec3> {
    unit().prop_map(|p| p.to_vec3())
}

/// Polarization vectors inside the Bloch ball.
pub fn ball() -> impl Strategy<Value = PolarizationVector> {
    (unit(), 0.0..=1.0f64).prop_map(|(p, r)| p.scaled(r))
}

/// ρ = GG†/Tr(GG†) for a random complex G.
pub fn density() -> impl Strategy<Value = SpinDensityMatrix> {
    prop::collection::vec(complex(), 16).prop_map(|v| {
        let g = Mat4::from_fn(|r, k| v[4 * r + k]);
        let m = g * g.adjoint();
        let tr = m.trace();
        SpinDensityMatrix::new(m / tr, Basis::Product).unwrap()
    })
}

pub fn max_diff(a: &Mat4, b: &Mat4) -> f64 {
    (a - b).iter().fold(0.0, |m, v| m.max(v.norm()))
}
