//! Coulomb continuum waves and the electron-electron correlation factor,
//! plus interpolation tables used inside the Monte Carlo integrand.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::special::{coulomb_norm, kummer_1f1};

/// Incoming-type Coulomb wave e^{-πξ/2}Γ(1−iξ) e^{ik·r} 1F1(iξ, 1, −i(kr + k·r))
/// with ξ = −Z/k. Z = 0 gives the plane wave exactly.
pub fn coulomb_wave(k: &Vec3, r: &Vec3, z: f64) -> Result<Complex64> {
    let kn = k.norm();
    if !(kn > 0.0) {
        return Err(Error::SingularKinematics("Coulomb wave with zero momentum".into()));
    }
    let plane = Complex64::from_polar(1.0, k.dot(r));
    if z == 0.0 {
        return Ok(plane);
    }
    let xi = -z / kn;
    let s = kn * r.norm() + k.dot(r);
    Ok(coulomb_norm(xi)? * plane * confluent(xi, s)?)
}

/// Electron-electron factor e^{-πξ/2}Γ(1−iξ) 1F1(iξ, 1, −i(k r₁₂ + k·r₁₂)),
/// ξ = 1/(2k), for the relative momentum k = (kA − kB)/2.
pub fn ee_correlation(k_ab: &Vec3, r12: &Vec3) -> Result<Complex64> {
    let kn = k_ab.norm();
    if !(kn > 0.0) {
        return Err(Error::SingularKinematics("correlation factor with zero relative momentum".into()));
    }
    let xi = 1.0 / (2.0 * kn);
    let s = kn * r12.norm() + k_ab.dot(r12);
    Ok(coulomb_norm(xi)? * confluent(xi, s)?)
}

fn confluent(xi: f64, s: f64) -> Result<Complex64> {
    kummer_1f1(Complex64::new(0.0, xi), Complex64::new(1.0, 0.0), Complex64::new(0.0, -s))
}

/// N(ξ)·1F1(iξ, 1, −is) on a uniform grid in s ≥ 0, cubic Hermite between
/// nodes. The derivative is exact: d/ds 1F1(iξ,1,−is) = ξ·1F1(1+iξ, 2, −is).
#[derive(Debug)]
pub(crate) struct CoulombTable {
    h: f64,
    values: Vec<Complex64>,
    slopes: Vec<Complex64>,
}

/// Node spacing of the tables; interpolation error stays below ~1e-9.
pub(crate) const TABLE_STEP: f64 = 0.02;

impl CoulombTable {
    pub(crate) fn build(xi: f64, s_max: f64) -> Result<CoulombTable> {
        let h = TABLE_STEP;
        let n = (s_max / h).ceil() as usize + 2;
        let norm = coulomb_norm(xi)?;
        let a = Complex64::new(0.0, xi);
        let one = Complex64::new(1.0, 0.0);
        let mut values = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for j in 0..n {
            let z = Complex64::new(0.0, -(j as f64) * h);
            values.push(norm * kummer_1f1(a, one, z)?);
            slopes.push(norm * xi * kummer_1f1(a + 1.0, Complex64::new(2.0, 0.0), z)?);
        }
        Ok(CoulombTable { h, values, slopes })
    }

    pub(crate) fn s_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.h
    }

    #[inline]
    pub(crate) fn eval(&self, s: f64) -> Complex64 {
        let x = s / self.h;
        let j = (x as usize).min(self.values.len() - 2);
        let t = x - j as f64;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        self.values[j] * h00
            + self.slopes[j] * (h10 * self.h)
            + self.values[j + 1] * h01
            + self.slopes[j + 1] * (h11 * self.h)
    }
}

type TableKey = (u64, u64);

fn cache() -> &'static Mutex<HashMap<TableKey, Arc<CoulombTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<CoulombTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

const CACHE_LIMIT: usize = 512;

/// Shared table for (ξ, s_max). Tables are pure functions of their key, so a
/// race that builds one twice is harmless.
pub(crate) fn table(xi: f64, s_max: f64) -> Result<Arc<CoulombTable>> {
    let key = (xi.to_bits(), s_max.to_bits());
    if let Some(t) = cache().lock().expect("table cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(CoulombTable::build(xi, s_max)?);
    let mut map = cache().lock().expect("table cache poisoned");
    if map.len() >= CACHE_LIMIT {
        map.clear();
    }
    Ok(Arc::clone(map.entry(key).or_insert(t)))
}
