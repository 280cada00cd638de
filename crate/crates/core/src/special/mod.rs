//! Complex special functions needed by the Coulomb continuum states:
//! log-gamma, the confluent hypergeometric function 1F1 and the Coulomb
//! normalization factor `e^{-πξ/2} Γ(1 - iξ)`.
//!
//! Accuracy target is 1e-10 relative for |z| <= 50 in 1F1. Beyond that the
//! large-|z| expansion is used as long as its smallest term is below the
//! target; otherwise the series is attempted and a
//! [`Error::NonConvergence`] is returned if it cannot meet the budget.

mod dd;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use dd::DdComplex;

/// |z| at and above which the large-|z| expansion of 1F1 is tried first.
pub const Z_SWITCH: f64 = 30.0;

/// Hard cap on Maclaurin terms. Hitting it is reported, never truncated.
pub const MAX_SERIES_TERMS: usize = 10_000;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_C: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

fn check_finite(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Log-gamma on the branch continuous away from the negative real axis
/// (the usual `loggamma` convention: `ln_gamma(z + 1) = ln_gamma(z) + ln z`).
/// On the negative real axis the limit from the upper half-plane is taken.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_finite(z, "ln_gamma")?;
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_lanczos(z));
    }
    if z.im < 0.0 {
        return Ok(ln_gamma_reflected(z.conj()).conj());
    }
    Ok(ln_gamma_reflected(z))
}

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let mut series = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS_C.iter().enumerate() {
        series += c / (z + (j + 1) as f64);
    }
    let t = z + LANCZOS_SHIFT;
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + series.ln() - z.ln()
}

// Reflection in the closed upper half-plane with the sine logarithm written
// as -iπz + iπ/2 - ln 2 + ln(1 - e^{2πiz}); the last log is principal and
// continuous there because |e^{2πiz}| <= 1.
fn ln_gamma_reflected(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let w = (2.0 * PI * i * z).exp();
    let ln_sin = -i * PI * z + i * (PI / 2.0) - std::f64::consts::LN_2 + (1.0 - w).ln();
    PI.ln() - ln_sin - ln_gamma_lanczos(1.0 - z)
}

/// Gamma function via `exp(ln_gamma)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// Coulomb normalization `e^{-πξ/2} Γ(1 - iξ)`.
pub fn coulomb_norm(xi: f64) -> Result<Complex64> {
    if !xi.is_finite() {
        return Err(Error::NonFinite("coulomb_norm"));
    }
    let lg = ln_gamma(Complex64::new(1.0, -xi))?;
    Ok((lg - PI * xi / 2.0).exp())
}

/// Confluent hypergeometric function 1F1(a; b; z).
pub fn kummer_1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    check_finite(a, "kummer_1f1 (a)")?;
    check_finite(b, "kummer_1f1 (b)")?;
    check_finite(z, "kummer_1f1 (z)")?;
    if is_nonpositive_integer(b) {
        return Err(Error::HypergeometricPole(b.re));
    }
    if z == Complex64::new(0.0, 0.0) || a == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if a == b {
        return finite_or_overflow(z.exp(), z);
    }
    if is_nonpositive_integer(a) {
        return finite_or_overflow(series(a, b, z)?, z);
    }
    if is_nonpositive_integer(b - a) {
        return finite_or_overflow(z.exp() * series(b - a, b, -z)?, z);
    }
    if z.norm() >= Z_SWITCH {
        if let Some(v) = asymptotic(a, b, z)? {
            return finite_or_overflow(v, z);
        }
    }
    let v = if z.re < 0.0 {
        z.exp() * series(b - a, b, -z)?
    } else {
        series(a, b, z)?
    };
    finite_or_overflow(v, z)
}

fn finite_or_overflow(v: Complex64, z: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("1F1 overflows at z = {z}")))
    }
}

struct SeriesOutcome {
    sum: Complex64,
    // Σ (n + 1)|t_n|, the scale of the accumulated rounding error.
    weighted_abs: f64,
    terms: usize,
    converged: bool,
}

/// Maclaurin series. Plain double when little cancellation is expected,
/// double-double otherwise; errors out if even that cannot reach the budget.
pub(crate) fn series(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    const PLAIN_ACCEPT: f64 = 1e-12;
    const DD_ACCEPT: f64 = 1e-11;
    let abs_z = z.norm();
    if abs_z - z.re <= 10.0 {
        let out = series_f64(a, b, z);
        let est = 4.0 * f64::EPSILON * out.weighted_abs;
        if out.converged && est <= PLAIN_ACCEPT * out.sum.norm() {
            return Ok(out.sum);
        }
    }
    let out = series_dd(a, b, z);
    let est = 4.0 * 2f64.powi(-104) * out.weighted_abs + f64::EPSILON * out.sum.norm();
    if !out.converged || est > DD_ACCEPT * out.sum.norm() {
        return Err(Error::NonConvergence { abs_z, terms: out.terms, estimate: est });
    }
    Ok(out.sum)
}

fn series_f64(a: Complex64, b: Complex64, z: Complex64) -> SeriesOutcome {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut weighted_abs = 1.0;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * z / ((b + nf) * (nf + 1.0));
        term *= ratio;
        sum += term;
        let t = term.norm();
        weighted_abs += (nf + 2.0) * t;
        if t == 0.0 || (t <= 1e-17 * sum.norm() && ratio.norm() < 0.5) {
            return SeriesOutcome { sum, weighted_abs, terms: n + 1, converged: true };
        }
    }
    SeriesOutcome { sum, weighted_abs, terms: MAX_SERIES_TERMS, converged: false }
}

fn series_dd(a: Complex64, b: Complex64, z: Complex64) -> SeriesOutcome {
    let zz = DdComplex::from_c64(z);
    let mut term = DdComplex::ONE;
    let mut sum = DdComplex::ONE;
    let mut weighted_abs = 1.0;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        let num = DdComplex::shifted(a, nf) * zz;
        let den = DdComplex::shifted(b, nf) * DdComplex::from_c64(Complex64::new(nf + 1.0, 0.0));
        term = (term * num).div(den);
        sum = sum + term;
        let t = term.norm1();
        weighted_abs += (nf + 2.0) * t;
        let ratio = ((a + nf) * z / ((b + nf) * (nf + 1.0))).norm();
        if t == 0.0 || (t <= 1e-33 * sum.norm1() && ratio < 0.5) {
            return SeriesOutcome {
                sum: sum.to_c64(),
                weighted_abs,
                terms: n + 1,
                converged: true,
            };
        }
    }
    SeriesOutcome { sum: sum.to_c64(), weighted_abs, terms: MAX_SERIES_TERMS, converged: false }
}

/// Sum of Σ (p)_s (q)_s / s! w^{-s} up to its smallest term.
/// Returns the partial sum and the magnitude of the first omitted term.
fn asymptotic_sum(p: Complex64, q: Complex64, w: Complex64) -> (Complex64, f64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = 1.0;
    for s in 0..200 {
        let sf = s as f64;
        let next = term * (p + sf) * (q + sf) / ((sf + 1.0) * w);
        let m = next.norm();
        if m == 0.0 {
            return (sum, 0.0);
        }
        if m >= last {
            return (sum, m);
        }
        term = next;
        sum += term;
        last = m;
        if m <= 1e-17 * sum.norm() {
            return (sum, m);
        }
    }
    (sum, last)
}

/// Large-|z| expansion: both exponential and algebraic contributions.
/// `None` when the expansion cannot reach the accuracy budget at this |z|.
pub(crate) fn asymptotic(a: Complex64, b: Complex64, z: Complex64) -> Result<Option<Complex64>> {
    const ACCEPT: f64 = 1e-10;
    let ln_z = z.ln();
    let sign = if z.arg() > 0.0 { 1.0 } else { -1.0 };
    let i = Complex64::i();
    let lg_b = ln_gamma(b)?;

    let (s1, e1) = asymptotic_sum(1.0 - a, b - a, z);
    let (s2, e2) = asymptotic_sum(a, a - b + 1.0, -z);
    let p1 = (lg_b - ln_gamma(a)? + z + (a - b) * ln_z).exp();
    let p2 = (lg_b - ln_gamma(b - a)? + sign * i * PI * a - a * ln_z).exp();

    let total = p1 * s1 + p2 * s2;
    let err = p1.norm() * e1 + p2.norm() * e2;
    if err <= ACCEPT * total.norm() {
        Ok(Some(total))
    } else {
        Ok(None)
    }
}
