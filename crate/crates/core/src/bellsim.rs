//! Finite-statistics CHSH experiment: joint spin outcomes are drawn from a
//! final-state density matrix at each of the four detector settings.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::bell::DetectorSettings;
use crate::error::{Error, Result};
use crate::linalg::{kron, sigma_dot, Mat2, Vec3};
use crate::rng::{derive_seed, stream};
use crate::spin::SpinDensityMatrix;

/// Outcome counts at one setting pair, `(+,+)`, `(+,−)`, `(−,+)`, `(−,−)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoincidenceCounts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
}

impl CoincidenceCounts {
    pub fn total(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }

    /// E = (n₊₊ + n₋₋ − n₊₋ − n₋₊)/n.
    pub fn correlator(&self) -> Result<f64> {
        let n = self.total();
        if n == 0 {
            return Err(Error::Domain("no coincidences recorded at a setting".into()));
        }
        let same = (self.n_pp + self.n_mm) as f64;
        let diff = (self.n_pm + self.n_mp) as f64;
        Ok((same - diff) / n as f64)
    }
}

fn projector(n: &Vec3, sign: f64) -> Mat2 {
    (Mat2::identity() + sigma_dot(n) * Complex64::from(sign)) * Complex64::from(0.5)
}

fn check_axis(n: &Vec3) -> Result<()> {
    if (n.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("measurement axis has length {}", n.norm())));
    }
    Ok(())
}

/// P(s₁, s₂) = Tr(ρ P^a_{s₁} ⊗ P^b_{s₂}) in the order (++, +−, −+, −−).
pub fn outcome_probabilities(rho: &SpinDensityMatrix, a: &Vec3, b: &Vec3) -> Result<[f64; 4]> {
    rho.require_product()?;
    check_axis(a)?;
    check_axis(b)?;
    let mut p = [0.0; 4];
    let mut i = 0;
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            let v = (rho.matrix() * kron(&projector(a, sa), &projector(b, sb))).trace().re;
            if v < -1e-10 {
                return Err(Error::Validation(format!("negative outcome probability {v:e}")));
            }
            p[i] = v.max(0.0);
            i += 1;
        }
    }
    Ok(p)
}

/// Multinomial draw of `n` coincidences by inverse CDF on one uniform stream.
pub fn sample_coincidences(
    rho: &SpinDensityMatrix,
    a: &Vec3,
    b: &Vec3,
    n: u64,
    seed: u64,
) -> Result<CoincidenceCounts> {
    let p = outcome_probabilities(rho, a, b)?;
    let total: f64 = p.iter().sum();
    let c0 = p[0] / total;
    let c1 = (p[0] + p[1]) / total;
    let c2 = (p[0] + p[1] + p[2]) / total;
    let mut rng = stream(seed, 0);
    let mut counts = CoincidenceCounts::default();
    for _ in 0..n {
        let u: f64 = rng.random();
        if u < c0 {
            counts.n_pp += 1;
        } else if u < c1 {
            counts.n_pm += 1;
        } else if u < c2 {
            counts.n_mp += 1;
        } else {
            counts.n_mm += 1;
        }
    }
    Ok(counts)
}

/// S = E(a₁,b₁) − E(a₁,b₂) + E(a₂,b₁) + E(a₂,b₂) from counts in the order of
/// [`DetectorSettings::pairs`], with stderr √(Σ (1 − E²)/n).
pub fn chsh_estimate(counts: &[CoincidenceCounts; 4]) -> Result<(f64, f64)> {
    let signs = DetectorSettings::default().pairs().map(|(_, _, s)| s);
    let mut s = 0.0;
    let mut var = 0.0;
    for (c, sign) in counts.iter().zip(signs) {
        let e = c.correlator()?;
        s += sign * e;
        var += (1.0 - e * e) / c.total() as f64;
    }
    Ok((s, var.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshRun {
    pub counts: [CoincidenceCounts; 4],
    pub estimate: f64,
    pub stderr: f64,
}

/// A complete simulated experiment with `n` coincidences per setting pair.
/// Setting `i` draws from the seed derived from `(seed, i)`.
pub fn simulate_chsh(rho: &SpinDensityMatrix, settings: &DetectorSettings, n: u64, seed: u64) -> Result<ChshRun> {
    settings.validate()?;
    let pairs = settings.pairs();
    let counts: Vec<CoincidenceCounts> = (0..4)
        .into_par_iter()
        .map(|i| sample_coincidences(rho, &pairs[i].0, &pairs[i].1, n, derive_seed(seed, i as u64)))
        .collect::<Result<_>>()?;
    let counts: [CoincidenceCounts; 4] = counts.try_into().expect("four settings");
    let (estimate, stderr) = chsh_estimate(&counts)?;
    Ok(ChshRun { counts, estimate, stderr })
}
