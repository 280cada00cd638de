//! Small fixed-size complex matrices used by the spin algebra.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector3};
use num_complex::Complex64;

pub type Mat2 = Matrix2<Complex64>;
pub type Mat4 = Matrix4<Complex64>;
pub type Vec3 = Vector3<f64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn sigma_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// `n·σ` for a real 3-vector.
pub fn sigma_dot(n: &Vec3) -> Mat2 {
    sigma_x() * Complex64::from(n.x) + sigma_y() * Complex64::from(n.y) + sigma_z() * Complex64::from(n.z)
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermitian_defect<const N: usize>(
    m: &nalgebra::SMatrix<Complex64, N, N>,
) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..N {
        for c in 0..N {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn hermitian_eigenvalues(m: &Mat4) -> Vec<f64> {
    let mut ev = hermitian_eigen4(m).0;
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian 2×2 matrix, ascending.
pub fn hermitian_eigenvalues2(m: &Mat2) -> [f64; 2] {
    let sym = (m + m.adjoint()) * Complex64::from(0.5);
    let e = SymmetricEigen::new(sym).eigenvalues;
    if e[0] <= e[1] {
        [e[0], e[1]]
    } else {
        [e[1], e[0]]
    }
}

/// Eigen-decomposition of a Hermitian 4×4 matrix: (values, vectors as columns).
pub fn hermitian_eigen4(m: &Mat4) -> (Vec<f64>, Mat4) {
    let sym = (m + m.adjoint()) * Complex64::from(0.5);
    let e = SymmetricEigen::new(sym);
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// Principal square root of a positive semidefinite Hermitian 4×4 matrix;
/// small negative eigenvalues from roundoff are clipped to zero.
pub fn psd_sqrt4(m: &Mat4) -> Mat4 {
    let (vals, vecs) = hermitian_eigen4(m);
    let mut out = Mat4::zeros();
    for (k, &v) in vals.iter().enumerate() {
        let s = Complex64::from(v.max(0.0).sqrt());
        let col = vecs.column(k);
        out += col * col.adjoint() * s;
    }
    out
}

pub fn max_abs_diff<const N: usize>(
    a: &nalgebra::SMatrix<Complex64, N, N>,
    b: &nalgebra::SMatrix<Complex64, N, N>,
) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
