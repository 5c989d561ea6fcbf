//! Dense linear algebra helpers: inverses, matrix powers, scalar extraction,
//! spectral functional calculus, and the "equals a phase times identity"
//! report the identity verifiers produce.
//!
//! Functional calculus diagonalizes `A = U S U^{-1}` and applies the scalar
//! function to the eigenvalues. The eigenvector matrix is inverted by LU and
//! guarded by a Frobenius condition estimate: arguments here are products of
//! unitary generator matrices and central factors, so a large estimate means
//! the sampled parameters were degenerate, not that the identity fails.

use super::RootRepError;
use crate::specfun::SpecFunError;
use faer::complex_native::c64;
use faer::prelude::SolverCore;
use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Condition-estimate threshold above which functional calculus refuses to
/// trust the eigenbasis and asks the caller to resample parameters.
pub const COND_LIMIT: f64 = 1e8;

pub(crate) fn to_c64(z: Complex64) -> c64 {
    c64::new(z.re, z.im)
}

pub(crate) fn from_c64(z: c64) -> Complex64 {
    Complex64::new(z.re, z.im)
}

/// The scalar matrix `z * I`.
pub fn mat_from_complex(dim: usize, z: Complex64) -> Mat<c64> {
    let zz = to_c64(z);
    Mat::from_fn(dim, dim, |i, j| if i == j { zz } else { c64::new(0.0, 0.0) })
}

/// Entrywise scaling `z * m`.
pub fn scale_mat(m: &Mat<c64>, z: Complex64) -> Mat<c64> {
    let zz = to_c64(z);
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m.read(i, j) * zz)
}

/// The matrix `I + z * m`.
pub fn plus_scaled_identity(m: &Mat<c64>, z: Complex64) -> Mat<c64> {
    let zz = to_c64(z);
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let v = m.read(i, j) * zz;
        if i == j {
            c64::new(v.re + 1.0, v.im)
        } else {
            v
        }
    })
}

/// Matrix inverse through LU with partial pivoting; fails if the result is
/// not finite (the factor was singular to working precision).
pub fn inverse(m: &Mat<c64>) -> Result<Mat<c64>, RootRepError> {
    let inv = m.partial_piv_lu().inverse();
    let norm = inv.norm_l2();
    if !norm.is_finite() {
        return Err(RootRepError::SingularFactor { step: 0 });
    }
    Ok(inv)
}

/// Non-negative matrix power by repeated multiplication.
pub fn mat_pow(m: &Mat<c64>, e: u32) -> Mat<c64> {
    let dim = m.nrows();
    let mut acc = mat_from_complex(dim, Complex64::new(1.0, 0.0));
    for _ in 0..e {
        acc = &acc * m;
    }
    acc
}

/// Frobenius distance between two matrices relative to the size of the
/// second (floored at one so zero targets stay meaningful).
pub fn rel_residual(a: &Mat<c64>, b: &Mat<c64>) -> f64 {
    (a - b).norm_l2() / b.norm_l2().max(1.0)
}

/// Extracts the scalar `omega` with `m = omega * I`, failing with
/// [`RootRepError::NonCentral`] when the relative deviation exceeds `tol`.
pub fn scalar_of(m: &Mat<c64>, tol: f64) -> Result<Complex64, RootRepError> {
    let dim = m.nrows();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        tr += from_c64(m.read(i, i));
    }
    let omega = tr / dim as f64;
    let deviation =
        (m - &mat_from_complex(dim, omega)).norm_l2() / ((dim as f64).sqrt() * (1.0 + omega.norm()));
    if deviation > tol {
        return Err(RootRepError::NonCentral { deviation });
    }
    Ok(omega)
}

/// Applies a scalar function to a diagonalizable matrix through its
/// eigendecomposition `A = U S U^{-1}`.
pub fn spectral_apply<F>(m: &Mat<c64>, f: F) -> Result<Mat<c64>, RootRepError>
where
    F: Fn(Complex64) -> Result<Complex64, SpecFunError>,
{
    let dim = m.nrows();
    let evd = m.complex_eigendecomposition();
    let u = evd.u().to_owned();
    let s = evd.s().column_vector().to_owned();
    let u_inv = u.partial_piv_lu().inverse();
    let cond = u.norm_l2() * u_inv.norm_l2();
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(RootRepError::IllConditioned { cond });
    }
    let mut fs = Vec::with_capacity(dim);
    for i in 0..dim {
        fs.push(to_c64(f(from_c64(s.read(i)))?));
    }
    let scaled = Mat::from_fn(dim, dim, |i, j| u.read(i, j) * fs[j]);
    Ok(&scaled * &u_inv)
}

/// Result of testing whether a product of operators equals `omega * I`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseReport {
    /// The extracted scalar as `[re, im]`.
    pub omega: [f64; 2],
    /// Frobenius deviation of the product from `omega * I`, normalized by
    /// `sqrt(dim)`.
    pub residual: f64,
    /// How far `|omega|` sits from one.
    pub omega_unimodularity: f64,
    /// How far `omega^(2N)` sits from one, when the root order was supplied.
    /// Logged for diagnosis; never part of the pass criterion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_order_deviation: Option<f64>,
    /// Whether the residual stayed within the requested tolerance.
    pub passed: bool,
}

impl PhaseReport {
    /// The extracted scalar as a complex number.
    pub fn omega_c(&self) -> Complex64 {
        Complex64::new(self.omega[0], self.omega[1])
    }
}

/// Measures how close `p` is to a unimodular scalar times the identity.
pub fn phase_report(p: &Mat<c64>, tol: f64, root_order: Option<u32>) -> PhaseReport {
    let dim = p.nrows();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        tr += from_c64(p.read(i, i));
    }
    let omega = tr / dim as f64;
    let residual = (p - &mat_from_complex(dim, omega)).norm_l2() / (dim as f64).sqrt();
    let omega_order_deviation = root_order.map(|n| {
        let e = 2 * n as i32;
        (omega.powi(e) - 1.0).norm()
    });
    PhaseReport {
        omega: [omega.re, omega.im],
        residual,
        omega_unimodularity: (omega.norm() - 1.0).abs(),
        omega_order_deviation,
        passed: residual <= tol,
    }
}
