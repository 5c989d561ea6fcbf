//! Modulation/translation matrices realizing the torus generators at a root
//! of unity.
//!
//! For an `n x n` exchange matrix `B` and parameters `(N, M)` the deformation
//! parameter is `zeta = exp(i*pi*M/N)`. The representation space is the
//! `N^n`-dimensional space of functions on `(Z_N)^n`; the generator `Y_i`
//! scales by a lambda parameter, modulates by `zeta^(2 * sum_{j>i} b_ji x_j)`
//! and translates the `i`-th coordinate by one. In this realization
//! `Y_i Y_j = zeta^(2 b_ji) Y_j Y_i` and `Y_i^N` is the scalar `lambda_i^N`.

use super::linalg::mat_from_complex;
use super::RootRepError;
use crate::cluster::ExchangeMatrix;
use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Largest representation dimension `N^n` the matrix layer accepts.
pub const MAX_DIM: usize = 4096;

/// Root-of-unity parameters: `zeta = exp(i*pi*m_twist/n_root)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootParams {
    /// Order parameter `N`; `zeta^N = (-1)^M` and `Y_i^N` is central.
    pub n_root: u32,
    /// Twist `M`, coprime to `N`. The untwisted case is `M = 1`.
    pub m_twist: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RootParams {
    /// Untwisted parameters (`M = 1`).
    pub fn new(n_root: u32) -> Self {
        Self::with_twist(n_root, 1)
    }

    /// General twisted parameters; `m_twist` must be coprime to `n_root`.
    pub fn with_twist(n_root: u32, m_twist: u32) -> Self {
        assert!(n_root >= 1, "n_root must be positive");
        assert!(m_twist >= 1, "m_twist must be positive");
        assert_eq!(
            gcd(n_root, m_twist),
            1,
            "n_root and m_twist must be coprime"
        );
        Self { n_root, m_twist }
    }

    /// The deformation parameter `zeta = exp(i*pi*M/N)`.
    pub fn zeta(&self) -> Complex64 {
        self.zeta_pow(1)
    }

    /// Integer power `zeta^e`, exact up to floating-point rounding.
    pub fn zeta_pow(&self, e: i64) -> Complex64 {
        let angle = PI * (self.m_twist as f64) * (e as f64) / (self.n_root as f64);
        Complex64::from_polar(1.0, angle)
    }

    /// The sign `zeta^(N^2) = (-1)^(M*N)` governing the N-th power algebra.
    pub fn zeta_tilde(&self) -> f64 {
        if (self.n_root as u64 * self.m_twist as u64) % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

/// The modulation/translation representation attached to an exchange matrix.
#[derive(Debug, Clone)]
pub struct WeylRep {
    b: ExchangeMatrix,
    params: RootParams,
    lambda: Vec<Complex64>,
    dim: usize,
}

impl WeylRep {
    /// Builds the representation; fails if `N^n` exceeds [`MAX_DIM`].
    pub fn new(
        b: &ExchangeMatrix,
        params: RootParams,
        lambda: &[Complex64],
    ) -> Result<Self, RootRepError> {
        let n = b.n();
        assert_eq!(lambda.len(), n, "one lambda parameter per vertex");
        let mut dim: usize = 1;
        for _ in 0..n {
            dim = dim.saturating_mul(params.n_root as usize);
            if dim > MAX_DIM {
                return Err(RootRepError::DimTooLarge { dim });
            }
        }
        Ok(Self {
            b: b.clone(),
            params,
            lambda: lambda.to_vec(),
            dim,
        })
    }

    /// Number of vertices of the underlying quiver.
    pub fn n(&self) -> usize {
        self.b.n()
    }

    /// Representation dimension `N^n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Root-of-unity parameters.
    pub fn params(&self) -> RootParams {
        self.params
    }

    /// The exchange matrix the commutation phases are read from.
    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    /// Lambda parameters (one per vertex).
    pub fn lambdas(&self) -> &[Complex64] {
        &self.lambda
    }

    fn digits(&self, mut idx: usize) -> Vec<u32> {
        let n_root = self.params.n_root as usize;
        let mut out = vec![0u32; self.n()];
        for d in out.iter_mut() {
            *d = (idx % n_root) as u32;
            idx /= n_root;
        }
        out
    }

    fn index(&self, digits: &[u32]) -> usize {
        let n_root = self.params.n_root as usize;
        let mut idx = 0usize;
        for &d in digits.iter().rev() {
            idx = idx * n_root + d as usize;
        }
        idx
    }

    /// Modulation exponent of `Y_i` at the point `x`: `2 * sum_{j>i} b_ji x_j`.
    fn phase_exponent(&self, i: usize, digits: &[u32]) -> i64 {
        let mut s = 0i64;
        for j in (i + 1)..self.n() {
            s += self.b.entry(j, i) * digits[j] as i64;
        }
        2 * s
    }

    /// The matrix of `Y_i^e` for any integer `e` (0-based vertex index).
    pub fn y_pow(&self, i: usize, e: i64) -> Mat<c64> {
        let n_root = self.params.n_root as i64;
        let lam = powi(self.lambda[i], e);
        let mut m = Mat::<c64>::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            let mut digits = self.digits(col);
            let phase = self.params.zeta_pow(e * self.phase_exponent(i, &digits));
            digits[i] = (digits[i] as i64 + e).rem_euclid(n_root) as u32;
            let row = self.index(&digits);
            let v = lam * phase;
            m.write(row, col, c64::new(v.re, v.im));
        }
        m
    }

    /// The generator matrix `Y_i` (0-based vertex index).
    pub fn y_generator(&self, i: usize) -> Mat<c64> {
        self.y_pow(i, 1)
    }

    /// Ordering correction `sigma(alpha) = sum_{i<j} alpha_i alpha_j b_ij`.
    pub fn sigma(&self, alpha: &[i64]) -> i64 {
        let n = self.n();
        let mut s = 0i64;
        for i in 0..n {
            for j in (i + 1)..n {
                s += alpha[i] * alpha[j] * self.b.entry(i, j);
            }
        }
        s
    }

    /// The normalized torus monomial
    /// `Y_alpha = zeta^(sigma(alpha)) Y_1^(a_1) ... Y_n^(a_n)`.
    pub fn y_alpha(&self, alpha: &[i64]) -> Mat<c64> {
        assert_eq!(alpha.len(), self.n());
        let z = self.params.zeta_pow(self.sigma(alpha));
        let mut m = mat_from_complex(self.dim, z);
        for (i, &e) in alpha.iter().enumerate() {
            if e != 0 {
                m = &m * &self.y_pow(i, e);
            }
        }
        m
    }

    /// The central scalar `Y_i^N = lambda_i^N`.
    pub fn casimir(&self, i: usize) -> Complex64 {
        powi(self.lambda[i], self.params.n_root as i64)
    }

    /// The central scalar `Y_alpha^N = zeta_tilde^(sigma(alpha)) *
    /// prod_i lambda_i^(N alpha_i)`.
    pub fn casimir_alpha(&self, alpha: &[i64]) -> Complex64 {
        let sign = if self.sigma(alpha).rem_euclid(2) == 1 {
            self.params.zeta_tilde()
        } else {
            1.0
        };
        let mut v = Complex64::new(sign, 0.0);
        for (i, &e) in alpha.iter().enumerate() {
            v *= powi(self.lambda[i], self.params.n_root as i64 * e);
        }
        v
    }
}

fn powi(z: Complex64, e: i64) -> Complex64 {
    let w = z.powi(e.unsigned_abs().min(i32::MAX as u64) as i32);
    if e < 0 {
        w.inv()
    } else {
        w
    }
}

/// Minimal `N`-dimensional realization for a rank-2 quiver with `b_21 = 1`:
/// `Y_1 = lambda_1 * diag(zeta^2, zeta^4, ..., zeta^(2N))` and `Y_2` is
/// `lambda_2` times the cyclic shift `(Y_2)_{ab} = delta_{a,b+1}`, giving
/// `Y_1 Y_2 = zeta^2 Y_2 Y_1`.
pub fn minimal_rank2(params: RootParams, lambda: [Complex64; 2]) -> (Mat<c64>, Mat<c64>) {
    let n = params.n_root as usize;
    let mut y1 = Mat::<c64>::zeros(n, n);
    let mut y2 = Mat::<c64>::zeros(n, n);
    for a in 0..n {
        let v = lambda[0] * params.zeta_pow(2 * (a as i64 + 1));
        y1.write(a, a, c64::new(v.re, v.im));
        let w = lambda[1];
        y2.write((a + 1) % n, a, c64::new(w.re, w.im));
    }
    (y1, y2)
}

/// Draws unit-modulus lambda parameters from a seeded generator, rejecting
/// values whose `N`-th power sits within `1e-3` of `+1` or `-1` (the most
/// common degeneracy loci for the scalar branch cuts downstream). `attempt`
/// perturbs the stream so retries see fresh draws.
pub fn sample_lambdas(
    n: usize,
    params: RootParams,
    seed: u64,
    attempt: u32,
) -> Vec<Complex64> {
    let stride = (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(stride));
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let angle = rng.gen::<f64>() * 2.0 * PI;
        let lam = Complex64::from_polar(1.0, angle);
        let pw = powi(lam, params.n_root as i64);
        if (pw - 1.0).norm() > 1e-3 && (pw + 1.0).norm() > 1e-3 {
            out.push(lam);
        }
    }
    out
}
