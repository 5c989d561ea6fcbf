//! Scalar cyclic remainder functions at a primitive root of unity: the
//! fractional-power products d_N and d*_N, the finite product D_N, and the
//! ghat companions whose signed products telescope along mutation periods.
//!
//! Every fractional power is assembled in log space from principal
//! logarithms; a base on the closed negative real axis is rejected as a
//! branch-cut hit.

use super::li2::li2;
use super::SpecFunError;
use num_complex::Complex64;
use std::f64::consts::PI;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}
fn iu() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Principal log, rejecting the closed negative real axis.
fn ln_checked(w: Complex64) -> Result<Complex64, SpecFunError> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(SpecFunError::BranchCut { re: w.re, im: w.im });
    }
    Ok(w.ln())
}

/// log D_N(x; q) with D_N(x; q) = prod_{k=1}^{N-1} (1 - q^k x)^{k/N}.
pub fn d_cap_log(x: Complex64, q: Complex64, n: u32) -> Result<Complex64, SpecFunError> {
    let nf = n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qk = one();
    for k in 1..n {
        qk *= q;
        acc += (k as f64 / nf) * ln_checked(one() - qk * x)?;
    }
    Ok(acc)
}

/// D_N(x; q); D_1 is the empty product 1.
pub fn d_cap(x: Complex64, q: Complex64, n: u32) -> Result<Complex64, SpecFunError> {
    d_cap_log(x, q, n).map(|l| l.exp())
}

/// log d_N(x) with zeta = e^{i pi / N}:
/// d_N(x) = (1 + (-x)^N)^{(N-1)/2N} prod_{k=1}^{N-1} (1 + zeta^{2k+1} x)^{-k/N}.
pub fn d_n_log(x: Complex64, n: u32) -> Result<Complex64, SpecFunError> {
    let nf = n as f64;
    let mut acc = ((nf - 1.0) / (2.0 * nf)) * ln_checked(one() + (-x).powu(n))?;
    for k in 1..n {
        let zeta_pow = Complex64::from_polar(1.0, PI * (2.0 * k as f64 + 1.0) / nf);
        acc -= (k as f64 / nf) * ln_checked(one() + zeta_pow * x)?;
    }
    Ok(acc)
}

/// d_N(x); d_1 is identically 1 and d_N(0) = 1.
pub fn d_n_scalar(x: Complex64, n: u32) -> Result<Complex64, SpecFunError> {
    d_n_log(x, n).map(|l| l.exp())
}

/// log d*_N(x) with zeta = e^{i pi / N}:
/// d*_N(x) = (1 - x^N)^{(N-1)/2N} prod_{k=1}^{N-1} (1 - zeta^{2k} x)^{-k/N}.
pub fn d_n_star_log(x: Complex64, n: u32) -> Result<Complex64, SpecFunError> {
    let nf = n as f64;
    let mut acc = ((nf - 1.0) / (2.0 * nf)) * ln_checked(one() - x.powu(n))?;
    for k in 1..n {
        let zeta_pow = Complex64::from_polar(1.0, PI * (2.0 * k as f64) / nf);
        acc -= (k as f64 / nf) * ln_checked(one() - zeta_pow * x)?;
    }
    Ok(acc)
}

/// d*_N(x) = d_N(x / (-zeta)) rotated; see `d_star_relates_to_d` test.
pub fn d_n_star_scalar(x: Complex64, n: u32) -> Result<Complex64, SpecFunError> {
    d_n_star_log(x, n).map(|l| l.exp())
}

/// ghat_{1,N,M}(u) = exp( i Li2(V) / (2 pi M N)
///                        + (i Log u / (2 pi M)) Log(1 - V) ),
/// V = (-1)^{M+N} u^N, for coprime M, N.  At M = 1 this is
/// ghat_1(u^N)^{1/N} (1 + (-1)^N u^N)^{(1+N)/2N} with
/// ghat_1(w) = g_1(e^{i pi} (-1)^N w): the half-turn offsets of the tracked
/// g_1 argument cancel the explicit prefactor exponent exactly, which is how
/// the closed form above arises.
pub fn g_hat_1nm(u: Complex64, n: u32, m: u32) -> Result<Complex64, SpecFunError> {
    let sign = if (n + m) % 2 == 1 { -1.0 } else { 1.0 };
    let v = sign * u.powu(n);
    let log_u = ln_checked(u)?;
    let log_omv = ln_checked(one() - v)?;
    let mf = m as f64;
    let nf = n as f64;
    let a = iu() * li2(v) / (2.0 * PI * mf * nf) + iu() * log_u / (2.0 * PI * mf) * log_omv;
    Ok(a.exp())
}

/// ghat_{1,N}(u) = ghat_{1,N,1}(u).
pub fn g_hat_1n(u: Complex64, n: u32) -> Result<Complex64, SpecFunError> {
    g_hat_1nm(u, n, 1)
}
