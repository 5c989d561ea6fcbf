//! Infinite q-Pochhammer products (x; q)_oo with certified truncation tails.

use super::{EvalConfig, SpecFunError};
use num_complex::Complex64;

/// (x; q)_oo = prod_{k>=0} (1 - q^k x) for |q| < 1, with the truncation tail
/// certified: once |q^{K+1} x| <= 1/2, the dropped factors satisfy
/// |sum_{k>K} Log(1 - q^k x)| <= 2 |x| |q|^{K+1} / (1 - |q|), and the loop
/// runs until that bound is below `tol`.
///
/// Returns (value, tail_bound); the relative error is at most e^bound - 1.
pub fn poch_inf_with_tail(
    x: Complex64,
    q: Complex64,
    tol: f64,
    cfg: &EvalConfig,
) -> Result<(Complex64, f64), SpecFunError> {
    let (log, tail) = poch_inf_log(x, q, tol, cfg)?;
    Ok((log.exp(), tail))
}

/// Convenience wrapper returning just the product value.
pub fn poch_inf(
    x: Complex64,
    q: Complex64,
    tol: f64,
    cfg: &EvalConfig,
) -> Result<Complex64, SpecFunError> {
    poch_inf_with_tail(x, q, tol, cfg).map(|(v, _)| v)
}

/// Log of (x; q)_oo with the same certified tail bound, for regimes where the
/// value itself would over- or underflow.  Factors are multiplied in value
/// space and flushed to a log accumulator in blocks, so the result is a
/// logarithm of the product only up to 2 pi i; ratio-style consumers are
/// unaffected.
pub fn poch_inf_log(
    x: Complex64,
    q: Complex64,
    tol: f64,
    cfg: &EvalConfig,
) -> Result<(Complex64, f64), SpecFunError> {
    let qn = q.norm();
    if qn >= 1.0 {
        return Err(SpecFunError::DivergentBase { q_abs: qn });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut log_acc = Complex64::new(0.0, 0.0);
    let mut block = one;
    let mut p = x; // q^k x
    let geom = 1.0 - qn;
    for k in 0..cfg.max_product_terms {
        let tail = 2.0 * p.norm() / geom;
        if p.norm() <= 0.5 && tail <= tol {
            return Ok((log_acc + block.ln(), tail));
        }
        block *= one - p;
        p *= q;
        let bn = block.norm_sqr();
        if !(1e-200..=1e200).contains(&bn) {
            log_acc += block.ln();
            block = one;
        }
        if k + 1 == cfg.max_product_terms {
            return Err(SpecFunError::Budget {
                what: "poch_inf_log",
            });
        }
    }
    // Loop bound of zero terms: only reachable with max_product_terms == 0.
    Err(SpecFunError::Budget {
        what: "poch_inf_log",
    })
}

/// The compact quantum dilogarithm Psi_q(x) = 1 / (-q x; q^2)_oo, |q| < 1.
pub fn psi_q(
    x: Complex64,
    q: Complex64,
    tol: f64,
    cfg: &EvalConfig,
) -> Result<Complex64, SpecFunError> {
    poch_inf(-q * x, q * q, tol, cfg).map(|v| v.inv())
}
