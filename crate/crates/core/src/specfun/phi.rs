//! The noncompact quantum dilogarithm Phi_b: double-product form for
//! Im(b^2) > 0, a certified contour-integral form covering real b, and the
//! closed form at b = 1 with an explicitly tracked argument logarithm.

use super::poch::poch_inf;
use super::{EvalConfig, SpecFunError};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}
fn iu() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Phi_b(x) = (-q e^{2 pi b x}; q^2)_oo / (-qt e^{2 pi x / b}; qt^2)_oo with
/// q = e^{i pi b^2} and qt = e^{-i pi / b^2}; both products converge exactly
/// when Im(b^2) > 0.
pub fn phi_b_product(
    b: Complex64,
    x: Complex64,
    cfg: &EvalConfig,
) -> Result<Complex64, SpecFunError> {
    let b2 = b * b;
    if b2.im <= 0.0 {
        return Err(SpecFunError::NonConvergentProduct { im_b2: b2.im });
    }
    let q = (iu() * PI * b2).exp();
    let qt = (-iu() * PI / b2).exp();
    let num = poch_inf(-q * (2.0 * PI * b * x).exp(), q * q, cfg.product_tol, cfg)?;
    let den = poch_inf(-qt * (2.0 * PI * x / b).exp(), qt * qt, cfg.product_tol, cfg)?;
    Ok(num / den)
}

/// Phi_b(x) = exp( I ), I = int_{R + i0} e^{-2 i x t} /
/// (4 sinh(b t) sinh(t/b) t) dt, evaluated on a straight contour at height h
/// above the pole at t = 0 by panelwise Gauss-Legendre quadrature.
///
/// Valid for |Im x| < Re(b + 1/b)/2 (with a small certified margin); the
/// truncation point is chosen from the explicit bound
/// |f(s + ih)| <= (K/|s|) e^{-delta |s|}, delta = Re(b + 1/b) - 2 |Im x|.
pub fn phi_b_integral(
    b: Complex64,
    x: Complex64,
    cfg: &EvalConfig,
) -> Result<Complex64, SpecFunError> {
    let binv = b.inv();
    let qsum = b + binv;
    let half_width = qsum.re / 2.0;
    let delta = qsum.re - 2.0 * x.im.abs();
    if half_width <= 0.0 || x.im.abs() >= half_width || delta < 1e-3 {
        return Err(SpecFunError::OutOfStrip {
            im_x: x.im,
            half_width,
        });
    }
    if b.re <= 0.0 {
        return Err(SpecFunError::OutOfStrip {
            im_x: x.im,
            half_width,
        });
    }
    // Contour height: at most a quarter of the distance to the nearest pole
    // row (t = i pi k b, i pi k / b) and of the strip half-width.
    let h = 0.25 * half_width.min(1.0).min(PI * b.re).min(PI * binv.re);
    let kconst =
        (2.0 * h * x.re.abs() + h * (b.im.abs() + binv.im.abs())).exp() / 0.74;
    let tol = cfg.quad_tail_tol;
    let mut t_end = (10.0f64).max(10.0 / delta);
    for _ in 0..4 {
        let arg = (2.0 * kconst / (delta * tol * t_end)).max(2.0);
        t_end = (arg.ln() / delta).max(3.0);
    }
    let n_panels = ((2.0 * t_end / h).ceil() as usize).max(2);
    if n_panels > cfg.max_panels {
        return Err(SpecFunError::Budget {
            what: "phi_b_integral",
        });
    }
    let (nodes, weights) = gauss_legendre_20();
    let len = 2.0 * t_end / n_panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..n_panels {
        let a = -t_end + p as f64 * len;
        let mut panel = Complex64::new(0.0, 0.0);
        for (xi, wi) in nodes.iter().zip(weights.iter()) {
            let s = a + 0.5 * len * (xi + 1.0);
            let t = Complex64::new(s, h);
            let f = (-2.0 * iu() * x * t).exp()
                / (4.0 * (b * t).sinh() * (binv * t).sinh() * t);
            panel += *wi * f;
        }
        total += panel * (0.5 * len);
    }
    Ok(total.exp())
}

/// Phi_b by the cheapest valid route: products when Im(b^2) > 0, otherwise
/// the contour integral.
pub fn phi_b(
    b: Complex64,
    x: Complex64,
    cfg: &EvalConfig,
) -> Result<Complex64, SpecFunError> {
    if (b * b).im > 1e-12 {
        phi_b_product(b, x, cfg)
    } else {
        phi_b_integral(b, x, cfg)
    }
}

/// g_b(u) := Phi_b(Log u / (2 pi b)) with the principal logarithm of u.
pub fn g_b(
    b: Complex64,
    u: Complex64,
    cfg: &EvalConfig,
) -> Result<Complex64, SpecFunError> {
    phi_b(b, u.ln() / (2.0 * PI * b), cfg)
}

/// Exponent A(log_w) with g_1 = e^A evaluated from a tracked logarithm:
/// A = (i / 2 pi) Li2(w) + (i log_w / 2 pi) Log(1 - w), w = e^{log_w}.
/// Shifting log_w by 2 pi i multiplies g_1 by (1 - w)^{-1}, which is why the
/// logarithm is an explicit input rather than re-derived from w.
fn g1_exponent(log_w: Complex64) -> Complex64 {
    let w = log_w.exp();
    let om = one() - w;
    let mut a = iu() / (2.0 * PI) * super::li2(w);
    if !(om.re == 0.0 && om.im == 0.0) {
        a += iu() * log_w / (2.0 * PI) * om.ln();
    }
    a
}

/// g_1 from a tracked logarithm of its argument (see `g1_exponent`).
pub fn g1_log(log_w: Complex64) -> Complex64 {
    g1_exponent(log_w).exp()
}

/// Exponent of Phi_1(z) = exp((i/2pi) Li2(e^{2 pi z})) (1 - e^{2 pi z})^{i z};
/// exposed so that fractional powers Phi_1^{1/k} can be taken in log space.
pub fn phi_1_log(z: Complex64) -> Complex64 {
    g1_exponent(2.0 * PI * z)
}

/// Closed form of Phi_1; Phi_1(0) = e^{i pi / 12}.
pub fn phi_1(z: Complex64) -> Complex64 {
    phi_1_log(z).exp()
}

/// 20-point Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration
/// on the Legendre recurrence.
fn gauss_legendre_20() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| {
        let n = 20usize;
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let eval = |x: f64| -> (f64, f64) {
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            (p1, nf * (x * p1 - p0) / (x * x - 1.0))
        };
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..60 {
                let (p, dp) = eval(x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = eval(x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}
