//! Complex dilogarithm Li2 on the principal branch, cut along [1, +oo).
//!
//! On the cut the value is the limit from below (so Li2(2) = pi^2/4 -
//! i pi log 2); inputs with a positive-signed zero imaginary part on the cut
//! are mapped to that limit.  Dispatch: direct power series for |z| <= 0.7,
//! inversion for |z| >= 1/0.7, reflection for |1 - z| <= 0.7, and otherwise
//! the Bernoulli series in u = -Log(1 - z), which converges for |u| < 2 pi.

use num_complex::Complex64;
use std::f64::consts::PI;

const PI2_6: f64 = PI * PI / 6.0;

/// Even Bernoulli numbers B_2, B_4, ..., B_40.
const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// Direct defining series sum_{k>=1} z^k / k^2; caller ensures |z| < 1.
fn series_direct(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for k in 1..=400u32 {
        pow *= z;
        let term = pow / ((k as f64) * (k as f64));
        sum += term;
        if term.norm() < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
    }
    sum
}

/// Bernoulli series in u = -Log(1-z): u - u^2/4 + sum B_{2m} u^{2m+1}/(2m+1)!.
fn series_u(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let mut sum = u - u2 / 4.0;
    let mut upow = u; // u^{2m+1} running power
    let mut fact = 1.0f64; // (2m+1)! running factorial
    for (m, b) in BERNOULLI_EVEN.iter().enumerate() {
        let mm = m as f64;
        upow *= u2;
        fact *= (2.0 * mm + 2.0) * (2.0 * mm + 3.0);
        let term = upow * (*b / fact);
        sum += term;
        if term.norm() < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
    }
    sum
}

/// Principal-branch complex dilogarithm.
pub fn li2(z: Complex64) -> Complex64 {
    // On-cut inputs take the limit from below.
    let z = if z.im == 0.0 && z.im.is_sign_positive() && z.re > 1.0 {
        Complex64::new(z.re, -0.0)
    } else {
        z
    };
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.re == 1.0 && z.im == 0.0 {
        return Complex64::new(PI2_6, 0.0);
    }
    let r = z.norm();
    if r <= 0.7 {
        return series_direct(z);
    }
    if r >= 1.0 / 0.7 {
        // Li2(z) = -pi^2/6 - Log(-z)^2/2 - Li2(1/z)
        let log_mz = (-z).ln();
        return -Complex64::new(PI2_6, 0.0) - 0.5 * log_mz * log_mz - series_direct(z.inv());
    }
    let one_minus = Complex64::new(1.0, 0.0) - z;
    if one_minus.norm() <= 0.7 {
        // Li2(z) = pi^2/6 - Log(z) Log(1-z) - Li2(1-z)
        return Complex64::new(PI2_6, 0.0) - z.ln() * one_minus.ln() - series_direct(one_minus);
    }
    series_u(-one_minus.ln())
}
