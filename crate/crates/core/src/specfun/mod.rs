//! Numerical special functions for root-of-unity limits: the principal-branch
//! complex dilogarithm, q-Pochhammer products with certified truncation tails,
//! the noncompact quantum dilogarithm Phi_b (double product and contour
//! integral forms), the cyclic remainder functions d_N / d*_N / ghat, and
//! tau-ladder limit checks with fitted convergence rates.
//!
//! All fractional powers are taken in log space from explicitly tracked
//! logarithms; principal branches are used only where a function's contract
//! says so, and arguments that land on a branch cut are rejected.

mod checks;
mod cyclic;
mod li2;
mod phi;
mod poch;

pub use checks::{
    check_appendix_poch_q, check_appendix_poch_qtilde, check_appendix_rstar_shift,
    check_classical_root_identity, check_diff_comp, check_g_root, check_phi_cyclic,
    check_phi_m1, check_root_limit_poch_footnote, check_root_limit_psi, fit_rate,
    LimitCheckRow, RATE_EXACT,
};
pub use cyclic::{
    d_cap, d_cap_log, d_n_log, d_n_scalar, d_n_star_log, d_n_star_scalar, g_hat_1n, g_hat_1nm,
};
pub use li2::li2;
pub use phi::{g1_log, g_b, phi_1, phi_1_log, phi_b, phi_b_integral, phi_b_product};
pub use poch::{poch_inf, poch_inf_log, poch_inf_with_tail, psi_q};

use std::fmt;

/// Errors from the numeric special-function layer.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecFunError {
    /// Infinite product with |q| >= 1 cannot converge.
    DivergentBase { q_abs: f64 },
    /// Contour-integral argument outside (or too close to the edge of) the
    /// analyticity strip |Im x| < Re(b + 1/b)/2.
    OutOfStrip { im_x: f64, half_width: f64 },
    /// The double-product form of Phi_b requires Im(b^2) > 0.
    NonConvergentProduct { im_b2: f64 },
    /// A fractional-power base landed on the closed negative real axis.
    BranchCut { re: f64, im: f64 },
    /// An iteration guard was exceeded before the certified tolerance.
    Budget { what: &'static str },
}

impl fmt::Display for SpecFunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecFunError::DivergentBase { q_abs } => {
                write!(f, "product base |q| = {} >= 1 diverges", q_abs)
            }
            SpecFunError::OutOfStrip { im_x, half_width } => write!(
                f,
                "argument Im = {} outside integral strip of half-width {}",
                im_x, half_width
            ),
            SpecFunError::NonConvergentProduct { im_b2 } => write!(
                f,
                "product form needs Im(b^2) > 0, got {}",
                im_b2
            ),
            SpecFunError::BranchCut { re, im } => write!(
                f,
                "power base {} + {}i lies on the closed negative real axis",
                re, im
            ),
            SpecFunError::Budget { what } => {
                write!(f, "iteration budget exceeded in {}", what)
            }
        }
    }
}

impl std::error::Error for SpecFunError {}

/// Tunable tolerances and budgets for the numeric layer.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Certified relative tail bound for infinite products.
    pub product_tol: f64,
    /// Hard cap on product factors before giving up.
    pub max_product_terms: usize,
    /// Target bound on the truncated contour-integral tail.
    pub quad_tail_tol: f64,
    /// Hard cap on quadrature panels.
    pub max_panels: usize,
    /// tau ladder exponents: tau_j = 2^{-j} for j in ladder.0..=ladder.1.
    pub ladder: (u32, u32),
    /// Minimal fitted convergence rate for a ladder check to pass.
    pub rate_threshold: f64,
    /// Absolute tolerance for Richardson-extrapolated limits.
    pub diff_comp_tol: f64,
    /// Absolute tolerance for pointwise function-identity checks.
    pub point_tol: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            product_tol: 1e-11,
            max_product_terms: 40_000_000,
            quad_tail_tol: 1e-12,
            max_panels: 20_000,
            ladder: (4, 14),
            rate_threshold: 0.9,
            diff_comp_tol: 1e-6,
            point_tol: 1e-7,
        }
    }
}

impl EvalConfig {
    /// The tau ladder as concrete values, coarsest first.
    pub fn taus(&self) -> Vec<f64> {
        (self.ladder.0..=self.ladder.1)
            .map(|j| 0.5f64.powi(j as i32))
            .collect()
    }
}
