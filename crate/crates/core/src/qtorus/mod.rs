//! Noncommutative quantum torus with exact Q(q) coefficients: truncated
//! graded series, normal forms for quantum y-variables, compact-dilogarithm
//! series, and exact verification of the product identities.
//!
//! Monomials Y_alpha, alpha in Z^n, obey Y_alpha Y_beta =
//! q^{-2 alpha^T B beta} Y_beta Y_alpha and are normalized by
//! Y_{alpha+beta} = q^{alpha^T B beta} Y_alpha Y_beta, all with respect to
//! the initial exchange matrix B.

mod normal;
mod psi;
mod series;
mod verify;

pub use normal::{mutate_quantum, run_quantum_trajectory, QuantumSeed, QYNormalForm};
pub use psi::{
    pochhammer_apply, pochhammer_q2_coefficients, psi_apply, psi_coefficients,
    psi_inverse_coefficients,
};
pub use series::TorusSeries;
pub use verify::{
    classical_coherence_ok, pochhammer_reordering_mirror, verify_pochhammer_reordering,
    verify_shuffle, verify_shuffle_graded, verify_tropical_identity, verify_universal_identity,
    SeriesIdentityReport,
};

use crate::cluster::{ClusterError, ExchangeMatrix};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QTorusError {
    /// Series argument whose leading exponent has nonpositive grade: its
    /// powers would not truncate.
    NonPositiveGrade { gamma: Vec<i64>, grade: i64 },
    /// Tropical exponent mixing strict signs where a coherent one is needed.
    NonCoherentExponent { gamma: Vec<i64> },
    /// 1 + x has vanishing constant term and cannot be renormalized.
    ZeroConstantTerm,
    /// The mutation sequence is not a period, so no identity is attached.
    NotAPeriod,
    Cluster(ClusterError),
}

impl fmt::Display for QTorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QTorusError::NonPositiveGrade { gamma, grade } => write!(
                f,
                "leading exponent {:?} has grade {} <= 0; series does not truncate",
                gamma, grade
            ),
            QTorusError::NonCoherentExponent { gamma } => {
                write!(f, "exponent {:?} mixes signs", gamma)
            }
            QTorusError::ZeroConstantTerm => {
                write!(f, "constant term vanished; cannot renormalize series")
            }
            QTorusError::NotAPeriod => write!(f, "mutation sequence is not a period"),
            QTorusError::Cluster(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for QTorusError {}

impl From<ClusterError> for QTorusError {
    fn from(e: ClusterError) -> Self {
        match e {
            ClusterError::NotAPeriod => QTorusError::NotAPeriod,
            other => QTorusError::Cluster(other),
        }
    }
}

/// Ambient data for all series arithmetic: the initial exchange matrix, the
/// grading functional, and the truncation degree.
///
/// The default grading is the all-ones functional on the nonnegative orthant.
/// Custom integer weights are allowed (any functional that is strictly
/// positive on every exponent actually used gives the same verdicts); when
/// some weight is nonpositive the orthant restriction is lifted and only
/// grade positivity is enforced.
#[derive(Clone, Debug)]
pub struct TorusContext {
    b: ExchangeMatrix,
    weights: Vec<i64>,
    degree: i64,
    orthant: bool,
}

impl TorusContext {
    pub fn new(b: ExchangeMatrix, degree: i64) -> Self {
        assert!(degree >= 0, "truncation degree must be nonnegative");
        let n = b.n();
        TorusContext {
            b,
            weights: vec![1; n],
            degree,
            orthant: true,
        }
    }

    pub fn with_weights(b: ExchangeMatrix, weights: Vec<i64>, degree: i64) -> Self {
        assert_eq!(weights.len(), b.n(), "one weight per vertex");
        assert!(degree >= 0, "truncation degree must be nonnegative");
        let orthant = weights.iter().all(|&w| w > 0);
        TorusContext {
            b,
            weights,
            degree,
            orthant,
        }
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    /// The skew pairing alpha^T B beta.
    pub fn pairing(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let n = self.n();
        let mut s = 0;
        for i in 0..n {
            if alpha[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += alpha[i] * self.b.entry(i, j) * beta[j];
            }
        }
        s
    }

    pub fn grade(&self, delta: &[i64]) -> i64 {
        self.weights
            .iter()
            .zip(delta)
            .map(|(w, d)| w * d)
            .sum()
    }

    /// True when the exponent may appear as a nonconstant series term.
    pub fn admissible(&self, delta: &[i64]) -> bool {
        if delta.iter().all(|&d| d == 0) {
            return true;
        }
        if self.orthant && delta.iter().any(|&d| d < 0) {
            return false;
        }
        self.grade(delta) >= 1
    }
}
