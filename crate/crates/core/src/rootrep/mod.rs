//! Finite-dimensional realization of the quantum torus when the deformation
//! parameter is a root of unity.
//!
//! The torus generators become explicit matrices (modulation/translation
//! operators on functions over `(Z_N)^n`), fractional powers of central
//! elements become spectral functional calculus, and the mutation dynamics
//! split into three mutually checking tracks:
//!
//! * a matrix track for the standard quantum y-variables specialized at the
//!   root of unity,
//! * an exact symbolic track for the cyclic y-variables
//!   ([`CyclicYSymbol`]), which advances a commuting Laurent track
//!   ([`DualY`]) in lockstep to read off the central N-th powers,
//! * the commuting Laurent track itself, also usable standalone.
//!
//! On top of these, [`verify`] assembles the ordered operator products that
//! the identity checkers reduce to a scalar multiple of the identity matrix.

mod linalg;
mod mutate;
mod symbol;
mod verify;
mod weyl;

pub use linalg::{
    inverse, mat_from_complex, mat_pow, phase_report, plus_scaled_identity, rel_residual,
    scalar_of, scale_mat, spectral_apply, PhaseReport, COND_LIMIT,
};
pub use mutate::{DualTrack, QuantumMatrixTrack, SymbolicCyclicTrack};
pub use symbol::{
    principal_frac_pow, CyclicYSymbol, DualY, SymbolContext, SymbolFactor, TildePoly,
};
pub use verify::{
    run_until_passing, run_with_resampling, verify_cyclic_dual_universal,
    verify_cyclic_standard_universal, verify_dn_conjugation,
    verify_factorized_dilog_dual_universal, verify_factorized_dilog_tropical,
    verify_twisted_dilog_tropical, ConjugationReport, PrefactorBase,
};
pub use weyl::{minimal_rank2, sample_lambdas, RootParams, WeylRep, MAX_DIM};

use crate::cluster::ClusterError;
use crate::specfun::SpecFunError;
use std::error::Error;
use std::fmt;

/// Errors from the root-of-unity matrix layer.
#[derive(Debug, Clone, PartialEq)]
pub enum RootRepError {
    /// Underlying exchange-matrix operation failed.
    Cluster(ClusterError),
    /// Scalar special-function evaluation failed (branch cut, divergence...).
    SpecFun(SpecFunError),
    /// A matrix expected to be a scalar multiple of the identity was not.
    NonCentral { deviation: f64 },
    /// Eigenvector matrix too ill-conditioned for reliable functional calculus.
    IllConditioned { cond: f64 },
    /// A mutation factor was numerically singular and could not be inverted.
    SingularFactor { step: usize },
    /// Requested representation dimension N^n exceeds the supported bound.
    DimTooLarge { dim: usize },
    /// Parameter sampling kept hitting branch cuts / degenerate spectra.
    SampleExhausted { tries: usize },
}

impl fmt::Display for RootRepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootRepError::Cluster(e) => write!(f, "cluster operation failed: {e}"),
            RootRepError::SpecFun(e) => write!(f, "scalar evaluation failed: {e}"),
            RootRepError::NonCentral { deviation } => write!(
                f,
                "matrix is not a scalar multiple of the identity (relative deviation {deviation:.3e})"
            ),
            RootRepError::IllConditioned { cond } => write!(
                f,
                "eigenvector matrix is ill-conditioned (estimate {cond:.3e})"
            ),
            RootRepError::SingularFactor { step } => {
                write!(f, "singular mutation factor at step {step}")
            }
            RootRepError::DimTooLarge { dim } => {
                write!(f, "representation dimension {dim} exceeds the supported bound")
            }
            RootRepError::SampleExhausted { tries } => {
                write!(f, "parameter sampling failed after {tries} attempts")
            }
        }
    }
}

impl Error for RootRepError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            RootRepError::Cluster(e) => Some(e),
            RootRepError::SpecFun(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ClusterError> for RootRepError {
    fn from(e: ClusterError) -> Self {
        RootRepError::Cluster(e)
    }
}

impl From<SpecFunError> for RootRepError {
    fn from(e: SpecFunError) -> Self {
        RootRepError::SpecFun(e)
    }
}
