//! Engine for cluster y-variable mutation in four regimes (classical,
//! quantum, dual, cyclic), emission of the associated dilogarithm identities,
//! and their verification: exact truncated q-series over Q(q) for generic q,
//! and numeric matrix/scalar evaluation at roots of unity.

pub mod cluster;
pub mod qpoly;
pub mod qtorus;
pub mod rootrep;
pub mod specfun;

pub use cluster::{ClusterError, CVector, ExchangeMatrix, Seed, Trajectory};
pub use qpoly::{QCoeff, ZPoly};
pub use qtorus::{QTorusError, QuantumSeed, QYNormalForm, TorusContext, TorusSeries};
