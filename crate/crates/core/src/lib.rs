//! Numerics for the quantum positive-evidence order on density matrices
//! and channels: order predicates, Bayesian updates, Rényi divergences,
//! way-below witnesses and Choi-state tools.

pub mod bayes;
pub mod channel;
pub mod divergence;
pub mod domain;
pub mod error;
pub mod hermitian;
pub mod io;
pub mod oracle;
pub mod orders;
pub mod random;
pub mod state;
pub mod tolerance;
pub mod verdict;

pub use channel::Channel;
pub use divergence::{Alpha, DivergenceValue};
pub use error::{CptpProperty, Error, Result};
pub use hermitian::{CMatrix, CVector, HermitianMatrix, Spectrum, Subsystem};
pub use orders::{lev_leq, primed_leq, qpe_leq};
pub use state::{DensityMatrix, Effect, Eigenspace, ProbabilityVector, Subspace};
pub use tolerance::{LogBase, ToleranceConfig};
pub use verdict::{OrderVerdict, Relation};
