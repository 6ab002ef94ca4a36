//! Dense complex linear algebra for the photon (dimension 2) and the
//! photon ⊗ probe system (dimension 4).
//!
//! Basis order for four-component vectors is photon ⊗ probe with the photon
//! index varying slowest: |1⟩|q₁⟩, |1⟩|q₂⟩, |2⟩|q₁⟩, |2⟩|q₂⟩.

mod eigen;
mod operator;
mod schmidt;
mod state;

pub use eigen::{eig_hermitian, reconstruct, Eigenpair};
pub use operator::{pauli, tensor, Operator, Operator2, Operator4, Pauli};
pub use schmidt::{adapted_observable, adapted_observable_variance, schmidt, Schmidt};
pub use state::{
    bloch_from_density, density_from_bloch, expectation, partial_trace_probe, variance,
    BlochVector, DensityOperator, StateVector, StateVector2, StateVector4,
};

pub use num_complex::Complex64 as C64;

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Structural predicates: Hermitian, PSD, unitary, normalized.
    pub const STRUCTURAL: f64 = 1e-10;
    /// Analytic identities.
    pub const IDENTITY: f64 = 1e-12;
    /// Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
    pub const JACOBI: f64 = 1e-13;
    /// Vectors shorter than this are rejected rather than normalized.
    pub const ZERO_NORM: f64 = 1e-12;
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
