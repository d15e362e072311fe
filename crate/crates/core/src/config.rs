//! Numerical tolerances shared by every module.
//!
//! Exact rational results only survive floating point up to some epsilon, so
//! every comparison in the crate reads its threshold from one [`Tolerances`]
//! record. The CLI exposes each field as a `--tol-*` override.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max-norm of `a - a^dagger` accepted as Hermitian.
    pub hermitian: f64,
    /// `|tr rho - 1|` accepted as unit trace.
    pub trace: f64,
    /// Smallest eigenvalue accepted as positive semidefinite is `-psd`.
    pub psd: f64,
    /// Looser positivity bound applied to sampled trajectory states.
    pub trajectory_psd: f64,
    /// Relative singular value threshold (times sigma_max) for rank decisions.
    pub rank: f64,
    /// Max-norm distance to `I/n` classified as maximally mixed.
    pub mixed: f64,
    /// Smallest eigenvalue strictly above this counts as positive definite.
    pub definite: f64,
    /// Row-sum tolerance for the doubly-stochastic test on `M`.
    pub stochastic: f64,
    /// Max-norm tolerance for the `sum B^dagger B = I` identity.
    pub sum_identity: f64,
    /// Eigenvalue grouping tolerance for degenerate Laplacian spectra.
    pub degeneracy: f64,
    /// Relative tolerance of the adaptive integrator.
    pub rk_rel: f64,
    /// Absolute tolerance of the adaptive integrator.
    pub rk_abs: f64,
    /// Residual `||L(rho_inf)||_max` accepted for a steady state.
    pub residual: f64,
    /// Normalization tolerance for probability and amplitude vectors.
    pub normalization: f64,
    /// Required `| ||psi0|| - 1 |` for an initial amplitude vector.
    pub unit_norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            trace: 1e-10,
            psd: 1e-10,
            trajectory_psd: 1e-8,
            rank: 1e-9,
            mixed: 1e-9,
            definite: 1e-10,
            stochastic: 1e-12,
            sum_identity: 1e-12,
            degeneracy: 1e-9,
            rk_rel: 1e-10,
            rk_abs: 1e-12,
            residual: 1e-10,
            normalization: 1e-10,
            unit_norm: 1e-12,
        }
    }
}
