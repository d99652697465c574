use serde::{Deserialize, Serialize};

/// Every approximation threshold used across the crate, in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Relative bound on `‖M − M*‖_max / ‖M‖_max` for Hermitian inputs.
    pub hermitian_tol: f64,
    /// Relative reconstruction bound for spectral data.
    pub recon_tol: f64,
    /// Relative pairing tolerance for multiset comparison of spectra.
    pub pair_tol: f64,
    /// Eigenvalues of `A` within this distance of 1 are split off as the type I part.
    pub split_tol: f64,
    /// Acceptance bound for the canonical-unit criterion residual.
    pub criterion_tol: f64,
    /// Bound on block-Toeplitz deviation.
    pub toeplitz_tol: f64,
    /// Relative acceptance bound for rational reconstruction of log-ratios.
    pub fit_tol: f64,
    /// Denominator bound for rational reconstruction of log-ratios.
    pub max_denominator: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            hermitian_tol: 1e-12,
            recon_tol: 1e-9,
            pair_tol: 1e-8,
            split_tol: 1e-9,
            criterion_tol: 1e-8,
            toeplitz_tol: 1e-10,
            fit_tol: 1e-9,
            max_denominator: 64,
        }
    }
}

impl ToleranceConfig {
    /// Multiplies every real-valued tolerance by `factor`; the denominator bound is kept.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            hermitian_tol: self.hermitian_tol * factor,
            recon_tol: self.recon_tol * factor,
            pair_tol: self.pair_tol * factor,
            split_tol: self.split_tol * factor,
            criterion_tol: self.criterion_tol * factor,
            toeplitz_tol: self.toeplitz_tol * factor,
            fit_tol: self.fit_tol * factor,
            max_denominator: self.max_denominator,
        }
    }
}
