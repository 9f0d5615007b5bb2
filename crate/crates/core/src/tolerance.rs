use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every module.
///
/// All operators in this crate are small-integer and root-of-unity
/// combinations, so the defaults are tight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Hermiticity check, relative to the Frobenius norm of the operand.
    pub hermitian: f64,
    /// Eigenvalue accuracy, relative.
    pub eigen: f64,
    /// Absolute slack when asserting a matrix is positive semidefinite.
    pub psd: f64,
    /// Absolute tolerance for `alpha[k] == alpha[n-k]`.
    pub symmetry: f64,
    /// Absolute tolerance for circulance of a profile.
    pub circulant: f64,
    /// Absolute tolerance for the Gram equations.
    pub gram: f64,
    /// Absolute tolerance for the simplex constraint `sum(alpha) == n-1`.
    pub simplex: f64,
    /// Threshold below which a see-saw value refutes block-positivity.
    pub block_positive: f64,
    /// Negative inverse-DFT roundoff up to this size is clamped to zero.
    pub clamp: f64,
    /// Inequality slack for the closed-form n=2 and n=3 classifiers.
    pub inequality: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            eigen: 1e-10,
            psd: 1e-10,
            symmetry: 1e-9,
            circulant: 1e-9,
            gram: 1e-9,
            simplex: 1e-9,
            block_positive: 1e-6,
            clamp: 1e-12,
            inequality: 1e-12,
        }
    }
}
