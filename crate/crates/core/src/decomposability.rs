//! Decomposable versus indecomposable witnesses.
//!
//! A symmetric `α` (`α_k = α_{n-k}`) splits as `W = P + Q^Γ` with
//!
//! * `P = Σ_{ij} P_{ij} |ii⟩⟨jj|`, circulant with first row `(α_0, α_1−1, …, α_{n-1}−1)`,
//! * `Q = Σ_{i<j} α_{i-j} (|ij⟩−|ji⟩)(⟨ij|−⟨ji|)`.
//!
//! `P` is positive iff its circulant eigenvalues `λ_0 = Σα − (n−1)` and
//! `λ_j = c_j + 1` are nonnegative. An asymmetric `α` is exposed by the PPT
//! operator `ρ_ε`, whose pairing with `W` is negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{c64, dft_real, BipartiteOperator, ComplexMatrix};
use crate::tolerance::ToleranceConfig;
use crate::weyl::p_plus;
use crate::witness::{alpha_block, alpha_to_c, witness_from_alpha, AlphaVector};

/// `(k, |α_k − α_{n-k}|)` for the smallest `k` achieving the maximum.
pub fn asymmetry(a: &AlphaVector) -> (usize, f64) {
    let n = a.dim();
    (1..n)
        .map(|k| (k, (a.get(k as i64) - a.get(-(k as i64))).abs()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// `α_k = α_{n-k}` for all `k`, within `tol.symmetry`.
pub fn is_decomposable(a: &AlphaVector, tol: &ToleranceConfig) -> bool {
    asymmetry(a).1 <= tol.symmetry
}

/// The same criterion read on the Weyl side: every `c_k` is real.
/// Returns `max_k |Im c_k|`.
pub fn spectral_asymmetry(a: &AlphaVector) -> f64 {
    alpha_to_c(a).c().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCertificate {
    /// Positive part, untouched by the partial transpose.
    pub p: BipartiteOperator,
    /// Positive part entering as `Q^Γ`.
    pub q: BipartiteOperator,
    /// `‖W − P − Q^Γ‖_F`
    pub residual: f64,
    /// Eigenvalues of the circulant block of `P`, indexed by frequency.
    pub circulant_eigenvalues: Vec<f64>,
}

fn circulant_part(a: &AlphaVector) -> BipartiteOperator {
    let n = a.dim();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let k = j as i64 - i as i64;
            let v = if i == j { a.get(0) } else { a.get(k) - 1.0 };
            m[(i * n + i, j * n + j)] = c64::new(v, 0.0);
        }
    }
    BipartiteOperator::new(n, m).expect("shape fixed by construction")
}

fn antisymmetric_part(a: &AlphaVector) -> BipartiteOperator {
    let n = a.dim();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = a.get(i as i64 - j as i64);
            let (ij, ji) = (i * n + j, j * n + i);
            m[(ij, ij)] += c64::new(w, 0.0);
            m[(ij, ji)] -= c64::new(w, 0.0);
        }
    }
    BipartiteOperator::new(n, m).expect("shape fixed by construction")
}

/// Build and verify `W = P + Q^Γ`.
///
/// Fails on an asymmetric `α` (reporting the worst index) and on a negative
/// circulant eigenvalue, in which case `W` is not block-positive.
pub fn decompose(a: &AlphaVector, tol: &ToleranceConfig) -> Result<DecompositionCertificate> {
    let n = a.dim();
    let (k, gap) = asymmetry(a);
    if gap > tol.symmetry {
        return Err(Error::NotSymmetric {
            index: k,
            mirror: n - k,
            value: a.get(k as i64),
            mirror_value: a.get(-(k as i64)),
        });
    }
    let row: Vec<f64> = (0..n)
        .map(|k| if k == 0 { a.get(0) } else { a.get(k as i64) - 1.0 })
        .collect();
    // circulant eigenvalues λ_j = Σ_k row_k ω^{-jk}; real because α is symmetric
    let circulant_eigenvalues: Vec<f64> = dft_real(&row).iter().map(|z| z.re).collect();
    if let Some((index, &value)) = circulant_eigenvalues.iter().enumerate().find(|(_, &v)| v < -tol.psd) {
        return Err(Error::NegativeCirculantEigenvalue { index, value });
    }
    let p = circulant_part(a);
    let q = antisymmetric_part(a);
    let w = witness_from_alpha(a);
    let residual = crate::tensor::frobenius_norm((&(&w - &p) - &q.partial_transpose()).matrix());
    let cert = DecompositionCertificate {
        p,
        q,
        residual,
        circulant_eigenvalues,
    };
    verify_decomposition(&w, &cert, tol)?;
    Ok(cert)
}

/// Recheck a decomposition against `w` from its parts alone.
pub fn verify_decomposition(
    w: &BipartiteOperator,
    cert: &DecompositionCertificate,
    tol: &ToleranceConfig,
) -> Result<()> {
    if cert.p.dim() != w.dim() || cert.q.dim() != w.dim() {
        return Err(Error::Verification(
            "certificate dimension does not match the witness".into(),
        ));
    }
    let residual = crate::tensor::frobenius_norm((&(w - &cert.p) - &cert.q.partial_transpose()).matrix());
    if residual > tol.psd.max(1e-10) {
        return Err(Error::Verification(format!("residual {residual:e} exceeds tolerance")));
    }
    for (name, part) in [("P", &cert.p), ("Q", &cert.q)] {
        let min = part.min_eigenvalue(tol.hermitian)?;
        if min < -tol.psd {
            return Err(Error::Verification(format!("{name} has negative eigenvalue {min:e}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PptCertificate {
    pub k: usize,
    pub epsilon: f64,
    /// Unnormalized PPT operator.
    pub rho: BipartiteOperator,
    /// `tr(ρ W)`
    pub pairing: f64,
}

/// `n(εα_k + α_{n-k}/ε − α_k − α_{n-k} + Σα − (n−1))`. The last term vanishes
/// on the boundary. Meaningful for `k ≠ n/2`.
pub fn pairing_formula(a: &AlphaVector, k: usize, epsilon: f64) -> f64 {
    let n = a.dim() as f64;
    let (ak, akb) = (a.get(k as i64), a.get(-(k as i64)));
    n * (epsilon * ak + akb / epsilon - ak - akb + a.sum() - (n - 1.0))
}

/// Index maximizing `(√α_k − √α_{n-k})²`, oriented so that `α_k ≥ α_{n-k}`.
pub fn default_index(a: &AlphaVector) -> usize {
    let n = a.dim();
    let score = |k: usize| (a.get(k as i64).sqrt() - a.get(-(k as i64)).sqrt()).powi(2);
    let mut best = 1;
    for k in 1..n {
        let better = score(k) > score(best) + 1e-15;
        let tie_oriented = (score(k) - score(best)).abs() <= 1e-15
            && a.get(k as i64) > a.get(-(k as i64))
            && a.get(best as i64) <= a.get(-(best as i64));
        if better || tie_oriented {
            best = k;
        }
    }
    best
}

/// `sqrt(α_{n-k}/α_k)`, which minimizes the pairing; `0.5` when `α_{n-k} = 0`
/// since the infimum is then only approached as `ε → 0`.
pub fn default_epsilon(a: &AlphaVector, k: usize) -> f64 {
    let (ak, akb) = (a.get(k as i64), a.get(-(k as i64)));
    if akb > 0.0 {
        (akb / ak).sqrt()
    } else {
        0.5
    }
}

/// `Σ_{l≥1} coef_l B_l + nP⁺` where `B_l` is the block carrying `α_l` in `W`,
/// `coef_k = ε`, `coef_{n-k} = 1/ε`, and 1 otherwise. The self-paired index
/// `k = n/2` has no certificate and is rejected.
pub fn rho_epsilon(n: usize, k: usize, epsilon: f64) -> Result<BipartiteOperator> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    if 2 * k == n {
        return Err(Error::NoCertificateAtIndex(k));
    }
    let mut acc = &p_plus(n)? * n as f64;
    for l in 1..n {
        let coef = if l == k {
            epsilon
        } else if l == n - k {
            1.0 / epsilon
        } else {
            1.0
        };
        acc = &acc + &(&alpha_block(n, l)? * coef);
    }
    Ok(acc)
}

/// Build `ρ_ε` at index `k` (default [`default_index`]) and check that it is
/// PPT with negative pairing.
pub fn ppt_certificate(
    a: &AlphaVector,
    k: Option<usize>,
    epsilon: Option<f64>,
    tol: &ToleranceConfig,
) -> Result<PptCertificate> {
    let n = a.dim();
    let k = k.unwrap_or_else(|| default_index(a));
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let (ak, akb) = (a.get(k as i64), a.get(-(k as i64)));
    if (ak - akb).abs() <= tol.symmetry {
        return Err(Error::NoCertificateAtIndex(k));
    }
    if ak == 0.0 {
        return Err(Error::ZeroCoefficient(k));
    }
    let epsilon = epsilon.unwrap_or_else(|| default_epsilon(a, k));
    let rho = rho_epsilon(n, k, epsilon)?;
    let pairing = rho.pairing(&witness_from_alpha(a)).re;
    let cert = PptCertificate {
        k,
        epsilon,
        rho,
        pairing,
    };
    verify_ppt_state(&cert.rho, tol)?;
    let expected = pairing_formula(a, k, epsilon);
    if (pairing - expected).abs() > 1e-9 * (1.0 + expected.abs()) {
        return Err(Error::Verification(format!(
            "pairing {pairing} disagrees with closed form {expected}"
        )));
    }
    Ok(cert)
}

/// `ρ ≥ 0` and `ρ^Γ ≥ 0`.
pub fn verify_ppt_state(rho: &BipartiteOperator, tol: &ToleranceConfig) -> Result<()> {
    let min = rho.min_eigenvalue(tol.hermitian)?;
    if min < -tol.psd {
        return Err(Error::Verification(format!("rho has negative eigenvalue {min:e}")));
    }
    let min_pt = rho.partial_transpose().min_eigenvalue(tol.hermitian)?;
    if min_pt < -tol.psd {
        return Err(Error::Verification(format!("rho^Γ has negative eigenvalue {min_pt:e}")));
    }
    Ok(())
}

/// Open interval of `ε` with negative pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityWindow {
    pub lo: f64,
    /// `+∞` when `α_k = 0`.
    pub hi: f64,
    /// Set when the interval is the `α_k = 0` limit case.
    pub degenerate: bool,
}

impl NegativityWindow {
    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi || self.lo.is_nan() || self.hi.is_nan()
    }

    pub fn contains(&self, eps: f64) -> bool {
        eps > self.lo && eps < self.hi
    }
}

/// Roots of `α_k ε² + (s − α_k − α_{n-k}) ε + α_{n-k}` with
/// `s = Σα − (n−1)`. On the boundary they are `{1, α_{n-k}/α_k}`.
pub fn negativity_window(a: &AlphaVector, k: usize) -> Result<NegativityWindow> {
    let n = a.dim();
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let (ak, akb) = (a.get(k as i64), a.get(-(k as i64)));
    let s = (a.sum() - (n as f64 - 1.0)).max(0.0);
    let b = s - ak - akb;
    if ak == 0.0 {
        // linear: b ε + α_{n-k} < 0
        return Ok(if b < 0.0 {
            NegativityWindow {
                lo: akb / -b,
                hi: f64::INFINITY,
                degenerate: true,
            }
        } else {
            NegativityWindow {
                lo: 1.0,
                hi: 1.0,
                degenerate: true,
            }
        });
    }
    let disc = b * b - 4.0 * ak * akb;
    if disc <= 0.0 {
        let r = -b / (2.0 * ak);
        return Ok(NegativityWindow {
            lo: r,
            hi: r,
            degenerate: false,
        });
    }
    let sq = disc.sqrt();
    // stable pair of roots
    let q = -0.5 * (b - sq);
    let (r1, r2) = (q / ak, akb / q);
    Ok(NegativityWindow {
        lo: r1.min(r2),
        hi: r1.max(r2),
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Decomposition(DecompositionCertificate),
    Ppt(PptCertificate),
}

/// Decide decomposability with a certificate. A symmetric `α` yields a
/// decomposition. An asymmetric one yields `ρ_ε`. The gray zone (asymmetric
/// but no negative pairing) is reported as [`Error::GrayZone`].
pub fn certify(a: &AlphaVector, k: Option<usize>, epsilon: Option<f64>, tol: &ToleranceConfig) -> Result<Certificate> {
    let (_, gap) = asymmetry(a);
    if gap <= tol.symmetry {
        if k.is_some() || epsilon.is_some() {
            return Err(Error::NoCertificateAtIndex(k.unwrap_or(0)));
        }
        return decompose(a, tol).map(Certificate::Decomposition);
    }
    match ppt_certificate(a, k, epsilon, tol) {
        Ok(c) if c.pairing < -tol.psd => Ok(Certificate::Ppt(c)),
        Ok(_) => Err(Error::GrayZone { margin: gap }),
        Err(e) => Err(e),
    }
}

/// Recheck any certificate against `w` using only the certificate contents.
pub fn verify_certificate(w: &BipartiteOperator, cert: &Certificate, tol: &ToleranceConfig) -> Result<()> {
    match cert {
        Certificate::Decomposition(d) => verify_decomposition(w, d, tol),
        Certificate::Ppt(p) => {
            if p.rho.dim() != w.dim() {
                return Err(Error::Verification(
                    "certificate dimension does not match the witness".into(),
                ));
            }
            verify_ppt_state(&p.rho, tol)?;
            let pairing = p.rho.pairing(w).re;
            if (pairing - p.pairing).abs() > 1e-9 * (1.0 + pairing.abs()) {
                return Err(Error::Verification(format!(
                    "stored pairing {} but recomputed {pairing}",
                    p.pairing
                )));
            }
            if pairing >= -tol.psd {
                return Err(Error::Verification(format!("pairing {pairing:e} is not negative")));
            }
            Ok(())
        }
    }
}
