//! The witness family `W[α_0, …, α_{n-1}]` and its parameterizations.
//!
//! `W[α]` has `α_{i-j}` on the diagonal entry `|i⟩⊗|j⟩` and `-1` on every
//! off-diagonal entry `|i i⟩⟨j j|`. In the Bell basis this is
//! `(α_0+1)Π_0 + Σ_{k≥1} α_k Π_{n-k} − nP⁺`. The coefficient `α_k` sits on
//! `Π_{n-k}` because `Π_k` is supported on `e_j ⊗ e_{j+k}`. With this
//! orientation the Choi map and the Weyl expansion below reproduce the same
//! matrix entry for entry.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{c64, idft, kron, BipartiteOperator, ComplexMatrix, ONE};
use crate::weyl::{flip, p_plus, pi_block, weyl_pair};

/// Real coefficients `(α_0, …, α_{n-1})`, all nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AlphaVector {
    values: Vec<f64>,
}

impl AlphaVector {
    /// The coefficient of `nP⁺` is pinned for the witness family.
    pub const BETA: f64 = -1.0;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Dimension(values.len()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidAlpha(format!("alpha[{i}] = {v} is not finite")));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(Error::NegativeAlpha { index, value });
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `α_{k mod n}`.
    pub fn get(&self, k: i64) -> f64 {
        self.values[k.rem_euclid(self.dim() as i64) as usize]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ α_k = n − 1` within `tol`.
    pub fn is_boundary(&self, tol: f64) -> bool {
        (self.sum() - (self.dim() as f64 - 1.0)).abs() <= tol
    }
}

impl TryFrom<Vec<f64>> for AlphaVector {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Off-column Weyl coefficient `c_{kl}`, `l ≥ 1`, that reproduces `−nP⁺`.
pub const WITNESS_OFF_COLUMN: f64 = -1.0;

/// Weyl-side description: `c = (c_{00}, c_{10}, …, c_{n-1,0})` plus the
/// constant shared by every column `l ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    c: Vec<c64>,
    off_column: f64,
}

impl SpectralCoefficients {
    /// Validates `c_0 ∈ ℝ` and `c_k = conj(c_{n-k})`.
    pub fn new(c: Vec<c64>, off_column: f64) -> Result<Self> {
        let n = c.len();
        if n < 2 {
            return Err(Error::Dimension(n));
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || !off_column.is_finite() {
            return Err(Error::InvalidCoefficients("non-finite entry".into()));
        }
        let scale = c.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let tol = 1e-12 * scale;
        if c[0].im.abs() > tol {
            return Err(Error::InvalidCoefficients(format!("c_0 = {} is not real", c[0])));
        }
        for k in 1..n {
            let gap = (c[k] - c[n - k].conj()).norm();
            if gap > tol {
                return Err(Error::InvalidCoefficients(format!(
                    "conjugate symmetry violated: c_{k} = {} but c_{} = {}",
                    c[k],
                    n - k,
                    c[n - k]
                )));
            }
        }
        Ok(Self { c, off_column })
    }

    /// Coefficients of a member of the witness family (`off_column = −1`).
    pub fn for_witness(c: Vec<c64>) -> Result<Self> {
        Self::new(c, WITNESS_OFF_COLUMN)
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self) -> &[c64] {
        &self.c
    }

    pub fn off_column(&self) -> f64 {
        self.off_column
    }

    /// `max_{k≥1} |c_k|`.
    pub fn max_nontrivial_magnitude(&self) -> f64 {
        self.c[1..].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `c_0 = n−1` and `|c_k| = 1` for every `k ≥ 1`.
    pub fn is_torus_class(&self, tol: f64) -> bool {
        let n = self.dim() as f64;
        (self.c[0].re - (n - 1.0)).abs() <= tol && self.c[1..].iter().all(|z| (z.norm() - 1.0).abs() <= tol)
    }
}

/// Where a witness record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromAlpha,
    FromC,
    FromTorus,
    FromOrthogonal,
    Named,
}

/// An α-vector together with its assembled operator.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRecord {
    alpha: AlphaVector,
    matrix: BipartiteOperator,
    provenance: Provenance,
    phases: Option<Vec<f64>>,
    sign: Option<i8>,
}

impl WitnessRecord {
    pub fn new(alpha: AlphaVector, provenance: Provenance) -> Self {
        let matrix = witness_from_alpha(&alpha);
        Self {
            alpha,
            matrix,
            provenance,
            phases: None,
            sign: None,
        }
    }

    pub(crate) fn with_torus(mut self, phases: Vec<f64>, sign: Option<i8>) -> Self {
        self.phases = Some(phases);
        self.sign = sign;
        self
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn alpha(&self) -> &AlphaVector {
        &self.alpha
    }

    pub fn matrix(&self) -> &BipartiteOperator {
        &self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn phases(&self) -> Option<&[f64]> {
        self.phases.as_deref()
    }

    pub fn sign(&self) -> Option<i8> {
        self.sign
    }

    pub fn coefficients(&self) -> SpectralCoefficients {
        alpha_to_c(&self.alpha)
    }
}

/// Entrywise assembly of `W[α]`.
pub fn witness_from_alpha(a: &AlphaVector) -> BipartiteOperator {
    let n = a.dim();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + j, i * n + j)] = c64::new(a.get(i as i64 - j as i64), 0.0);
            if i != j {
                m[(i * n + i, j * n + j)] = -ONE;
            }
        }
    }
    BipartiteOperator::new(n, m).expect("dimension validated by AlphaVector")
}

/// The projector carrying `α_k` in `W[α]`, i.e. `Π_{n-k}`.
pub fn alpha_block(n: usize, k: usize) -> Result<BipartiteOperator> {
    pi_block(n, (n - k % n) % n)
}

/// Spectral-resolution builder `(α_0+1)Π_0 + Σ_{k≥1} α_k Π_{n-k} + β n P⁺`
/// with arbitrary real coefficients and free `β`. Used to cross-check the
/// entrywise assembly.
#[doc(hidden)]
pub fn bell_diagonal_operator(alpha: &[f64], beta: f64) -> Result<BipartiteOperator> {
    let n = alpha.len();
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    let mut acc = &alpha_block(n, 0)? * (alpha[0] + 1.0);
    for (k, &a) in alpha.iter().enumerate().skip(1) {
        acc = &acc + &(&alpha_block(n, k)? * a);
    }
    Ok(&acc + &(&p_plus(n)? * (beta * n as f64)))
}

/// Closed-form spectrum of `W[α]`, ascending:
/// `α_0+1−n` once, `α_0+1` with multiplicity `n−1`, each `α_k` (`k ≥ 1`) `n` times.
pub fn closed_form_spectrum(a: &AlphaVector) -> Vec<f64> {
    let n = a.dim();
    let mut values = Vec::with_capacity(n * n);
    values.push(a.get(0) + 1.0 - n as f64);
    values.extend(std::iter::repeat_n(a.get(0) + 1.0, n - 1));
    for &v in &a.values()[1..] {
        values.extend(std::iter::repeat_n(v, n));
    }
    values.sort_by(f64::total_cmp);
    values
}

/// `c_k = Σ_l ω^{-kl} α_l`.
pub fn alpha_to_c(a: &AlphaVector) -> SpectralCoefficients {
    let c = crate::tensor::dft_real(a.values());
    SpectralCoefficients::for_witness(c).expect("DFT of a real vector is conjugate-symmetric")
}

/// Inverse transform, validated to a real nonnegative vector. Roundoff
/// negatives above `-clamp` are set to zero.
pub fn c_to_alpha(s: &SpectralCoefficients, clamp: f64) -> Result<AlphaVector> {
    let raw = idft(s.c());
    let scale = s.c().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut values = Vec::with_capacity(raw.len());
    for (index, z) in raw.iter().enumerate() {
        if z.im.abs() > 1e-12 * scale {
            return Err(Error::InvalidCoefficients(format!(
                "inverse transform has imaginary part {:e} at index {index}",
                z.im
            )));
        }
        let value = if z.re < 0.0 && z.re > -clamp { 0.0 } else { z.re };
        if value < 0.0 {
            return Err(Error::NegativeAlpha { index, value });
        }
        values.push(value);
    }
    AlphaVector::new(values)
}

/// Weyl-form assembly `(1/n) Σ_{kl} c_{kl} U_{kl} ⊗ U_{-k,l}` with
/// `c_{k0} = c_k` and `c_{kl} = off_column` for `l ≥ 1`.
pub fn witness_from_c(s: &SpectralCoefficients) -> Result<BipartiteOperator> {
    let n = s.dim();
    let mut acc = ComplexMatrix::zeros(n * n, n * n);
    for k in 0..n as i64 {
        for l in 0..n as i64 {
            let coef = if l == 0 {
                s.c()[k as usize]
            } else {
                c64::new(s.off_column(), 0.0)
            };
            acc += weyl_pair(n, k, l)? * coef;
        }
    }
    BipartiteOperator::new(n, acc / c64::new(n as f64, 0.0))
}

/// Number of free torus phases, `⌊(n−1)/2⌋`.
pub fn torus_phase_count(n: usize) -> usize {
    (n - 1) / 2
}

/// `c = (n−1, e^{iφ_1}, …, e^{iφ_m}, [sign,] e^{-iφ_m}, …, e^{-iφ_1})`.
pub fn torus_coefficients(n: usize, phases: &[f64], sign: Option<i8>) -> Result<SpectralCoefficients> {
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    let m = torus_phase_count(n);
    if phases.len() != m {
        return Err(Error::InvalidTorus(format!(
            "n = {n} needs exactly {m} phase(s), got {}",
            phases.len()
        )));
    }
    if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidTorus(format!("phase {p} is not finite")));
    }
    let even = n.is_multiple_of(2);
    match (even, sign) {
        (true, None) => return Err(Error::InvalidTorus(format!("even n = {n} requires a sign of ±1"))),
        (false, Some(_)) => return Err(Error::InvalidTorus(format!("odd n = {n} takes no sign"))),
        (true, Some(s)) if s != 1 && s != -1 => {
            return Err(Error::InvalidTorus(format!("sign must be +1 or -1, got {s}")))
        }
        _ => {}
    }
    let mut c = vec![c64::new(0.0, 0.0); n];
    c[0] = c64::new(n as f64 - 1.0, 0.0);
    for (j, &phi) in phases.iter().enumerate() {
        let z = c64::from_polar(1.0, phi);
        c[j + 1] = z;
        c[n - 1 - j] = z.conj();
    }
    if let Some(s) = sign {
        c[n / 2] = c64::new(f64::from(s), 0.0);
    }
    SpectralCoefficients::for_witness(c)
}

/// Torus member with the given phases (and, for even `n`, the sign of
/// `c_{n/2}`). Phases are stored reduced to `[0, 2π)`.
pub fn witness_from_torus(n: usize, phases: &[f64], sign: Option<i8>) -> Result<WitnessRecord> {
    let s = torus_coefficients(n, phases, sign)?;
    let alpha = c_to_alpha(&s, 1e-12)?;
    let reduced = phases.iter().map(|p| p.rem_euclid(2.0 * PI)).collect();
    Ok(WitnessRecord::new(alpha, Provenance::FromTorus).with_torus(reduced, sign))
}

/// `Λ(ρ)` for the map with `Λ(E_ii) = Σ_j α_{i-j} E_jj` and `Λ(E_ij) = −E_ij`.
pub fn choi_map_apply(a: &AlphaVector, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::Shape(format!(
            "map acts on {n}x{n} matrices, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let mut out = -rho.clone();
    for j in 0..n {
        let diag: c64 = (0..n).map(|i| rho[(i, i)] * a.get(i as i64 - j as i64)).sum();
        out[(j, j)] = diag;
    }
    Ok(out)
}

/// `Σ_{ij} E_ij ⊗ Φ(E_ij)` for an arbitrary linear map `Φ` on `n×n` matrices.
pub fn choi_operator<F>(n: usize, map: F) -> Result<BipartiteOperator>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let mut acc = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let e = crate::tensor::matrix_unit(n, i, j);
            acc += kron(&e, &map(&e)?);
        }
    }
    BipartiteOperator::new(n, acc)
}

pub fn choi_matrix(a: &AlphaVector) -> BipartiteOperator {
    choi_operator(a.dim(), |e| choi_map_apply(a, e)).expect("shapes agree by construction")
}

/// Dual witness `W[α_0, α_{n-1}, …, α_1]`.
pub fn dual_witness(a: &AlphaVector) -> AlphaVector {
    let n = a.dim() as i64;
    let values = (0..n).map(|k| a.get(-k)).collect();
    AlphaVector::new(values).expect("permutation of a valid vector")
}

/// `F W F`.
pub fn flip_conjugate(w: &BipartiteOperator) -> BipartiteOperator {
    let f = flip(w.dim()).expect("dimension validated by operator");
    let m = f.matrix() * w.matrix() * f.matrix();
    BipartiteOperator::new(w.dim(), m).expect("same shape")
}

/// Witnesses known by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedWitness {
    /// `(0, 1, …, 1)`, the reduction map.
    Reduction,
    /// `(1, 1, 0)` at n = 3.
    ChoiI,
    /// `(1, 0, 1)` at n = 3.
    ChoiII,
    /// `I⊗I − nP⁺`; same coefficients as [`NamedWitness::Reduction`].
    WPrime,
    /// `α_0 = n−k`, `α_1..α_{k-1} = 1`, the rest 0, for `2 ≤ k ≤ n−2`.
    /// Outside the torus class.
    NonTorus(usize),
}

impl NamedWitness {
    pub fn alpha(self, n: usize) -> Result<AlphaVector> {
        if n < 2 {
            return Err(Error::Dimension(n));
        }
        match self {
            NamedWitness::Reduction | NamedWitness::WPrime => {
                let mut v = vec![1.0; n];
                v[0] = 0.0;
                AlphaVector::new(v)
            }
            NamedWitness::ChoiI | NamedWitness::ChoiII if n != 3 => Err(Error::InvalidAlpha(format!(
                "the Choi witnesses are defined for n = 3, got n = {n}"
            ))),
            NamedWitness::ChoiI => AlphaVector::new(vec![1.0, 1.0, 0.0]),
            NamedWitness::ChoiII => AlphaVector::new(vec![1.0, 0.0, 1.0]),
            NamedWitness::NonTorus(k) => {
                if k < 2 || k + 2 > n {
                    return Err(Error::InvalidAlpha(format!(
                        "non-torus family needs 2 <= k <= n-2, got k = {k}, n = {n}"
                    )));
                }
                let mut v = vec![0.0; n];
                v[0] = (n - k) as f64;
                for x in v.iter_mut().take(k).skip(1) {
                    *x = 1.0;
                }
                AlphaVector::new(v)
            }
        }
    }
}

impl FromStr for NamedWitness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "reduction" => Ok(Self::Reduction),
            "choi-i" => Ok(Self::ChoiI),
            "choi-ii" => Ok(Self::ChoiII),
            "wprime" => Ok(Self::WPrime),
            other => {
                if let Some(k) = other.strip_prefix("non-torus:") {
                    let k = k
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad k in named witness {s:?}")))?;
                    Ok(Self::NonTorus(k))
                } else {
                    Err(Error::Parse(format!(
                        "unknown named witness {s:?} (expected reduction, choi-I, choi-II, wprime, non-torus:K)"
                    )))
                }
            }
        }
    }
}
