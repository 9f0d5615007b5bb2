//! Block-positivity and complete positivity of `W[α]`.
//!
//! Exact answers exist for `n = 2` and `n = 3`. For larger `n` a "yes" is
//! only issued from a sufficient condition (Weyl coefficients, or an explicit
//! decomposition); the see-saw minimizer can refute but never prove.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposability::{asymmetry, decompose};
use crate::error::{Error, Result};
use crate::tensor::{c64, hermitian_eigh, BipartiteOperator, ComplexMatrix, ComplexVector};
use crate::tolerance::ToleranceConfig;
use crate::witness::{alpha_to_c, witness_from_alpha, AlphaVector, SpectralCoefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trinary {
    Yes,
    No,
    Undetermined,
}

/// Which argument produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ExactN2,
    ExactN3,
    /// `α_0 ≥ n−1`: the Choi matrix is positive semidefinite.
    CompletePositivity,
    CyclicNecessary,
    WeylSufficient,
    DecomposableSplit,
    SeeSaw,
}

/// Product vectors `x, y` with `⟨x⊗y|W|x⊗y⟩ = value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductCertificate {
    pub x: Vec<c64>,
    pub y: Vec<c64>,
    pub value: f64,
}

impl ProductCertificate {
    fn new(x: &ComplexVector, y: &ComplexVector, value: f64) -> Self {
        Self {
            x: x.iter().copied().collect(),
            y: y.iter().copied().collect(),
            value,
        }
    }

    /// Recompute the expectation value against `w`.
    pub fn evaluate(&self, w: &BipartiteOperator) -> Result<f64> {
        let n = w.dim();
        if self.x.len() != n || self.y.len() != n {
            return Err(Error::Shape(format!(
                "product certificate has lengths {}, {} for n = {n}",
                self.x.len(),
                self.y.len()
            )));
        }
        let x = ComplexVector::from_column_slice(&self.x);
        let y = ComplexVector::from_column_slice(&self.y);
        let norm = x.norm_squared() * y.norm_squared();
        if norm == 0.0 {
            return Err(Error::Verification("product certificate has a zero vector".into()));
        }
        Ok(w.product_expectation(&x, &y) / norm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub block_positive: Trinary,
    pub cp: bool,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<ProductCertificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decomposable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimal: Option<bool>,
}

/// Coarse classification derived from a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessClass {
    CompletelyPositive,
    DecomposableWitness,
    IndecomposableWitness,
    /// Block-positive and not CP, decomposability unknown.
    Witness,
    NotBlockPositive,
    Undetermined,
}

impl PositivityVerdict {
    pub fn class(&self) -> WitnessClass {
        match (self.cp, self.block_positive, self.decomposable) {
            (true, _, _) => WitnessClass::CompletelyPositive,
            (_, Trinary::No, _) => WitnessClass::NotBlockPositive,
            (_, Trinary::Undetermined, _) => WitnessClass::Undetermined,
            (_, Trinary::Yes, Some(true)) => WitnessClass::DecomposableWitness,
            (_, Trinary::Yes, Some(false)) => WitnessClass::IndecomposableWitness,
            (_, Trinary::Yes, None) => WitnessClass::Witness,
        }
    }

    fn completely_positive(method: Method) -> Self {
        Self {
            block_positive: Trinary::Yes,
            cp: true,
            method,
            certificate: None,
            decomposable: Some(true),
            optimal: None,
        }
    }

    fn refuted(method: Method, certificate: Option<ProductCertificate>) -> Self {
        Self {
            block_positive: Trinary::No,
            cp: false,
            method,
            certificate,
            decomposable: None,
            optimal: None,
        }
    }
}

fn check_t(n: usize, t: &[f64]) -> Result<()> {
    if t.len() != n {
        return Err(Error::Shape(format!("t has length {}, expected {n}", t.len())));
    }
    if t.iter().any(|&v| v.is_nan() || v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidAlpha("t must be finite and nonnegative".into()));
    }
    if t.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidAlpha("t must not vanish".into()));
    }
    Ok(())
}

/// Denominator `D_i = (α_0+1)u_i + Σ_{k≥1} α_k u_{i+k}` in squared variables `u = t²`.
fn denominators(a: &AlphaVector, u: &[f64]) -> Vec<f64> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            let mut d = (a.get(0) + 1.0) * u[i];
            for k in 1..n {
                d += a.get(k as i64) * u[(i + k) % n];
            }
            d
        })
        .collect()
}

fn cyclic_value_u(a: &AlphaVector, u: &[f64]) -> f64 {
    denominators(a, u)
        .iter()
        .zip(u)
        .map(|(&d, &num)| match (num == 0.0, d == 0.0) {
            (true, _) => 0.0,
            (false, true) => f64::INFINITY,
            (false, false) => num / d,
        })
        .sum()
}

/// `Σ_i t_i² / ((α_0+1)t_i² + Σ_{k≥1} α_k t_{i+k}²)`.
///
/// `0/0` terms contribute nothing; a positive numerator over a zero
/// denominator yields `+∞`.
pub fn cyclic_lhs(a: &AlphaVector, t: &[f64]) -> Result<f64> {
    check_t(a.dim(), t)?;
    let u: Vec<f64> = t.iter().map(|v| v * v).collect();
    Ok(cyclic_value_u(a, &u))
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        cumsum += s;
        let candidate = (cumsum - 1.0) / (i as f64 + 1.0);
        if s - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn cyclic_gradient(a: &AlphaVector, u: &[f64]) -> Vec<f64> {
    const FLOOR: f64 = 1e-12;
    let n = a.dim();
    let d: Vec<f64> = denominators(a, u).into_iter().map(|x| x.max(FLOOR)).collect();
    (0..n)
        .map(|j| {
            // ∂D_i/∂u_j is α_0+1 when i = j, else α_{j-i}
            let mut g = 1.0 / d[j];
            for i in 0..n {
                let coef = if i == j {
                    a.get(0) + 1.0
                } else {
                    a.get(j as i64 - i as i64)
                };
                g -= u[i] * coef / (d[i] * d[i]);
            }
            g
        })
        .collect()
}

fn ascend(a: &AlphaVector, mut u: Vec<f64>, iterations: usize) -> (f64, Vec<f64>) {
    let mut value = cyclic_value_u(a, &u);
    let mut step = 0.5;
    for _ in 0..iterations {
        let g = cyclic_gradient(a, &u);
        let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !gnorm.is_finite() || gnorm < 1e-14 {
            break;
        }
        let mut improved = false;
        let mut s = step;
        while s > 1e-12 {
            let cand: Vec<f64> = u.iter().zip(&g).map(|(x, gi)| x + s * gi / gnorm).collect();
            let cand = project_simplex(&cand);
            let v = cyclic_value_u(a, &cand);
            if v > value {
                u = cand;
                value = v;
                improved = true;
                step = (s * 2.0).min(1.0);
                break;
            }
            s *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (value, u)
}

/// Result of [`cyclic_maximize`]: best value and its maximizer `t` (unit norm).
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicMaximum {
    pub value: f64,
    pub t: Vec<f64>,
}

/// Multi-start projected gradient ascent of [`cyclic_lhs`] over `t ≥ 0`,
/// `Σ t_i² = 1`. Corners, pairwise edges and the center are always tried,
/// followed by `restarts` random starts drawn from `seed`.
///
/// The result is evidence only: a value above 1 refutes positivity, a value
/// at most 1 does not prove it.
pub fn cyclic_maximize(a: &AlphaVector, restarts: usize, seed: u64) -> CyclicMaximum {
    let n = a.dim();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        starts.push(e);
        for j in i + 1..n {
            let mut e = vec![0.0; n];
            e[i] = 0.5;
            e[j] = 0.5;
            starts.push(e);
        }
    }
    starts.push(vec![1.0 / n as f64; n]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        starts.push(raw.into_iter().map(|x| x / total).collect());
    }
    let (value, u) = starts
        .into_iter()
        .map(|s| ascend(a, s, 300))
        .fold(
            (f64::NEG_INFINITY, vec![]),
            |best, cur| if cur.0 > best.0 { cur } else { best },
        );
    CyclicMaximum {
        value,
        t: u.iter().map(|x| x.sqrt()).collect(),
    }
}

/// Checks that need no optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryConditions {
    /// `Σ α_k ≥ n−1`
    pub sum_condition: bool,
    /// `0 ≤ α_0 < n−1`
    pub alpha0_condition: bool,
    /// `α_0 ≥ n−1`
    pub is_cp: bool,
}

impl NecessaryConditions {
    /// Both conditions for a witness that is not CP.
    pub fn witness_candidate(&self) -> bool {
        self.sum_condition && self.alpha0_condition
    }
}

pub fn necessary_conditions(a: &AlphaVector, tol: &ToleranceConfig) -> NecessaryConditions {
    let bound = a.dim() as f64 - 1.0;
    let is_cp = a.get(0) >= bound - tol.inequality;
    NecessaryConditions {
        sum_condition: a.sum() >= bound - tol.simplex,
        alpha0_condition: a.get(0) >= 0.0 && !is_cp,
        is_cp,
    }
}

/// The uniform product vector gives `⟨W⟩ = (Σα − (n−1))/n`.
fn uniform_certificate(a: &AlphaVector) -> ProductCertificate {
    let n = a.dim();
    let v = ComplexVector::from_element(n, c64::new(1.0 / (n as f64).sqrt(), 0.0));
    ProductCertificate::new(&v, &v, (a.sum() - (n as f64 - 1.0)) / n as f64)
}

fn see_saw_certificate(w: &BipartiteOperator, opts: &SeeSawOptions) -> Result<Option<ProductCertificate>> {
    let r = see_saw_min(w, opts)?;
    Ok((r.value < 0.0).then(|| ProductCertificate::new(&r.x, &r.y, r.value)))
}

/// Exact classification at `n = 2`.
pub fn classify_n2(a: &AlphaVector, tol: &ToleranceConfig) -> Result<PositivityVerdict> {
    if a.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: a.dim(),
        });
    }
    let nc = necessary_conditions(a, tol);
    if nc.is_cp {
        return Ok(PositivityVerdict::completely_positive(Method::ExactN2));
    }
    if !nc.sum_condition {
        return Ok(PositivityVerdict::refuted(
            Method::ExactN2,
            Some(uniform_certificate(a)),
        ));
    }
    Ok(PositivityVerdict {
        block_positive: Trinary::Yes,
        cp: false,
        method: Method::ExactN2,
        certificate: None,
        // every qubit witness is decomposable
        decomposable: Some(true),
        optimal: None,
    })
}

/// Exact classification at `n = 3` with `(a, b, c) = (α_0, α_1, α_2)`.
///
/// Block-positive iff `a+b+c ≥ 2` and, when `a ≤ 1`, `bc ≥ (1−a)²`.
/// A witness is indecomposable iff `4bc < (2−a)²`. The optimality flag is set
/// for boundary witnesses with `a ≤ 1`.
pub fn classify_n3(a: &AlphaVector, tol: &ToleranceConfig, see_saw: &SeeSawOptions) -> Result<PositivityVerdict> {
    if a.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            got: a.dim(),
        });
    }
    let nc = necessary_conditions(a, tol);
    if nc.is_cp {
        return Ok(PositivityVerdict::completely_positive(Method::ExactN3));
    }
    if !nc.sum_condition {
        return Ok(PositivityVerdict::refuted(
            Method::ExactN3,
            Some(uniform_certificate(a)),
        ));
    }
    let (x, b, c) = (a.get(0), a.get(1), a.get(2));
    let eps = tol.inequality;
    if x <= 1.0 && b * c < (1.0 - x).powi(2) - eps {
        let cert = see_saw_certificate(&witness_from_alpha(a), see_saw)?;
        return Ok(PositivityVerdict::refuted(Method::ExactN3, cert));
    }
    let indecomposable = 4.0 * b * c < (2.0 - x).powi(2) - eps;
    Ok(PositivityVerdict {
        block_positive: Trinary::Yes,
        cp: false,
        method: Method::ExactN3,
        certificate: None,
        decomposable: Some(!indecomposable),
        optimal: Some(a.is_boundary(tol.simplex) && x <= 1.0 + eps),
    })
}

/// Sufficient block-positivity test on the Weyl side: `c_0 = n−1`,
/// `|c_k| ≤ 1` for `k ≥ 1` and `|off_column| ≤ 1`.
pub fn weyl_sufficient_check(s: &SpectralCoefficients, tol: f64) -> bool {
    let n = s.dim() as f64;
    (s.c()[0].re - (n - 1.0)).abs() <= tol
        && s.max_nontrivial_magnitude() <= 1.0 + tol
        && s.off_column().abs() <= 1.0 + tol
}

/// Options shared by the general classifier.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassifyOptions {
    pub tol: ToleranceConfig,
    pub see_saw: SeeSawOptions,
}

/// Classify `W[α]` for any `n`.
pub fn classify(a: &AlphaVector, opts: &ClassifyOptions) -> Result<PositivityVerdict> {
    let tol = &opts.tol;
    match a.dim() {
        2 => return classify_n2(a, tol),
        3 => return classify_n3(a, tol, &opts.see_saw),
        _ => {}
    }
    let nc = necessary_conditions(a, tol);
    if nc.is_cp {
        return Ok(PositivityVerdict::completely_positive(Method::CompletePositivity));
    }
    if !nc.sum_condition {
        return Ok(PositivityVerdict::refuted(
            Method::CyclicNecessary,
            Some(uniform_certificate(a)),
        ));
    }
    let symmetric = asymmetry(a).1 <= tol.symmetry;
    let boundary = a.is_boundary(tol.simplex);
    if weyl_sufficient_check(&alpha_to_c(a), tol.simplex) {
        return Ok(PositivityVerdict {
            block_positive: Trinary::Yes,
            cp: false,
            method: Method::WeylSufficient,
            certificate: None,
            decomposable: boundary.then_some(symmetric),
            optimal: None,
        });
    }
    if symmetric && decompose(a, tol).is_ok() {
        return Ok(PositivityVerdict {
            block_positive: Trinary::Yes,
            cp: false,
            method: Method::DecomposableSplit,
            certificate: None,
            decomposable: Some(true),
            optimal: None,
        });
    }
    let r = see_saw_min(&witness_from_alpha(a), &opts.see_saw)?;
    let certificate = Some(ProductCertificate::new(&r.x, &r.y, r.value));
    if r.value < -tol.block_positive {
        Ok(PositivityVerdict::refuted(Method::SeeSaw, certificate))
    } else {
        Ok(PositivityVerdict {
            block_positive: Trinary::Undetermined,
            cp: false,
            method: Method::SeeSaw,
            certificate,
            decomposable: None,
            optimal: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeSawOptions {
    pub restarts: usize,
    pub iterations: usize,
    /// Stop a run once one sweep improves the value by less than this.
    pub improvement: f64,
    pub seed: u64,
}

impl Default for SeeSawOptions {
    fn default() -> Self {
        Self {
            restarts: 24,
            iterations: 200,
            improvement: 1e-12,
            seed: 0,
        }
    }
}

/// Best run of [`see_saw_min`]. `trace` holds the value after every half-step
/// of that run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeeSawResult {
    pub value: f64,
    pub x: ComplexVector,
    pub y: ComplexVector,
    pub trace: Vec<f64>,
}

/// `M[a,b] = Σ_{jk} conj(y_j) W[(a,j),(b,k)] y_k`
fn contract_second(w: &ComplexMatrix, n: usize, y: &ComplexVector) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |a, b| {
        let mut acc = c64::new(0.0, 0.0);
        for j in 0..n {
            let yj = y[j].conj();
            for k in 0..n {
                acc += yj * w[(a * n + j, b * n + k)] * y[k];
            }
        }
        acc
    })
}

/// `M[j,k] = Σ_{ab} conj(x_a) W[(a,j),(b,k)] x_b`
fn contract_first(w: &ComplexMatrix, n: usize, x: &ComplexVector) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |j, k| {
        let mut acc = c64::new(0.0, 0.0);
        for a in 0..n {
            let xa = x[a].conj();
            for b in 0..n {
                acc += xa * w[(a * n + j, b * n + k)] * x[b];
            }
        }
        acc
    })
}

fn min_eigenpair(m: &ComplexMatrix) -> Result<(f64, ComplexVector)> {
    // contracted from a Hermitian operator, so only roundoff asymmetry remains
    let (values, vectors) = hermitian_eigh(m, 1e-8)?;
    Ok((values[0], vectors.column(0).into_owned()))
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    let v = ComplexVector::from_fn(n, |_, _| {
        c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v / c64::new(norm, 0.0)
}

fn see_saw_run(w: &ComplexMatrix, n: usize, opts: &SeeSawOptions, restart: usize) -> Result<SeeSawResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let mut x = random_unit(&mut rng, n);
    let mut y = random_unit(&mut rng, n);
    let mut trace = Vec::with_capacity(2 * opts.iterations);
    let mut value = f64::INFINITY;
    for _ in 0..opts.iterations {
        let (_, nx) = min_eigenpair(&contract_second(w, n, &y))?;
        x = nx;
        let my = contract_first(w, n, &x);
        // value after the x-step, at the old y
        let vx = (y.adjoint() * &my * &y)[(0, 0)].re;
        let (vy, ny) = min_eigenpair(&my)?;
        trace.push(vx);
        trace.push(vy);
        y = ny;
        let done = value - vy < opts.improvement;
        value = value.min(vy);
        if done {
            break;
        }
    }
    Ok(SeeSawResult { value, x, y, trace })
}

/// Alternating minimization of `⟨x⊗y|W|x⊗y⟩` over unit product vectors.
///
/// Restarts run in parallel with per-restart random streams, so the result
/// depends only on `opts`. Ties go to the lowest restart index.
pub fn see_saw_min(w: &BipartiteOperator, opts: &SeeSawOptions) -> Result<SeeSawResult> {
    let n = w.dim();
    // validates Hermiticity once up front
    w.min_eigenvalue(1e-10)?;
    let runs: Vec<SeeSawResult> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|r| see_saw_run(w.matrix(), n, opts, r))
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|best, cur| if cur.value < best.value { cur } else { best })
        .expect("at least one restart");
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{witness_from_torus, NamedWitness};
    use std::f64::consts::PI;

    fn alpha(v: &[f64]) -> AlphaVector {
        AlphaVector::new(v.to_vec()).unwrap()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn cyclic_lhs_examples() {
        let a = alpha(&[0.0, 1.0, 1.0]);
        assert!((cyclic_lhs(&a, &[1.0, 1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((cyclic_lhs(&a, &[1.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        let a2 = alpha(&[0.0, 1.0]);
        assert!((cyclic_lhs(&a2, &[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(cyclic_lhs(&a, &[0.0, 0.0, 0.0]).is_err());
        assert!(cyclic_lhs(&a, &[1.0, -1.0, 0.0]).is_err());
    }

    #[test]
    fn cyclic_lhs_zero_denominator() {
        // α_0 + 1 ≥ 1 keeps D_i > 0 whenever t_i > 0, so only 0/0 can occur
        let a = alpha(&[0.0, 0.0, 0.0]);
        assert_eq!(cyclic_lhs(&a, &[1.0, 0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn cyclic_maximize_examples() {
        for v in [[0.0, 1.0, 1.0], [1.0, 1.0, 0.0]] {
            let m = cyclic_maximize(&alpha(&v), 16, 1);
            assert!((m.value - 1.0).abs() < 1e-6, "{v:?}: {}", m.value);
        }
        let m = cyclic_maximize(&alpha(&[0.6, 1.35, 0.05]), 16, 1);
        assert!(m.value > 1.0 + 1e-6);
        assert!((cyclic_lhs(&alpha(&[0.6, 1.35, 0.05]), &m.t).unwrap() - m.value).abs() < 1e-12);
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        let p = project_simplex(&[2.0, 0.0, -1.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn necessary_condition_examples() {
        let t = tol();
        assert!(necessary_conditions(&alpha(&[3.0, 0.0, 0.0]), &t).is_cp);
        let r = necessary_conditions(&alpha(&[0.0, 1.0, 1.0]), &t);
        assert!(r.witness_candidate() && !r.is_cp);
        assert!(!necessary_conditions(&alpha(&[0.0, 0.5, 0.5]), &t).sum_condition);
    }

    #[test]
    fn cp_matches_choi_psd() {
        for v in [[3.0, 0.0, 0.0], [2.0, 0.1, 0.0], [1.9, 1.0, 1.0], [0.0, 1.0, 1.0]] {
            let a = alpha(&v);
            let psd = witness_from_alpha(&a).min_eigenvalue(1e-10).unwrap() >= -1e-10;
            assert_eq!(necessary_conditions(&a, &tol()).is_cp, psd, "{v:?}");
        }
    }

    #[test]
    fn n2_examples() {
        let v = classify_n2(&alpha(&[0.5, 0.5]), &tol()).unwrap();
        assert_eq!(v.class(), WitnessClass::DecomposableWitness);
        let v = classify_n2(&alpha(&[0.2, 0.3]), &tol()).unwrap();
        assert_eq!(v.block_positive, Trinary::No);
        let cert = v.certificate.unwrap();
        assert!((cert.value + 0.25).abs() < 1e-15);
        assert!((cert.evaluate(&witness_from_alpha(&alpha(&[0.2, 0.3]))).unwrap() + 0.25).abs() < 1e-14);
        assert!(classify_n2(&alpha(&[1.0, 0.0]), &tol()).unwrap().cp);
        assert!(matches!(
            classify_n2(&alpha(&[0.0, 1.0, 1.0]), &tol()),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn n3_examples() {
        let opts = SeeSawOptions::default();
        let v = classify_n3(&alpha(&[1.0, 0.8, 0.2]), &tol(), &opts).unwrap();
        assert_eq!(v.class(), WitnessClass::IndecomposableWitness);
        assert_eq!(v.optimal, Some(true));
        let v = classify_n3(&alpha(&[0.0, 1.0, 1.0]), &tol(), &opts).unwrap();
        assert_eq!(v.class(), WitnessClass::DecomposableWitness);
        let v = classify_n3(&alpha(&[0.6, 1.35, 0.05]), &tol(), &opts).unwrap();
        assert_eq!(v.block_positive, Trinary::No);
        assert!(v.certificate.unwrap().value < -1e-3);
        assert!(classify_n3(&alpha(&[2.0, 0.0, 0.0]), &tol(), &opts).unwrap().cp);
    }

    #[test]
    fn see_saw_examples() {
        let opts = SeeSawOptions::default();
        let id = BipartiteOperator::identity(3);
        assert!((see_saw_min(&id, &opts).unwrap().value - 1.0).abs() < 1e-12);
        let red = witness_from_alpha(&alpha(&[0.0, 1.0, 1.0]));
        assert!(see_saw_min(&red, &opts).unwrap().value.abs() < 1e-8);
        let bad = witness_from_alpha(&alpha(&[0.6, 1.35, 0.05]));
        assert!(see_saw_min(&bad, &opts).unwrap().value < -1e-3);
    }

    #[test]
    fn see_saw_is_deterministic_and_monotone() {
        let w = witness_from_alpha(&alpha(&[0.3, 0.2, 1.5, 0.4]));
        let opts = SeeSawOptions {
            seed: 9,
            ..Default::default()
        };
        let a = see_saw_min(&w, &opts).unwrap();
        let b = see_saw_min(&w, &opts).unwrap();
        assert_eq!(a, b);
        for pair in a.trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "{pair:?}");
        }
    }

    #[test]
    fn weyl_check_examples() {
        let torus = witness_from_torus(5, &[0.4, 2.2], None).unwrap();
        assert!(weyl_sufficient_check(&torus.coefficients(), 1e-9));
        let big = SpectralCoefficients::for_witness(vec![c64::new(2.0, 0.0), c64::new(1.5, 0.0), c64::new(1.5, 0.0)])
            .unwrap();
        assert!(!weyl_sufficient_check(&big, 1e-9));
        let red = alpha_to_c(&NamedWitness::Reduction.alpha(3).unwrap());
        assert!(weyl_sufficient_check(&red, 1e-9));
    }

    #[test]
    fn general_classifier() {
        let opts = ClassifyOptions::default();
        let torus = witness_from_torus(5, &[0.4, 2.2], None).unwrap();
        let v = classify(torus.alpha(), &opts).unwrap();
        assert_eq!(v.method, Method::WeylSufficient);
        assert_eq!(v.class(), WitnessClass::IndecomposableWitness);

        let sym = witness_from_torus(4, &[PI], Some(1)).unwrap();
        assert_eq!(
            classify(sym.alpha(), &opts).unwrap().class(),
            WitnessClass::DecomposableWitness
        );

        let under = alpha(&[0.0, 0.5, 0.5, 0.5]);
        let v = classify(&under, &opts).unwrap();
        assert_eq!(v.method, Method::CyclicNecessary);
        assert_eq!(v.block_positive, Trinary::No);

        // far from the torus: one large off-diagonal coefficient and α_0 = 0
        let off = alpha(&[0.0, 3.0, 0.0, 0.0]);
        let v = classify(&off, &opts).unwrap();
        assert_eq!(v.block_positive, Trinary::No);
        assert!(v.certificate.unwrap().value < -1e-3);

        let cp = alpha(&[3.0, 0.0, 0.0, 0.0]);
        assert_eq!(classify(&cp, &opts).unwrap().class(), WitnessClass::CompletelyPositive);
    }

    #[test]
    fn verdict_json_shape() {
        let v = classify_n3(&alpha(&[1.0, 0.8, 0.2]), &tol(), &SeeSawOptions::default()).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["block_positive"], "yes");
        assert_eq!(json["cp"], false);
        assert_eq!(json["decomposable"], false);
        assert_eq!(json["method"], "ExactN3");
    }
}
