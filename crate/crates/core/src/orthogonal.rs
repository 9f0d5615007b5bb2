//! Profiles `a_{ij}` generated by orthogonal matrices.
//!
//! With `F` the `n × (n−1)` matrix whose column `α` is the diagonal of the
//! traceless basis element `F_α`, every orthogonal `R` gives
//! `a = (n−1)/n · J + F R Fᵀ`. The result is nonnegative with row and column sums
//! `n−1`, and satisfies the Gram condition `a aᵀ = I + (n−2) J`. Circulant
//! profiles in this family are exactly the torus witnesses.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::positivity::{see_saw_min, SeeSawOptions};
use crate::tensor::{c64, BipartiteOperator, ComplexMatrix};
use crate::tolerance::ToleranceConfig;
use crate::witness::{torus_phase_count, witness_from_torus, AlphaVector, Provenance, WitnessRecord};

/// Real orthogonal matrix of size `n−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMatrix {
    m: DMatrix<f64>,
}

impl OrthogonalMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Shape(format!(
                "orthogonal matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let dev = (&m * m.transpose() - DMatrix::identity(m.nrows(), m.nrows())).amax();
        if dev > 1e-10 {
            return Err(Error::NotOrthogonal(dev));
        }
        Ok(Self { m })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            m: DMatrix::identity(size, size),
        }
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }
}

impl std::ops::Neg for OrthogonalMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        Self { m: -self.m }
    }
}

/// Nonnegative `n × n` matrix with row and column sums `n−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticProfile {
    a: DMatrix<f64>,
}

impl StochasticProfile {
    pub fn new(a: DMatrix<f64>, tol: &ToleranceConfig) -> Result<Self> {
        let n = a.nrows();
        if !a.is_square() {
            return Err(Error::Shape(format!("profile must be square, got {}x{}", n, a.ncols())));
        }
        if n < 2 {
            return Err(Error::Dimension(n));
        }
        if let Some(v) = a.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile(format!("entry {v} is not finite")));
        }
        let floor = 1e-12_f64.max(tol.clamp);
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] < -floor {
                    return Err(Error::InvalidProfile(format!(
                        "a[{i}][{j}] = {:e} is negative",
                        a[(i, j)]
                    )));
                }
            }
        }
        let target = n as f64 - 1.0;
        let sum_tol = 1e-10_f64.max(tol.simplex);
        for i in 0..n {
            let row: f64 = a.row(i).sum();
            let col: f64 = a.column(i).sum();
            if (row - target).abs() > sum_tol || (col - target).abs() > sum_tol {
                return Err(Error::InvalidProfile(format!(
                    "row/column {i} sums are {row}, {col}; expected {target}"
                )));
            }
        }
        Ok(Self { a })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// `(max |a_{ij} − a_{i+1,j+1}|, row, col)` over all cyclic diagonals.
    pub fn circulant_deviation(&self) -> (f64, usize, usize) {
        let n = self.dim();
        let mut worst = (0.0, 0, 0);
        for i in 0..n {
            for j in 0..n {
                let d = (self.a[(i, j)] - self.a[((i + 1) % n, (j + 1) % n)]).abs();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    pub fn is_circulant(&self, tol: f64) -> bool {
        self.circulant_deviation().0 <= tol
    }
}

/// Diagonal traceless matrices `F_ℓ = (Σ_{k<ℓ} E_kk − ℓ E_ℓℓ)/√(ℓ(ℓ+1))`, `ℓ = 1..n−1`.
pub fn f_matrices(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    let f = f_diagonals(n);
    Ok((0..n - 1)
        .map(|l| ComplexMatrix::from_diagonal(&f.column(l).map(|x| c64::new(x, 0.0))))
        .collect())
}

/// `F[i, α] = ⟨e_i|F_{α+1}|e_i⟩`.
fn f_diagonals(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n - 1, |i, col| {
        let l = col + 1;
        let norm = ((l * (l + 1)) as f64).sqrt();
        match i.cmp(&l) {
            std::cmp::Ordering::Less => 1.0 / norm,
            std::cmp::Ordering::Equal => -(l as f64) / norm,
            std::cmp::Ordering::Greater => 0.0,
        }
    })
}

pub fn profile_from_orthogonal(r: &OrthogonalMatrix) -> Result<StochasticProfile> {
    let n = r.size() + 1;
    let f = f_diagonals(n);
    let a = DMatrix::from_element(n, n, (n as f64 - 1.0) / n as f64) + &f * r.matrix() * f.transpose();
    // roundoff can leave entries like -1e-17 where the exact value is zero
    let a = a.map(|x| if x < 0.0 && x > -1e-12 { 0.0 } else { x });
    StochasticProfile::new(a, &ToleranceConfig::default())
}

/// Inverse of [`profile_from_orthogonal`]: `R = Fᵀ a F`. Fails unless the
/// result is orthogonal, i.e. unless `a` satisfies the Gram condition.
pub fn orthogonal_from_profile(p: &StochasticProfile) -> Result<OrthogonalMatrix> {
    let f = f_diagonals(p.dim());
    OrthogonalMatrix::new(f.transpose() * p.matrix() * f)
}

/// `max_{ij} |Σ_k a_{ik} a_{jk} − δ_{ij} − (n−2)|`. Accepts any square
/// matrix so perturbed inputs can be measured too.
pub fn gram_residual(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let target = DMatrix::identity(n, n) + DMatrix::from_element(n, n, n as f64 - 2.0);
    (a * a.transpose() - target).amax()
}

pub fn gram_condition(p: &StochasticProfile, tol: f64) -> bool {
    gram_residual(p.matrix()) <= tol
}

/// Circulant Gram residual `max_{ij} |Σ_k α_{i-k} α_{j-k} − δ_{ij} − (n−2)|`.
/// Takes a raw slice because perturbed test vectors may leave the valid set.
pub fn gram_residual_circulant(alpha: &[f64]) -> f64 {
    gram_residual(&circulant(alpha))
}

pub fn gram_condition_circulant(alpha: &[f64], tol: f64) -> bool {
    gram_residual_circulant(alpha) <= tol
}

fn circulant(alpha: &[f64]) -> DMatrix<f64> {
    let n = alpha.len() as i64;
    DMatrix::from_fn(n as usize, n as usize, |i, j| {
        alpha[(i as i64 - j as i64).rem_euclid(n) as usize]
    })
}

/// `a_{ij} = α_{i-j}`.
pub fn circulant_profile(a: &AlphaVector, tol: &ToleranceConfig) -> Result<StochasticProfile> {
    StochasticProfile::new(circulant(a.values()), tol)
}

/// `α_k = a_{k,0}`, after checking circulance.
pub fn circulant_profile_to_alpha(p: &StochasticProfile, tol: &ToleranceConfig) -> Result<AlphaVector> {
    let (deviation, row, col) = p.circulant_deviation();
    if deviation > tol.circulant {
        return Err(Error::NotCirculant { deviation, row, col });
    }
    let values = (0..p.dim()).map(|k| p.matrix()[(k, 0)].max(0.0)).collect();
    AlphaVector::new(values)
}

/// Haar-random orthogonal matrix: QR of a standard normal matrix with the
/// signs of `diag(R)` moved into `Q`.
pub fn random_orthogonal(size: usize, seed: u64) -> Result<OrthogonalMatrix> {
    if size == 0 {
        return Err(Error::Dimension(size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(size, size, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..size {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    OrthogonalMatrix::new(q)
}

/// Choi operator of the map `Λ(E_ii) = Σ_j a_{ij} E_jj`, `Λ(E_ij) = −E_ij`.
pub fn profile_choi_operator(p: &StochasticProfile) -> BipartiteOperator {
    let n = p.dim();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + j, i * n + j)] = c64::new(p.matrix()[(i, j)], 0.0);
            if i != j {
                m[(i * n + i, j * n + j)] = c64::new(-1.0, 0.0);
            }
        }
    }
    BipartiteOperator::new(n, m).expect("square by construction")
}

/// See-saw minimum of the profile's Choi operator over product vectors.
/// Errors when it drops below `-tol.block_positive`, which would contradict
/// positivity of the family and so points at a bug.
pub fn verify_profile_positivity(p: &StochasticProfile, opts: &SeeSawOptions, tol: &ToleranceConfig) -> Result<f64> {
    let value = see_saw_min(&profile_choi_operator(p), opts)?.value;
    if value < -tol.block_positive {
        return Err(Error::Verification(format!(
            "profile map is not positive: product expectation {value:e}"
        )));
    }
    Ok(value)
}

/// A family member from a seed: random torus phases (and sign for even `n`)
/// give a circulant profile, which is routed through `R = Fᵀ a F` and back.
pub fn witness_from_orthogonal_seed(n: usize, seed: u64, tol: &ToleranceConfig) -> Result<WitnessRecord> {
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..torus_phase_count(n))
        .map(|_| rng.random_range(0.0..2.0 * PI))
        .collect();
    let sign = (n.is_multiple_of(2)).then(|| if rng.random_bool(0.5) { 1 } else { -1 });
    let torus = witness_from_torus(n, &phases, sign)?;
    let r = orthogonal_from_profile(&circulant_profile(torus.alpha(), tol)?)?;
    let profile = profile_from_orthogonal(&r)?;
    let alpha = circulant_profile_to_alpha(&profile, tol)?;
    Ok(WitnessRecord::new(alpha, Provenance::FromOrthogonal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::NamedWitness;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn f_matrix_examples() {
        let f = f_matrices(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((f[0][(0, 0)].re - s).abs() < 1e-15 && (f[0][(1, 1)].re + s).abs() < 1e-15);
        let f = f_matrices(3).unwrap();
        let s6 = 6f64.sqrt();
        for (i, e) in [1.0 / s6, 1.0 / s6, -2.0 / s6].iter().enumerate() {
            assert!((f[1][(i, i)].re - e).abs() < 1e-15);
        }
        assert!(((&f[1] * &f[1]).trace().re - 1.0).abs() < 1e-15);
        assert!((&f[0] * &f[1]).trace().norm() < 1e-15);
        for m in &f {
            assert!(m.trace().norm() < 1e-15);
        }
    }

    #[test]
    fn identity_and_minus_identity_profiles() {
        let p = profile_from_orthogonal(&OrthogonalMatrix::identity(2)).unwrap();
        let a = circulant_profile_to_alpha(&p, &tol()).unwrap();
        for (x, e) in a.values().iter().zip([4.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]) {
            assert!((x - e).abs() < 1e-14);
        }
        assert!(gram_condition(&p, 1e-9));
        let p = profile_from_orthogonal(&-OrthogonalMatrix::identity(2)).unwrap();
        let a = circulant_profile_to_alpha(&p, &tol()).unwrap();
        for (x, e) in a.values().iter().zip([0.0, 1.0, 1.0]) {
            assert!((x - e).abs() < 1e-14);
        }
    }

    #[test]
    fn haar_samples_are_valid() {
        for seed in 0..50 {
            let r = random_orthogonal(3, seed).unwrap();
            let p = profile_from_orthogonal(&r).unwrap();
            assert!(gram_condition(&p, 1e-9));
            let back = orthogonal_from_profile(&p).unwrap();
            assert!((back.matrix() - r.matrix()).amax() < 1e-12);
        }
        assert_eq!(random_orthogonal(1, 3).unwrap().matrix()[(0, 0)].abs(), 1.0);
        let dets: Vec<f64> = (0..20)
            .map(|s| random_orthogonal(3, s).unwrap().determinant().signum())
            .collect();
        assert!(dets.contains(&1.0) && dets.contains(&-1.0));
    }

    #[test]
    fn gram_examples() {
        assert!(gram_condition_circulant(&[0.0, 1.0, 1.0], 1e-9));
        assert!(!gram_condition_circulant(&[1.0, 0.8, 0.2], 1e-9));
        assert!(gram_condition_circulant(&[1.0, 0.0, 1.0, 1.0], 1e-9));
        let nt = NamedWitness::NonTorus(2).alpha(5).unwrap();
        assert!(!gram_condition_circulant(nt.values(), 1e-9));
    }

    #[test]
    fn circulant_roundtrip_and_errors() {
        let a = AlphaVector::new(vec![1.0, 0.0, 1.0, 1.0]).unwrap();
        let p = circulant_profile(&a, &tol()).unwrap();
        assert_eq!(circulant_profile_to_alpha(&p, &tol()).unwrap(), a);
        let r = random_orthogonal(3, 11).unwrap();
        let p = profile_from_orthogonal(&r).unwrap();
        assert!(matches!(
            circulant_profile_to_alpha(&p, &tol()),
            Err(Error::NotCirculant { .. })
        ));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            OrthogonalMatrix::new(DMatrix::from_element(2, 2, 1.0)),
            Err(Error::NotOrthogonal(_))
        ));
        let bad = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            StochasticProfile::new(bad, &tol()),
            Err(Error::InvalidProfile(_))
        ));
    }

    #[test]
    fn profile_map_is_positive() {
        let r = random_orthogonal(3, 5).unwrap();
        let p = profile_from_orthogonal(&r).unwrap();
        let v = verify_profile_positivity(&p, &SeeSawOptions::default(), &tol()).unwrap();
        assert!(v >= -1e-6);
    }

    #[test]
    fn seeded_orthogonal_witness() {
        let a = witness_from_orthogonal_seed(4, 7, &tol()).unwrap();
        let b = witness_from_orthogonal_seed(4, 7, &tol()).unwrap();
        assert_eq!(a, b);
        assert!(a.alpha().is_boundary(1e-10));
        assert!(gram_condition_circulant(a.alpha().values(), 1e-9));
        assert_eq!(a.provenance(), Provenance::FromOrthogonal);
    }
}
