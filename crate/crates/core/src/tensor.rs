//! Dense complex-matrix substrate.
//!
//! Bipartite operators act on `C^n ⊗ C^n` with the product basis ordered as
//! `|i⟩⊗|j⟩ ↦ i*n + j`, so the first tensor factor is the slow index.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

#[allow(non_camel_case_types)]
pub type c64 = Complex<f64>;

pub type ComplexMatrix = DMatrix<c64>;
pub type ComplexVector = DVector<c64>;

pub const ZERO: c64 = c64::new(0.0, 0.0);
pub const ONE: c64 = c64::new(1.0, 0.0);

/// `ω^power` with `ω = e^{2πi/n}`; the exponent is reduced mod `n` first so
/// large powers do not lose accuracy.
pub fn root_of_unity(n: usize, power: i64) -> c64 {
    let p = power.rem_euclid(n as i64) as f64;
    c64::from_polar(1.0, 2.0 * PI * p / n as f64)
}

/// Matrix unit `E_{kl} = |e_k⟩⟨e_l|` in dimension `n`.
pub fn matrix_unit(n: usize, k: usize, l: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(k, l)] = ONE;
    m
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation `|M_ij - conj(M_ji)|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Hermiticity test with the tolerance scaled by the Frobenius norm.
pub fn is_hermitian(m: &ComplexMatrix, rel_tol: f64) -> bool {
    m.is_square() && hermitian_deviation(m) <= rel_tol * frobenius_norm(m)
}

fn hermitized(m: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let deviation = hermitian_deviation(m);
    let tolerance = rel_tol * frobenius_norm(m);
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok((m + m.adjoint()).scale(0.5))
}

fn finite(e: &SymmetricEigen<c64, nalgebra::Dyn>) -> bool {
    e.eigenvalues.iter().all(|v| v.is_finite()) && e.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Seeded Haar unitary used to scramble the sparsity pattern of `h`.
fn scrambler(size: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(size, size, |_, _| {
        c64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    g.qr().q()
}

// nalgebra's QL iteration can underflow to NaN on some very sparse inputs.
// Those are retried after a fixed unitary similarity, which leaves the
// spectrum unchanged and maps eigenvectors back with `U†`.
fn robust_eigen(h: ComplexMatrix) -> Result<SymmetricEigen<c64, nalgebra::Dyn>> {
    let n = h.nrows();
    let direct = h.clone().symmetric_eigen();
    if finite(&direct) {
        return Ok(direct);
    }
    for seed in 0..4 {
        let u = scrambler(n, seed);
        let r = &u * &h * u.adjoint();
        let mut e = ((&r + r.adjoint()).scale(0.5)).symmetric_eigen();
        if finite(&e) {
            e.eigenvectors = u.adjoint() * e.eigenvectors;
            return Ok(e);
        }
    }
    Err(Error::EigenSolver(n))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors in the matching columns.
pub fn hermitian_eigh(m: &ComplexMatrix, rel_tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    let h = hermitized(m, rel_tol)?;
    let n = h.nrows();
    if n == 0 {
        return Ok((Vec::new(), h));
    }
    let eig = robust_eigen(h)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, rel_tol: f64) -> Result<Vec<f64>> {
    let h = hermitized(m, rel_tol)?;
    let direct = h.clone().symmetric_eigenvalues();
    let mut values: Vec<f64> = if direct.iter().all(|v| v.is_finite()) {
        direct.iter().copied().collect()
    } else {
        robust_eigen(h)?.eigenvalues.iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest eigenvalue of the Hermitian part `(M + M†)/2`.
///
/// Fails when `M` deviates from Hermitian by more than `rel_tol·‖M‖_F`.
pub fn min_eigenvalue(m: &ComplexMatrix, rel_tol: f64) -> Result<f64> {
    hermitian_eigenvalues(m, rel_tol)?
        .first()
        .copied()
        .ok_or_else(|| Error::Shape("empty matrix has no eigenvalues".into()))
}

/// Partial transpose on the second factor of `C^n ⊗ C^n`.
pub fn partial_transpose(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if !m.is_square() || m.nrows() != n * n {
        return Err(Error::Shape(format!(
            "partial transpose needs a {0}x{0} matrix, got {1}x{2}",
            n * n,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(ComplexMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, a) = (r / n, r % n);
        let (j, b) = (c / n, c % n);
        m[(i * n + b, j * n + a)]
    }))
}

/// Forward transform `c_k = Σ_l ω^{-kl} v_l`.
pub fn dft(v: &[c64]) -> Vec<c64> {
    let n = v.len();
    (0..n)
        .map(|k| {
            v.iter()
                .enumerate()
                .map(|(l, &x)| root_of_unity(n, -((k * l) as i64)) * x)
                .sum()
        })
        .collect()
}

/// Inverse transform `α_k = (1/n) Σ_l ω^{kl} c_l`.
pub fn idft(c: &[c64]) -> Vec<c64> {
    let n = c.len();
    (0..n)
        .map(|k| {
            c.iter()
                .enumerate()
                .map(|(l, &x)| root_of_unity(n, (k * l) as i64) * x)
                .sum::<c64>()
                / n as f64
        })
        .collect()
}

pub fn dft_real(v: &[f64]) -> Vec<c64> {
    dft(&v.iter().map(|&x| c64::new(x, 0.0)).collect::<Vec<_>>())
}

/// An operator on `C^n ⊗ C^n`, stored as a dense `n² × n²` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl BipartiteOperator {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim));
        }
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::Shape(format!(
                "bipartite operator with factor dimension {dim} must be {0}x{0}, got {1}x{2}",
                dim * dim,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { dim, matrix })
    }

    /// Infers the factor dimension from a square matrix of side `n²`.
    pub fn from_square(matrix: ComplexMatrix) -> Result<Self> {
        let side = matrix.nrows();
        let dim = (side as f64).sqrt().round() as usize;
        if dim * dim != side {
            return Err(Error::Shape(format!("side {side} is not a perfect square")));
        }
        Self::new(dim, matrix)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn partial_transpose(&self) -> Self {
        Self {
            dim: self.dim,
            matrix: partial_transpose(&self.matrix, self.dim).expect("shape checked on construction"),
        }
    }

    pub fn min_eigenvalue(&self, rel_tol: f64) -> Result<f64> {
        min_eigenvalue(&self.matrix, rel_tol)
    }

    pub fn eigenvalues(&self, rel_tol: f64) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix, rel_tol)
    }

    pub fn trace(&self) -> c64 {
        self.matrix.trace()
    }

    /// `tr(self · other)`, computed without forming the product.
    pub fn pairing(&self, other: &Self) -> c64 {
        self.matrix
            .iter()
            .zip(other.matrix.transpose().iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `⟨x⊗y|W|x⊗y⟩`, real part.
    pub fn product_expectation(&self, x: &ComplexVector, y: &ComplexVector) -> f64 {
        let v = x.kronecker(y);
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    /// Max entrywise distance to another operator.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Add for &BipartiteOperator {
    type Output = BipartiteOperator;
    fn add(self, rhs: Self) -> BipartiteOperator {
        assert_eq!(self.dim, rhs.dim, "factor dimensions differ");
        BipartiteOperator {
            dim: self.dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl std::ops::Sub for &BipartiteOperator {
    type Output = BipartiteOperator;
    fn sub(self, rhs: Self) -> BipartiteOperator {
        assert_eq!(self.dim, rhs.dim, "factor dimensions differ");
        BipartiteOperator {
            dim: self.dim,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl std::ops::Mul<f64> for &BipartiteOperator {
    type Output = BipartiteOperator;
    fn mul(self, rhs: f64) -> BipartiteOperator {
        BipartiteOperator {
            dim: self.dim,
            matrix: self.matrix.map(|z| z * rhs),
        }
    }
}
