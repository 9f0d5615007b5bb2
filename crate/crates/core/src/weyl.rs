//! Weyl operators, generalized Bell projectors and the two local symmetry
//! groups: the diagonal phase torus `G1` and the Weyl group `G2`, each acting
//! as `U ⊗ U*`.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{c64, kron, root_of_unity, BipartiteOperator, ComplexMatrix, ComplexVector, ONE};

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Dimension(n))
    } else {
        Ok(())
    }
}

fn check_index(n: usize, index: usize) -> Result<()> {
    if index >= n {
        Err(Error::IndexOutOfRange { index, n })
    } else {
        Ok(())
    }
}

/// Weyl operator `U_{mk}` defined by `U_{mk} e_l = λ^{ml} e_{l+k}` with
/// `λ = e^{2πi/n}`. Both indices are reduced mod `n`.
pub fn weyl(n: usize, m: i64, k: i64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let shift = k.rem_euclid(n as i64) as usize;
    let mut u = ComplexMatrix::zeros(n, n);
    for l in 0..n {
        u[((l + shift) % n, l)] = root_of_unity(n, m * l as i64);
    }
    Ok(u)
}

/// Maximal deviation found in each Weyl identity over all index pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylRelationsReport {
    pub n: usize,
    /// `U_{kl} U_{rs} = λ^{ks} U_{k+r,l+s}`
    pub product: f64,
    /// `U_{kl}* = U_{-k,l}`
    pub conjugate: f64,
    /// `U_{kl}† = λ^{kl} U_{-k,-l}`
    pub adjoint: f64,
    /// `tr(U_{kl} U_{rs}†) = n δ_{kr} δ_{ls}`
    pub orthogonality: f64,
}

impl WeylRelationsReport {
    pub fn max_deviation(&self) -> f64 {
        self.product
            .max(self.conjugate)
            .max(self.adjoint)
            .max(self.orthogonality)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Exhaustively checks the Weyl multiplication, conjugation, adjoint and
/// orthogonality relations.
pub fn weyl_relations_check(n: usize) -> Result<WeylRelationsReport> {
    check_dim(n)?;
    let ni = n as i64;
    let ops: Vec<Vec<ComplexMatrix>> = (0..ni)
        .map(|k| (0..ni).map(|l| weyl(n, k, l)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let at = |k: i64, l: i64| &ops[k.rem_euclid(ni) as usize][l.rem_euclid(ni) as usize];

    let mut report = WeylRelationsReport {
        n,
        product: 0.0,
        conjugate: 0.0,
        adjoint: 0.0,
        orthogonality: 0.0,
    };
    for k in 0..ni {
        for l in 0..ni {
            let u = at(k, l);
            report.conjugate = report.conjugate.max(max_entry_diff(&u.conjugate(), at(-k, l)));
            let adj = at(-k, -l) * root_of_unity(n, k * l);
            report.adjoint = report.adjoint.max(max_entry_diff(&u.adjoint(), &adj));
            for r in 0..ni {
                for s in 0..ni {
                    let v = at(r, s);
                    let lhs = u * v;
                    let rhs = at(k + r, l + s) * root_of_unity(n, k * s);
                    report.product = report.product.max(max_entry_diff(&lhs, &rhs));
                    let tr = (u * v.adjoint()).trace();
                    let expected = if k == r && l == s { n as f64 } else { 0.0 };
                    report.orthogonality = report.orthogonality.max((tr - c64::new(expected, 0.0)).norm());
                }
            }
        }
    }
    Ok(report)
}

/// `|ψ⁺_n⟩ = n^{-1/2} Σ_k e_k ⊗ e_k`.
pub fn psi_plus(n: usize) -> Result<ComplexVector> {
    check_dim(n)?;
    let amp = c64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = ComplexVector::zeros(n * n);
    for k in 0..n {
        v[k * n + k] = amp;
    }
    Ok(v)
}

/// Generalized Bell state `|ψ_{kl}⟩ = (I ⊗ U_{kl}) |ψ⁺_n⟩`.
pub fn bell_state(n: usize, k: usize, l: usize) -> Result<ComplexVector> {
    check_dim(n)?;
    check_index(n, k)?;
    check_index(n, l)?;
    let id = ComplexMatrix::identity(n, n);
    Ok(kron(&id, &weyl(n, k as i64, l as i64)?) * psi_plus(n)?)
}

fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// Rank-1 projector `P_{kl} = |ψ_{kl}⟩⟨ψ_{kl}|`, built from the state vector.
pub fn bell_projector(n: usize, k: usize, l: usize) -> Result<BipartiteOperator> {
    BipartiteOperator::new(n, outer(&bell_state(n, k, l)?))
}

/// The same projector assembled in the Weyl basis of the commutant:
/// `P_{kl} = n^{-2} Σ_{rs} λ^{rl+ks} U_{rs} ⊗ U_{-r,s}`.
pub fn bell_projector_weyl_expansion(n: usize, k: usize, l: usize) -> Result<BipartiteOperator> {
    check_dim(n)?;
    check_index(n, k)?;
    check_index(n, l)?;
    let (ki, li) = (k as i64, l as i64);
    let mut acc = ComplexMatrix::zeros(n * n, n * n);
    for r in 0..n as i64 {
        for s in 0..n as i64 {
            let phase = root_of_unity(n, r * li + ki * s);
            acc += kron(&weyl(n, r, s)?, &weyl(n, -r, s)?) * phase;
        }
    }
    BipartiteOperator::new(n, acc / c64::new((n * n) as f64, 0.0))
}

/// All `n²` generalized Bell projectors, indexed `(k, l)`.
#[derive(Debug, Clone)]
pub struct BellBasis {
    n: usize,
    projectors: Vec<BipartiteOperator>,
}

impl BellBasis {
    pub fn new(n: usize) -> Result<Self> {
        let mut projectors = Vec::with_capacity(n * n);
        for k in 0..n {
            for l in 0..n {
                projectors.push(bell_projector(n, k, l)?);
            }
        }
        Ok(Self { n, projectors })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn projector(&self, k: usize, l: usize) -> &BipartiteOperator {
        &self.projectors[(k % self.n) * self.n + l % self.n]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &BipartiteOperator)> {
        let n = self.n;
        self.projectors
            .iter()
            .enumerate()
            .map(move |(i, p)| ((i / n, i % n), p))
    }

    /// Largest entrywise gap between the state-vector construction and the
    /// Weyl-basis expansion over all `(k, l)`.
    pub fn cross_validate(&self) -> Result<f64> {
        let mut worst = 0.0_f64;
        for ((k, l), p) in self.iter() {
            worst = worst.max(p.max_abs_diff(&bell_projector_weyl_expansion(self.n, k, l)?));
        }
        Ok(worst)
    }
}

/// `Π_k = P_{0k} + P_{1k} + … + P_{n-1,k}`: the rank-`n` projector onto
/// `span{ e_j ⊗ e_{j+k} }`.
pub fn pi_block(n: usize, k: usize) -> Result<BipartiteOperator> {
    check_dim(n)?;
    check_index(n, k)?;
    let mut acc = BipartiteOperator::zeros(n);
    for m in 0..n {
        acc = &acc + &bell_projector(n, m, k)?;
    }
    Ok(acc)
}

/// Flip operator `F (x ⊗ y) = y ⊗ x`.
pub fn flip(n: usize) -> Result<BipartiteOperator> {
    check_dim(n)?;
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m[(j * n + i, i * n + j)] = ONE;
        }
    }
    BipartiteOperator::new(n, m)
}

/// `P⁺_n = |ψ⁺_n⟩⟨ψ⁺_n|`.
pub fn p_plus(n: usize) -> Result<BipartiteOperator> {
    BipartiteOperator::new(n, outer(&psi_plus(n)?))
}

fn conjugation_deviation(x: &BipartiteOperator, v: &ComplexMatrix) -> f64 {
    let y = v * x.matrix() * v.adjoint();
    max_entry_diff(&y, x.matrix())
}

/// Worst deviation `‖(U⊗U*) X (U⊗U*)† − X‖` over `samples` random diagonal
/// phase unitaries `U = Σ e^{iφ_k} E_kk`, phases uniform in `[0, 2π)`.
pub fn invariance_deviation_g1(x: &BipartiteOperator, samples: usize, seed: u64) -> f64 {
    let n = x.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let phases: Vec<c64> = (0..n)
            .map(|_| c64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
            .collect();
        let u = ComplexMatrix::from_diagonal(&DVector::from_vec(phases));
        worst = worst.max(conjugation_deviation(x, &kron(&u, &u.conjugate())));
    }
    worst
}

/// Seeded `G1 ⊗ G1*` invariance test.
pub fn check_invariance_g1(x: &BipartiteOperator, samples: usize, seed: u64, tol: f64) -> bool {
    invariance_deviation_g1(x, samples, seed) <= tol
}

/// Worst deviation over every generator `U_{kl} ⊗ U_{-k,l}` of `G2 ⊗ G2*`.
pub fn invariance_deviation_g2(x: &BipartiteOperator) -> f64 {
    let n = x.dim() as i64;
    let mut worst = 0.0_f64;
    for k in 0..n {
        for l in 0..n {
            let a = weyl(x.dim(), k, l).expect("dimension checked by operator");
            let b = weyl(x.dim(), -k, l).expect("dimension checked by operator");
            worst = worst.max(conjugation_deviation(x, &kron(&a, &b)));
        }
    }
    worst
}

pub fn check_invariance_g2(x: &BipartiteOperator, tol: f64) -> bool {
    invariance_deviation_g2(x) <= tol
}

/// `U_{kl} ⊗ U_{-k,l}`, the generator of the Weyl commutant.
pub fn weyl_pair(n: usize, k: i64, l: i64) -> Result<ComplexMatrix> {
    Ok(kron(&weyl(n, k, l)?, &weyl(n, -k, l)?))
}
