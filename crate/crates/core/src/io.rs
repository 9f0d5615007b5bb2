//! File formats: matrices, witness records, verdicts, certificates, profiles.
//!
//! JSON floats use the shortest representation that parses back to the same
//! bits. CSV floats are written with 17 significant digits.

use serde::{Deserialize, Serialize};

use crate::decomposability::{
    negativity_window, Certificate, DecompositionCertificate, NegativityWindow, PptCertificate,
};
use crate::error::{Error, Result};
use crate::orthogonal::{gram_condition, StochasticProfile};
use crate::positivity::{PositivityVerdict, WitnessClass};
use crate::tensor::{c64, BipartiteOperator, ComplexMatrix};
use crate::tolerance::ToleranceConfig;
use crate::witness::{alpha_to_c, AlphaVector, Provenance, WitnessRecord};

/// `{"rows", "cols", "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                entries.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = Error;
    fn try_from(j: &MatrixJson) -> Result<Self> {
        if j.entries.len() != j.rows * j.cols {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} matrix",
                j.entries.len(),
                j.rows,
                j.cols
            )));
        }
        Ok(ComplexMatrix::from_row_iterator(
            j.rows,
            j.cols,
            j.entries.iter().map(|[re, im]| c64::new(*re, *im)),
        ))
    }
}

impl MatrixJson {
    pub fn to_operator(&self) -> Result<BipartiteOperator> {
        BipartiteOperator::from_square(ComplexMatrix::try_from(self)?)
    }
}

fn complex_cell(z: c64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}j", z.re, z.im.abs())
}

/// One line per matrix row, cells `re+imj`.
pub fn matrix_to_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| complex_cell(m[(r, c)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn parse_cell(cell: &str) -> Result<c64> {
    let bad = || Error::Parse(format!("bad complex cell {cell:?}"));
    let body = cell.trim().strip_suffix('j').ok_or_else(bad)?;
    // the imaginary sign is the last '+' or '-' not preceded by an exponent marker
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..].parse().map_err(|_| bad())?;
    Ok(c64::new(re, im))
}

pub fn matrix_from_csv(text: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<c64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(parse_cell).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged matrix CSV".into()));
    }
    Ok(ComplexMatrix::from_row_iterator(
        rows.len(),
        cols,
        rows.into_iter().flatten(),
    ))
}

fn pairs(c: &[c64]) -> Vec<[f64; 2]> {
    c.iter().map(|z| [z.re, z.im]).collect()
}

/// `{"n", "alpha", "c", "provenance"}` plus the torus parameters when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecordJson {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub c: Vec<[f64; 2]>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phases: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sign: Option<i8>,
}

impl From<&WitnessRecord> for WitnessRecordJson {
    fn from(r: &WitnessRecord) -> Self {
        Self {
            n: r.dim(),
            alpha: r.alpha().values().to_vec(),
            c: pairs(r.coefficients().c()),
            provenance: r.provenance(),
            phases: r.phases().map(<[f64]>::to_vec),
            sign: r.sign(),
        }
    }
}

impl WitnessRecordJson {
    /// Rebuild the record. `alpha` is authoritative; `c` must agree with it.
    pub fn to_record(&self) -> Result<WitnessRecord> {
        let alpha = AlphaVector::new(self.alpha.clone())?;
        if alpha.dim() != self.n {
            return Err(Error::Parse(format!(
                "n = {} but alpha has {} entries",
                self.n,
                alpha.dim()
            )));
        }
        let c = alpha_to_c(&alpha);
        if self.c.len() != self.n {
            return Err(Error::Parse(format!(
                "c has {} entries, expected {}",
                self.c.len(),
                self.n
            )));
        }
        for (k, (z, [re, im])) in c.c().iter().zip(&self.c).enumerate() {
            if (z - c64::new(*re, *im)).norm() > 1e-9 * (1.0 + z.norm()) {
                return Err(Error::InvalidCoefficients(format!("c_{k} does not match alpha")));
            }
        }
        let record = WitnessRecord::new(alpha, self.provenance);
        Ok(match &self.phases {
            Some(p) => record.with_torus(p.clone(), self.sign),
            None => record,
        })
    }
}

pub fn record_to_json(r: &WitnessRecord) -> Result<String> {
    Ok(serde_json::to_string_pretty(&WitnessRecordJson::from(r))?)
}

pub fn record_from_json(text: &str) -> Result<WitnessRecord> {
    serde_json::from_str::<WitnessRecordJson>(text)?.to_record()
}

/// Verdict plus the coarse class and the input it refers to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub class: WitnessClass,
    #[serde(flatten)]
    pub verdict: PositivityVerdict,
}

impl ClassificationJson {
    pub fn new(a: &AlphaVector, verdict: PositivityVerdict) -> Self {
        Self {
            n: a.dim(),
            alpha: a.values().to_vec(),
            class: verdict.class(),
            verdict,
        }
    }
}

/// Self-contained certificate: carries the witness matrix so it can be
/// checked without rebuilding anything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateJson {
    Decomposition {
        n: usize,
        alpha: Vec<f64>,
        witness: MatrixJson,
        p: MatrixJson,
        q: MatrixJson,
        residual: f64,
        circulant_eigenvalues: Vec<f64>,
    },
    Ppt {
        n: usize,
        alpha: Vec<f64>,
        witness: MatrixJson,
        k: usize,
        epsilon: f64,
        rho: MatrixJson,
        pairing: f64,
        window: NegativityWindow,
    },
}

impl CertificateJson {
    pub fn new(w: &WitnessRecord, cert: &Certificate) -> Result<Self> {
        let witness = MatrixJson::from(w.matrix().matrix());
        let alpha = w.alpha().values().to_vec();
        let n = w.dim();
        Ok(match cert {
            Certificate::Decomposition(d) => CertificateJson::Decomposition {
                n,
                alpha,
                witness,
                p: d.p.matrix().into(),
                q: d.q.matrix().into(),
                residual: d.residual,
                circulant_eigenvalues: d.circulant_eigenvalues.clone(),
            },
            Certificate::Ppt(p) => CertificateJson::Ppt {
                n,
                alpha,
                witness,
                k: p.k,
                epsilon: p.epsilon,
                rho: p.rho.matrix().into(),
                pairing: p.pairing,
                window: negativity_window(w.alpha(), p.k)?,
            },
        })
    }

    /// Witness operator and certificate as stored in the file.
    pub fn to_parts(&self) -> Result<(BipartiteOperator, Certificate)> {
        match self {
            CertificateJson::Decomposition {
                witness,
                p,
                q,
                residual,
                circulant_eigenvalues,
                ..
            } => Ok((
                witness.to_operator()?,
                Certificate::Decomposition(DecompositionCertificate {
                    p: p.to_operator()?,
                    q: q.to_operator()?,
                    residual: *residual,
                    circulant_eigenvalues: circulant_eigenvalues.clone(),
                }),
            )),
            CertificateJson::Ppt {
                witness,
                k,
                epsilon,
                rho,
                pairing,
                ..
            } => Ok((
                witness.to_operator()?,
                Certificate::Ppt(PptCertificate {
                    k: *k,
                    epsilon: *epsilon,
                    rho: rho.to_operator()?,
                    pairing: *pairing,
                }),
            )),
        }
    }

    /// Re-verify from the file contents alone.
    pub fn verify(&self, tol: &ToleranceConfig) -> Result<()> {
        let (w, cert) = self.to_parts()?;
        crate::decomposability::verify_certificate(&w, &cert, tol)
    }
}

/// `{"n", "a", "circulant", "gram_ok"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub n: usize,
    pub a: Vec<Vec<f64>>,
    pub circulant: bool,
    pub gram_ok: bool,
}

impl ProfileJson {
    pub fn new(p: &StochasticProfile, tol: &ToleranceConfig) -> Self {
        let m = p.matrix();
        Self {
            n: p.dim(),
            a: (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
            circulant: p.is_circulant(tol.circulant),
            gram_ok: gram_condition(p, tol.gram),
        }
    }
}
