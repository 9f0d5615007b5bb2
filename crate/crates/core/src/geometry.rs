//! Sphere and ellipse pictures of the torus witnesses, and lattice scans.
//!
//! On the simplex `Σα = n−1` the torus class lies on a sphere that can be
//! written around three centers. At `n = 3` the circle projects to the
//! ellipse `bc = (b+c−1)²` in the `bc`-plane.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposability::is_decomposable;
use crate::error::{Error, Result};
use crate::orthogonal::gram_condition_circulant;
use crate::positivity::{classify, ClassifyOptions, WitnessClass};
use crate::tensor::c64;
use crate::witness::{torus_phase_count, witness_from_torus, AlphaVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereCenter {
    /// `Σ α_k² = n−1`
    Origin,
    /// `Σ (α_k − 1)² = 1`
    Ones,
    /// `Σ (α_k − (n−1)/n)² = (n−1)/n`
    SimplexMid,
}

impl SphereCenter {
    pub const ALL: [SphereCenter; 3] = [SphereCenter::Origin, SphereCenter::Ones, SphereCenter::SimplexMid];

    /// `(center coordinate, radius²)` in dimension `n`.
    pub fn parameters(self, n: usize) -> (f64, f64) {
        let n = n as f64;
        match self {
            SphereCenter::Origin => (0.0, n - 1.0),
            SphereCenter::Ones => (1.0, 1.0),
            SphereCenter::SimplexMid => ((n - 1.0) / n, (n - 1.0) / n),
        }
    }
}

/// Sphere membership of a simplex point. The three centers give the same
/// answer whenever `Σα = n−1`; off the simplex the call fails.
pub fn on_boundary_sphere(a: &AlphaVector, center: SphereCenter, tol: f64) -> Result<bool> {
    let n = a.dim();
    let expected = n as f64 - 1.0;
    if (a.sum() - expected).abs() > tol {
        return Err(Error::OffSimplex { sum: a.sum(), expected });
    }
    let (c, r2) = center.parameters(n);
    let d: f64 = a.values().iter().map(|x| (x - c).powi(2)).sum();
    Ok((d - r2).abs() <= tol)
}

/// `|bc − (b+c−1)²| ≤ tol`.
pub fn ellipse_check_n3(b: f64, c: f64, tol: f64) -> bool {
    (b * c - (b + c - 1.0).powi(2)).abs() <= tol
}

/// A torus point at `n = 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    pub phi: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `count` equally spaced torus points at `n = 3`, starting at `φ = 0`.
pub fn ellipse_points(count: usize) -> Result<Vec<CirclePoint>> {
    (0..count)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / count as f64;
            let r = witness_from_torus(3, &[phi], None)?;
            let v = r.alpha().values();
            Ok(CirclePoint {
                phi,
                a: v[0],
                b: v[1],
                c: v[2],
            })
        })
        .collect()
}

/// Labeled points `I`, `II` (the two Choi witnesses) and `III` (reduction) as
/// `(label, a, b, c)`.
pub fn marked_points() -> [(&'static str, f64, f64, f64); 3] {
    [("I", 1.0, 1.0, 0.0), ("II", 1.0, 0.0, 1.0), ("III", 0.0, 1.0, 1.0)]
}

/// One lattice point of a torus scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub phases: Vec<f64>,
    pub sign: Option<i8>,
    pub alpha: Vec<f64>,
    pub c: Vec<c64>,
    pub verdict: WitnessClass,
    pub decomposable: bool,
    pub gram_ok: bool,
    pub on_sphere: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScanOptions {
    pub classify: ClassifyOptions,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
}

fn lattice(m: usize, grid: usize) -> Vec<Vec<f64>> {
    let total = grid.pow(m as u32);
    (0..total)
        .map(|mut idx| {
            let mut phases = vec![0.0; m];
            // last phase varies fastest
            for p in phases.iter_mut().rev() {
                *p = 2.0 * PI * (idx % grid) as f64 / grid as f64;
                idx /= grid;
            }
            phases
        })
        .collect()
}

fn scan_point(n: usize, phases: Vec<f64>, sign: Option<i8>, opts: &ScanOptions) -> Result<ScanRow> {
    let tol = &opts.classify.tol;
    let r = witness_from_torus(n, &phases, sign)?;
    let verdict = classify(r.alpha(), &opts.classify)?.class();
    let on_sphere = on_boundary_sphere(r.alpha(), SphereCenter::Origin, 1e-9)?;
    Ok(ScanRow {
        n,
        phases: r.phases().map(<[f64]>::to_vec).unwrap_or_default(),
        sign,
        alpha: r.alpha().values().to_vec(),
        c: r.coefficients().c().to_vec(),
        verdict,
        decomposable: is_decomposable(r.alpha(), tol),
        gram_ok: gram_condition_circulant(r.alpha().values(), tol.gram),
        on_sphere,
    })
}

/// Classify every point of the phase lattice `{2πi/grid}^m`.
///
/// Odd `n` takes no sign. For even `n` a missing sign scans both classes,
/// `+1` first. Rows come back in lattice order regardless of `jobs`.
pub fn torus_scan(n: usize, grid: usize, sign: Option<i8>, opts: &ScanOptions) -> Result<Vec<ScanRow>> {
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    if grid < 2 {
        return Err(Error::InvalidTorus(format!("grid must be at least 2, got {grid}")));
    }
    let signs: Vec<Option<i8>> = match (n.is_multiple_of(2), sign) {
        (false, None) => vec![None],
        (false, Some(_)) => return Err(Error::InvalidTorus(format!("odd n = {n} takes no sign"))),
        (true, None) => vec![Some(1), Some(-1)],
        (true, Some(s)) => vec![Some(s)],
    };
    let points: Vec<(Vec<f64>, Option<i8>)> = signs
        .iter()
        .flat_map(|&s| lattice(torus_phase_count(n), grid).into_iter().map(move |p| (p, s)))
        .collect();
    let work = || {
        points
            .into_par_iter()
            .map(|(p, s)| scan_point(n, p, s, opts))
            .collect::<Result<Vec<_>>>()
    };
    if opts.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(work)
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn class_name(c: WitnessClass) -> String {
    serde_json::to_value(c)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// CSV with one row per lattice point; floats carry 17 significant digits.
pub fn scan_csv(n: usize, rows: &[ScanRow]) -> String {
    let m = torus_phase_count(n);
    let mut header = vec!["n".to_string()];
    header.extend((1..=m).map(|i| format!("phase_{i}")));
    header.push("sign".into());
    header.extend((0..n).map(|i| format!("alpha_{i}")));
    for i in 0..n {
        header.push(format!("c_re_{i}"));
        header.push(format!("c_im_{i}"));
    }
    header.extend(["verdict", "decomposable", "gram_ok", "on_sphere"].map(String::from));
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let mut cells = vec![r.n.to_string()];
        cells.extend(r.phases.iter().map(|&p| num(p)));
        cells.push(r.sign.map(|s| format!("{s:+}")).unwrap_or_default());
        cells.extend(r.alpha.iter().map(|&a| num(a)));
        for z in &r.c {
            cells.push(num(z.re));
            cells.push(num(z.im));
        }
        cells.push(class_name(r.verdict));
        cells.push(r.decomposable.to_string());
        cells.push(r.gram_ok.to_string());
        cells.push(r.on_sphere.to_string());
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// The three data files behind the `n = 3` picture: circle in `(a,b,c)`,
/// ellipse in `(b,c)`, and the labeled points.
pub fn figure1_csv(count: usize) -> Result<(String, String, String)> {
    let pts = ellipse_points(count)?;
    let mut circle = String::from("phi,a,b,c\n");
    let mut ellipse = String::from("phi,b,c\n");
    for p in &pts {
        let _ = writeln!(circle, "{},{},{},{}", num(p.phi), num(p.a), num(p.b), num(p.c));
        let _ = writeln!(ellipse, "{},{},{}", num(p.phi), num(p.b), num(p.c));
    }
    let mut marked = String::from("label,a,b,c\n");
    for (label, a, b, c) in marked_points() {
        let _ = writeln!(marked, "{label},{},{},{}", num(a), num(b), num(c));
    }
    Ok((circle, ellipse, marked))
}
