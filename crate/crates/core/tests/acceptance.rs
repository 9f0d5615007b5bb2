//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bwl::decomposability::{decompose, default_index, ppt_certificate};
use bwl::geometry::{ellipse_check_n3, marked_points, on_boundary_sphere, SphereCenter};
use bwl::orthogonal::{
    gram_condition_circulant, gram_residual, profile_from_orthogonal, random_orthogonal, verify_profile_positivity,
};
use bwl::positivity::{classify_n3, see_saw_min, SeeSawOptions, Trinary};
use bwl::tensor::{c64, hermitian_eigenvalues, BipartiteOperator};
use bwl::weyl::weyl_relations_check;
use bwl::witness::{
    alpha_to_c, choi_matrix, torus_phase_count, witness_from_alpha, witness_from_c, witness_from_torus, NamedWitness,
};
use bwl::{AlphaVector, ToleranceConfig, WitnessRecord};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn torus_sample(n: usize, rng: &mut ChaCha8Rng) -> WitnessRecord {
    let phases: Vec<f64> = (0..torus_phase_count(n))
        .map(|_| rng.random_range(0.0..2.0 * PI))
        .collect();
    let sign = n.is_multiple_of(2).then(|| if rng.random_bool(0.5) { 1 } else { -1 });
    witness_from_torus(n, &phases, sign).expect("torus witness")
}

/// 100 seeded torus witnesses for one `n`, seed `i` per sample.
fn corpus(n: usize) -> Vec<WitnessRecord> {
    (0..100u64)
        .map(|i| torus_sample(n, &mut ChaCha8Rng::seed_from_u64(1000 * n as u64 + i)))
        .collect()
}

fn c1() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=7 {
        let r = weyl_relations_check(n).map_err(|e| e.to_string())?;
        worst = worst.max(r.max_deviation());
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("n = 2..7, max deviation {worst:.1e}"))
}

fn c2() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        for r in corpus(n) {
            let a = r.alpha().values();
            let mut expected = vec![a[0] + 1.0 - n as f64];
            expected.extend(std::iter::repeat_n(a[0] + 1.0, n - 1));
            for &ak in &a[1..] {
                expected.extend(std::iter::repeat_n(ak, n));
            }
            expected.sort_by(f64::total_cmp);
            let mut got = hermitian_eigenvalues(r.matrix().matrix(), 1e-10).map_err(|e| e.to_string())?;
            got.sort_by(f64::total_cmp);
            for (x, y) in got.iter().zip(&expected) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    ensure(worst <= 1e-9, || format!("spectral mismatch {worst:e}"))?;
    Ok(format!("300 torus witnesses, max eigenvalue error {worst:.1e}"))
}

fn c3() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        for r in corpus(n) {
            let a = r.alpha();
            let direct = witness_from_alpha(a);
            let via_c = witness_from_c(&alpha_to_c(a)).map_err(|e| e.to_string())?;
            let choi = choi_matrix(a);
            worst = worst.max(direct.max_abs_diff(&via_c)).max(direct.max_abs_diff(&choi));
        }
    }
    ensure(worst <= 1e-10, || format!("entrywise mismatch {worst:e}"))?;
    Ok(format!("three constructions agree to {worst:.1e}"))
}

/// α from `c` by the inverse transform `α_l = (1/n) Σ_k ω^{kl} c_k`.
fn inverse_dft_real(c: &[c64]) -> Vec<f64> {
    let n = c.len();
    (0..n)
        .map(|l| {
            let s: c64 = (0..n)
                .map(|k| c[k] * c64::from_polar(1.0, 2.0 * PI * (k * l) as f64 / n as f64))
                .sum();
            s.re / n as f64
        })
        .collect()
}

fn c4() -> Outcome {
    let tol = ToleranceConfig::default().gram;
    let mut torus = 0;
    let mut perturbed = 0;
    for n in 3..=5 {
        for r in corpus(n) {
            ensure(gram_condition_circulant(r.alpha().values(), tol), || {
                format!("torus witness {:?} fails the Gram condition", r.alpha().values())
            })?;
            torus += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + n as u64);
        for _ in 0..100 {
            let r = torus_sample(n, &mut rng);
            let mut c = r.coefficients().c().to_vec();
            let scale = if rng.random_bool(0.5) { 1.05 } else { 0.95 };
            c[1] *= scale;
            c[n - 1] = c[1].conj();
            let a = inverse_dft_real(&c);
            ensure(!gram_condition_circulant(&a, tol), || {
                format!("perturbed {a:?} passes the Gram condition")
            })?;
            perturbed += 1;
        }
    }
    Ok(format!(
        "{torus} torus pass, {perturbed} perturbed (|c1| = 1 ± 0.05) fail, 0 misclassified"
    ))
}

/// 200 points of the `Σα = 2` triangle: the `m = 19` barycentric grid
/// without the 10 points with `α_0 ≥ 32/19`, which sit in the trivially
/// positive corner.
fn n3_grid() -> Vec<[f64; 3]> {
    let m = 19;
    let mut pts = Vec::new();
    for i in 0..=15 {
        for j in 0..=(m - i) {
            let k = m - i - j;
            pts.push([
                2.0 * i as f64 / m as f64,
                2.0 * j as f64 / m as f64,
                2.0 * k as f64 / m as f64,
            ]);
        }
    }
    pts
}

fn c5() -> Outcome {
    let tol = ToleranceConfig::default();
    let opts = SeeSawOptions::default();
    let pts = n3_grid();
    let mut agree = 0;
    let mut far = Vec::new();
    for p in &pts {
        let a = AlphaVector::new(p.to_vec()).map_err(|e| e.to_string())?;
        let verdict = classify_n3(&a, &tol, &opts).map_err(|e| e.to_string())?;
        let min = see_saw_min(&witness_from_alpha(&a), &opts)
            .map_err(|e| e.to_string())?
            .value;
        let oracle_positive = min >= -1e-6;
        if (verdict.block_positive == Trinary::Yes) == oracle_positive {
            agree += 1;
        } else {
            let [x, b, c] = *p;
            let gap = (b * c - (1.0 - x).powi(2)).abs();
            if gap > 1e-4 {
                far.push((*p, min));
            }
        }
    }
    ensure(pts.len() == 200, || format!("grid has {} points", pts.len()))?;
    ensure(agree >= 198, || format!("only {agree}/200 agree"))?;
    ensure(far.is_empty(), || {
        format!("disagreements away from the boundary: {far:?}")
    })?;
    Ok(format!("{agree}/200 agree with see-saw"))
}

fn min_eig(op: &BipartiteOperator) -> Result<f64, String> {
    op.min_eigenvalue(1e-10).map_err(|e| e.to_string())
}

fn c6() -> Outcome {
    let tol = ToleranceConfig::default();
    let mut worst_res: f64 = 0.0;
    let mut worst_psd: f64 = 0.0;
    let mut worst_pair: f64 = 0.0;
    for n in 3..=5 {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + n as u64);
        // symmetric boundary witnesses: real c_j = c_{n-j} in [-1, 1]
        for _ in 0..50 {
            let mut c = vec![c64::new(n as f64 - 1.0, 0.0); n];
            for j in 1..=n / 2 {
                let v = rng.random_range(-1.0..=1.0);
                c[j] = c64::new(v, 0.0);
                c[n - j] = c[j];
            }
            let a = AlphaVector::new(inverse_dft_real(&c).iter().map(|x| x.max(0.0)).collect())
                .map_err(|e| e.to_string())?;
            let w = witness_from_alpha(&a);
            let d = decompose(&a, &tol).map_err(|e| format!("{:?}: {e}", a.values()))?;
            let diff = w.matrix() - d.p.matrix() - d.q.partial_transpose().matrix();
            worst_res = worst_res.max(diff.norm());
            worst_psd = worst_psd.min(min_eig(&d.p)?).min(min_eig(&d.q)?);
        }
        // asymmetric boundary witnesses: generic torus points
        let mut made = 0;
        while made < 50 {
            let r = torus_sample(n, &mut rng);
            let a = r.alpha();
            let k = default_index(a);
            let (ak, akm) = (a.get(k as i64), a.get(-(k as i64)));
            if (ak - akm).abs() < 1e-3 || akm < 1e-6 {
                continue;
            }
            let cert = ppt_certificate(a, None, None, &tol).map_err(|e| e.to_string())?;
            worst_psd = worst_psd
                .min(min_eig(&cert.rho)?)
                .min(min_eig(&cert.rho.partial_transpose())?);
            let pairing = cert.rho.pairing(r.matrix()).re;
            let expected = -(n as f64) * (ak.sqrt() - akm.sqrt()).powi(2);
            worst_pair = worst_pair.max((pairing - expected).abs());
            ensure(pairing < 0.0, || {
                format!("pairing {pairing} not negative for {:?}", a.values())
            })?;
            made += 1;
        }
    }
    ensure(worst_res <= 1e-10, || format!("decomposition residual {worst_res:e}"))?;
    ensure(worst_psd >= -1e-10, || format!("min eigenvalue {worst_psd:e}"))?;
    ensure(worst_pair <= 1e-9, || format!("pairing error {worst_pair:e}"))?;
    Ok(format!(
        "residual {worst_res:.1e}, min eigenvalue {worst_psd:.1e}, pairing error {worst_pair:.1e}"
    ))
}

fn c7() -> Outcome {
    let tol = ToleranceConfig::default();
    let mut worst_see_saw = f64::INFINITY;
    let mut worst_gram: f64 = 0.0;
    for n in 3..=5 {
        for seed in 0..100u64 {
            let r = random_orthogonal(n - 1, 7000 * n as u64 + seed).map_err(|e| e.to_string())?;
            let p = profile_from_orthogonal(&r).map_err(|e| e.to_string())?;
            let m = p.matrix();
            ensure(m.iter().all(|&x| x >= -1e-12), || {
                format!("negative entry in profile {m}")
            })?;
            for i in 0..n {
                let (row, col) = (m.row(i).sum(), m.column(i).sum());
                ensure(
                    (row - (n as f64 - 1.0)).abs() <= 1e-10 && (col - (n as f64 - 1.0)).abs() <= 1e-10,
                    || format!("row/column sums {row}, {col}"),
                )?;
            }
            worst_gram = worst_gram.max(gram_residual(m));
            let opts = SeeSawOptions {
                seed,
                ..Default::default()
            };
            let v = verify_profile_positivity(&p, &opts, &tol).map_err(|e| e.to_string())?;
            worst_see_saw = worst_see_saw.min(v);
        }
    }
    ensure(worst_gram <= 1e-9, || format!("Gram residual {worst_gram:e}"))?;
    ensure(worst_see_saw >= -1e-6, || format!("see-saw minimum {worst_see_saw:e}"))?;
    Ok(format!(
        "300 Haar samples, Gram residual {worst_gram:.1e}, see-saw min {worst_see_saw:.1e}"
    ))
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8000);
    let mut worst: f64 = 0.0;
    for sign in [1i8, -1] {
        for _ in 0..200 {
            let phase = rng.random_range(0.0..2.0 * PI);
            let r = witness_from_torus(4, &[phase], Some(sign)).map_err(|e| e.to_string())?;
            let a = r.alpha().values();
            let target = if sign == 1 { 1.0 } else { 2.0 };
            worst = worst.max((a[1] + a[3] - target).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("b + d off by {worst:e}"))?;
    Ok(format!("400 samples, b + d error {worst:.1e}"))
}

fn c9() -> Outcome {
    let tol = ToleranceConfig::default().simplex;
    let mut rng = ChaCha8Rng::seed_from_u64(9000);
    let mut on = 0;
    for i in 0..1000 {
        let n = 3 + i % 3;
        // half the points come from the torus so the predicates see both answers
        let a = if i % 2 == 0 {
            torus_sample(n, &mut rng).alpha().clone()
        } else {
            let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
            let s: f64 = raw.iter().sum();
            AlphaVector::new(raw.iter().map(|x| x * (n as f64 - 1.0) / s).collect()).map_err(|e| e.to_string())?
        };
        let answers: Vec<bool> = SphereCenter::ALL
            .iter()
            .map(|&c| on_boundary_sphere(&a, c, tol))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(answers.iter().all(|&b| b == answers[0]), || {
            format!("predicates disagree at {:?}", a.values())
        })?;
        on += usize::from(answers[0]);
    }
    ensure(on >= 500, || format!("only {on} torus points on the sphere"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9001);
    for _ in 0..1000 {
        let r = torus_sample(3, &mut rng);
        let a = r.alpha().values();
        ensure(ellipse_check_n3(a[1], a[2], 1e-10), || format!("{a:?} off the ellipse"))?;
    }
    let expected = [("I", 1.0, 0.0), ("II", 0.0, 1.0), ("III", 1.0, 1.0)];
    for ((label, _, b, c), (l, eb, ec)) in marked_points().into_iter().zip(expected) {
        ensure(label == l && b == eb && c == ec && ellipse_check_n3(b, c, 0.0), || {
            format!("marked point {label} at ({b}, {c})")
        })?;
    }
    let named = [NamedWitness::ChoiI, NamedWitness::ChoiII, NamedWitness::Reduction];
    for ((label, a, b, c), w) in marked_points().into_iter().zip(named) {
        let v = w.alpha(3).map_err(|e| e.to_string())?;
        ensure(v.values() == [a, b, c], || format!("marked point {label} is not {w:?}"))?;
    }
    Ok(format!(
        "1000 points agree ({on} on the sphere), 1000 torus points on the ellipse, I/II/III ok"
    ))
}

fn c10() -> Outcome {
    let tol = ToleranceConfig::default().gram;
    let mut report = Vec::new();
    for n in 3..=6 {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + n as u64);
        let bound = 2.0 * (n as f64 - 1.0) / n as f64;
        let max = (0..10_000)
            .map(|_| torus_sample(n, &mut rng).alpha().get(0))
            .fold(f64::MIN, f64::max);
        ensure(max <= bound + 1e-9, || {
            format!("n = {n}: max alpha_0 {max} exceeds {bound}")
        })?;
        report.push(format!("n={n} {max:.4}/{bound:.4}"));
    }
    for n in 4..=7 {
        let a = NamedWitness::NonTorus(2).alpha(n).map_err(|e| e.to_string())?;
        let mut expected = vec![0.0; n];
        expected[0] = n as f64 - 2.0;
        expected[1] = 1.0;
        ensure(a.values() == expected.as_slice(), || {
            format!("non-torus witness {:?}", a.values())
        })?;
        ensure(!gram_condition_circulant(a.values(), tol), || {
            format!("n = {n}: non-torus witness passes Gram")
        })?;
    }
    Ok(format!(
        "{}; (n-2, 1, 0, ...) fails Gram for n = 4..7",
        report.join(", ")
    ))
}

fn c11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bwl");
    let start = Instant::now();
    let run = || {
        Command::new(bin)
            .args(["scan", "--n", "3", "--grid", "24", "--seed", "11"])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    let elapsed = start.elapsed();
    ensure(first.status.success() && second.status.success(), || {
        String::from_utf8_lossy(&first.stderr).into_owned()
    })?;
    ensure(first.stdout == second.stdout, || {
        "scan output differs between runs".into()
    })?;
    ensure(elapsed <= Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    let rows = first.stdout.iter().filter(|&&b| b == b'\n').count() - 1;
    Ok(format!(
        "{rows} rows, byte-identical, {:.2} s for both runs",
        elapsed.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Weyl relations", c1),
        ("spectral reproduction", c2),
        ("representation equivalence", c3),
        ("torus <=> Gram", c4),
        ("n = 3 oracle agreement", c5),
        ("decomposability dichotomy", c6),
        ("orthogonal family", c7),
        ("n = 4 class split", c8),
        ("geometry agreement", c9),
        ("alpha_0 bound and non-torus witness", c10),
        ("CLI determinism", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
