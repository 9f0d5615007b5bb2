use std::f64::consts::PI;

use proptest::prelude::*;

use bwl::decomposability::{decompose, pairing_formula, rho_epsilon};
use bwl::io::{record_from_json, record_to_json};
use bwl::orthogonal::gram_condition_circulant;
use bwl::positivity::{classify_n3, SeeSawOptions, Trinary};
use bwl::tensor::{c64, hermitian_eigenvalues};
use bwl::witness::{alpha_to_c, c_to_alpha, torus_phase_count, witness_from_alpha, witness_from_torus, Provenance};
use bwl::{AlphaVector, ToleranceConfig, WitnessRecord};

fn alpha_strategy() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=5).prop_flat_map(|n| prop::collection::vec(0.0f64..3.0, n))
}

fn torus_strategy() -> impl Strategy<Value = (usize, Vec<f64>, Option<i8>)> {
    (3usize..=6).prop_flat_map(|n| {
        let sign = if n % 2 == 0 {
            prop_oneof![Just(Some(1i8)), Just(Some(-1i8))].boxed()
        } else {
            Just(None).boxed()
        };
        (
            Just(n),
            prop::collection::vec(0.0f64..2.0 * PI, torus_phase_count(n)),
            sign,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alpha_c_roundtrip(v in alpha_strategy()) {
        let a = AlphaVector::new(v.clone()).unwrap();
        let back = c_to_alpha(&alpha_to_c(&a), 0.0).unwrap();
        for (x, y) in back.values().iter().zip(&v) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn partial_transpose_is_an_involution(v in alpha_strategy()) {
        let w = witness_from_alpha(&AlphaVector::new(v).unwrap());
        let g = w.partial_transpose();
        let back = g.partial_transpose();
        prop_assert_eq!(back.matrix(), w.matrix());
        prop_assert!((g.trace() - w.trace()).norm() <= 1e-12);
    }

    #[test]
    fn spectrum_and_trace_closed_form(v in alpha_strategy()) {
        let n = v.len();
        let a = AlphaVector::new(v.clone()).unwrap();
        let w = witness_from_alpha(&a);
        prop_assert!((w.trace().re - n as f64 * a.sum()).abs() <= 1e-10);
        let mut expected = vec![v[0] + 1.0 - n as f64];
        expected.extend(std::iter::repeat_n(v[0] + 1.0, n - 1));
        for &x in &v[1..] {
            expected.extend(std::iter::repeat_n(x, n));
        }
        expected.sort_by(f64::total_cmp);
        let mut got = hermitian_eigenvalues(w.matrix(), 1e-10).unwrap();
        got.sort_by(f64::total_cmp);
        for (x, y) in got.iter().zip(&expected) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn torus_witnesses_are_boundary_gram_profiles((n, phases, sign) in torus_strategy()) {
        let r = witness_from_torus(n, &phases, sign).unwrap();
        prop_assert!(r.alpha().values().iter().all(|&x| x >= 0.0));
        prop_assert!((r.alpha().sum() - (n as f64 - 1.0)).abs() <= 1e-10);
        for z in &r.coefficients().c()[1..] {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-10);
        }
        prop_assert!(gram_condition_circulant(r.alpha().values(), 1e-9));
    }

    #[test]
    fn symmetric_split_reassembles(n in 3usize..=6, cs in prop::collection::vec(-1.0f64..=1.0, 3)) {
        let mut c = vec![c64::new(n as f64 - 1.0, 0.0); n];
        for j in 1..=n / 2 {
            c[j] = c64::new(cs[(j - 1) % cs.len()], 0.0);
            c[n - j] = c[j];
        }
        let s = bwl::witness::SpectralCoefficients::for_witness(c).unwrap();
        let a = c_to_alpha(&s, 1e-12).unwrap();
        let d = decompose(&a, &ToleranceConfig::default()).unwrap();
        let w = witness_from_alpha(&a);
        let diff = w.matrix() - d.p.matrix() - d.q.partial_transpose().matrix();
        prop_assert!(diff.norm() <= 1e-10);
        prop_assert!(d.p.min_eigenvalue(1e-10).unwrap() >= -1e-10);
        prop_assert!(d.q.min_eigenvalue(1e-10).unwrap() >= -1e-10);
    }

    #[test]
    fn pairing_formula_matches_trace(v in alpha_strategy(), k_seed in 0usize..8, eps in 0.05f64..5.0) {
        let n = v.len();
        let k = 1 + k_seed % (n - 1);
        prop_assume!(2 * k != n);
        let a = AlphaVector::new(v).unwrap();
        let rho = rho_epsilon(n, k, eps).unwrap();
        let direct = rho.pairing(&witness_from_alpha(&a)).re;
        let formula = pairing_formula(&a, k, eps);
        prop_assert!((direct - formula).abs() <= 1e-9 * (1.0 + formula.abs()));
        prop_assert!(rho.min_eigenvalue(1e-10).unwrap() >= -1e-10);
        prop_assert!(rho.partial_transpose().min_eigenvalue(1e-10).unwrap() >= -1e-10);
    }

    #[test]
    fn json_roundtrip_is_bit_exact(v in alpha_strategy()) {
        let r = WitnessRecord::new(AlphaVector::new(v).unwrap(), Provenance::FromAlpha);
        let back = record_from_json(&record_to_json(&r).unwrap()).unwrap();
        prop_assert_eq!(back.alpha().values(), r.alpha().values());
    }

    #[test]
    fn n3_refutations_carry_negative_certificates(v in prop::collection::vec(0.0f64..2.0, 3)) {
        let a = AlphaVector::new(v).unwrap();
        let verdict = classify_n3(&a, &ToleranceConfig::default(), &SeeSawOptions::default()).unwrap();
        if verdict.block_positive == Trinary::No {
            let cert = verdict.certificate.expect("refutation without certificate");
            prop_assert!(cert.evaluate(&witness_from_alpha(&a)).unwrap() < 0.0);
        }
    }
}
