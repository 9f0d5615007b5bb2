//! Reference values computed independently from the defining formulas with
//! numpy/scipy; see `oracle/reference.py`.

use bwl::decomposability::{pairing_formula, rho_epsilon};
use bwl::positivity::{see_saw_min, SeeSawOptions};
use bwl::witness::{witness_from_alpha, witness_from_torus};
use bwl::AlphaVector;

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() <= tol, "index {i}: got {g}, want {w}");
    }
}

fn eig(alpha: &[f64]) -> Vec<f64> {
    witness_from_alpha(&AlphaVector::new(alpha.to_vec()).unwrap())
        .eigenvalues(1e-10)
        .unwrap()
}

#[test]
fn witness_spectrum_n3() {
    let want = [-1.0, 0.2, 0.2, 0.2, 0.8, 0.8, 0.8, 2.0, 2.0];
    assert_close(&eig(&[1.0, 0.8, 0.2]), &want, 1e-12);
}

#[test]
fn witness_and_partial_transpose_spectrum_n4() {
    let a = [0.5, 1.2, 0.3, 1.0];
    let want = [
        -2.5, 0.3, 0.3, 0.3, 0.3, 1.0, 1.0, 1.0, 1.0, 1.2, 1.2, 1.2, 1.2, 1.5, 1.5, 1.5,
    ];
    assert_close(&eig(&a), &want, 1e-12);
    let g = witness_from_alpha(&AlphaVector::new(a.to_vec()).unwrap()).partial_transpose();
    let r = 0.09501243788791089;
    let s = 2.104987562112089;
    let want = [-0.7, -0.7, r, r, r, r, 0.5, 0.5, 0.5, 0.5, 1.3, 1.3, s, s, s, s];
    assert_close(&g.eigenvalues(1e-10).unwrap(), &want, 1e-12);
}

#[test]
fn torus_alpha_n5_and_n6() {
    let r = witness_from_torus(5, &[0.7, 2.1], None).unwrap();
    let want = [
        0.9039984330738523,
        0.6098836589336628,
        0.6670091535442954,
        0.31316976374098016,
        1.5059389907072092,
    ];
    assert_close(r.alpha().values(), &want, 1e-13);

    let r = witness_from_torus(6, &[0.4, 1.9], Some(-1)).unwrap();
    let want = [
        0.8659238090464605,
        0.8218030625845117,
        0.7277960082773786,
        0.5852164797112037,
        0.40628018267616106,
        1.5929804577042852,
    ];
    assert_close(r.alpha().values(), &want, 1e-13);
}

#[test]
fn ppt_operator_pairing_n5() {
    let a = AlphaVector::new(vec![0.3, 1.1, 0.4, 0.9, 0.6]).unwrap();
    let rho = rho_epsilon(5, 2, 0.7).unwrap();
    let want = -2.171428571428569;
    assert!((rho.pairing(&witness_from_alpha(&a)).re - want).abs() <= 1e-12);
    assert!((pairing_formula(&a, 2, 0.7) - want).abs() <= 1e-12);
    assert!(rho.min_eigenvalue(1e-10).unwrap() >= -1e-12);
    assert!(rho.partial_transpose().min_eigenvalue(1e-10).unwrap() >= -1e-12);
}

#[test]
fn see_saw_matches_quasi_newton_minimum() {
    // BFGS over product vectors with 400 random starts
    for (alpha, want) in [
        (vec![0.5, 0.5, 0.5], -0.1666666666666668),
        (vec![1.5, 0.0, 0.3, 0.2], -0.2500000000000001),
    ] {
        let w = witness_from_alpha(&AlphaVector::new(alpha).unwrap());
        let got = see_saw_min(&w, &SeeSawOptions::default()).unwrap().value;
        assert!((got - want).abs() <= 1e-8, "got {got}, want {want}");
    }
}
