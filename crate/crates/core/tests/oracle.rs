use nalgebra::DMatrix;
use num_complex::Complex64;

use puresep::generators::{cat_state, perturb, random_product_state, random_state, w_state};
use puresep::{cross_validate, oracle_schmidt, DimensionProfile, PureState, ToleranceConfig};

// Two parties: the Schmidt coefficients are the singular values of the
// d1 x d2 amplitude matrix, which nalgebra computes by its own SVD.
#[test]
fn bipartite_cuts_match_nalgebra_svd() {
    let tol = ToleranceConfig::default();
    for (d1, d2) in [(2, 2), (2, 5), (3, 4), (5, 3), (6, 6)] {
        let p = DimensionProfile::new(&[d1, d2]).unwrap();
        for seed in 0..5 {
            let s = random_state(&p, seed).unwrap();
            let m = DMatrix::<Complex64>::from_row_slice(d1, d2, s.amplitudes());
            let mut sv: Vec<f64> = m
                .svd(false, false)
                .singular_values
                .iter()
                .copied()
                .collect();
            sv.sort_by(|a, b| b.total_cmp(a));
            let report = oracle_schmidt(&s, &tol).unwrap();
            for cut in &report.singular_values {
                for (i, &expected) in sv.iter().enumerate() {
                    assert!((cut[i] - expected).abs() < 1e-10, "{d1}x{d2} seed {seed}");
                }
                assert!(cut[sv.len()..].iter().all(|x| x.abs() < 1e-7));
            }
        }
    }
}

#[test]
fn cat3_cuts_are_even() {
    let r = oracle_schmidt(&cat_state(3, 2).unwrap(), &ToleranceConfig::default()).unwrap();
    for sv in &r.singular_values {
        assert!((sv[0] * sv[0] - 0.5).abs() < 1e-14 && (sv[1] * sv[1] - 0.5).abs() < 1e-14);
    }
    assert_eq!(r.schmidt_numbers, vec![2, 2, 2]);
}

#[test]
fn products_have_schmidt_number_one() {
    let tol = ToleranceConfig::default();
    for dims in [
        vec![2, 2],
        vec![3, 4, 2],
        vec![4, 4, 4],
        vec![2, 2, 2, 2, 2],
    ] {
        let p = DimensionProfile::new(&dims).unwrap();
        for seed in 0..10 {
            let r = oracle_schmidt(&random_product_state(&p, seed).unwrap(), &tol).unwrap();
            assert!(r.separable);
            assert!(r.schmidt_numbers.iter().all(|&c| c == 1));
            assert!(r.max_margin() < 1e-7);
        }
    }
}

#[test]
fn margin_tracks_perturbation_size() {
    let tol = ToleranceConfig::default();
    let p = DimensionProfile::new(&[2, 2, 2]).unwrap();
    let base = PureState::basis(p, &[0, 0, 0]).unwrap();
    let cat = cat_state(3, 2).unwrap();
    for eps in [1e-6, 1e-4, 1e-2] {
        let r = oracle_schmidt(&perturb(&base, &cat, eps).unwrap(), &tol).unwrap();
        assert!(
            (r.max_margin() / eps - 1.0).abs() < 1e-3,
            "eps {eps}: {}",
            r.max_margin()
        );
    }
}

#[test]
fn cross_validation_on_mixed_battery() {
    let tol = ToleranceConfig::default();
    let p = DimensionProfile::new(&[2, 3, 2]).unwrap();
    let mut battery = vec![w_state(4).unwrap(), cat_state(3, 3).unwrap()];
    for seed in 0..10 {
        battery.push(random_product_state(&p, seed).unwrap());
        battery.push(random_state(&p, seed).unwrap());
    }
    let report = cross_validate(&battery, &tol).unwrap();
    assert!(
        report.disagreements.is_empty(),
        "{:?}",
        report.disagreements
    );
    assert_eq!(
        report.checks.iter().filter(|c| c.oracle_separable).count(),
        10
    );
    for row in &report.agreement {
        assert!(row.iter().all(|&a| a == battery.len()));
    }
}
