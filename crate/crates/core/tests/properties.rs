use proptest::prelude::*;

use puresep::criteria::{det_value_dense, det_value_spectral, run_report, Criterion, ScanMode};
use puresep::density::{gram_large, gram_small, partial_trace};
use puresep::generators::{product_state, random_product_with_factors, random_state};
use puresep::unfolding::build_unfolding;
use puresep::{
    extract_factors, oracle_schmidt, DimensionProfile, NoTally, PureState, ToleranceConfig,
};

fn small_dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

fn state(dims: &[usize], seed: u64) -> PureState {
    random_state(&DimensionProfile::new(dims).unwrap(), seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flat_index_is_a_bijection(dims in prop::collection::vec(1usize..=4, 1..=4)) {
        let p = DimensionProfile::new(&dims).unwrap();
        let mut seen = vec![false; p.total()];
        for flat in 0..p.total() {
            let multi = p.multi_index(flat);
            prop_assert_eq!(p.flat_index(&multi).unwrap(), flat);
            prop_assert!(!std::mem::replace(&mut seen[flat], true));
        }
    }

    #[test]
    fn partial_trace_equals_large_gram(dims in small_dims(), seed in any::<u64>()) {
        let s = state(&dims, seed);
        for k in 0..dims.len() {
            let direct = partial_trace(&s, k).unwrap();
            let gram = gram_large(&build_unfolding(&s, k).unwrap());
            prop_assert!(direct.matrix.max_abs_diff(&gram.matrix) < 1e-12);
        }
    }

    #[test]
    fn both_grams_share_nonzero_spectrum(dims in small_dims(), seed in any::<u64>()) {
        let s = state(&dims, seed);
        let tol = ToleranceConfig::default();
        let oracle = oracle_schmidt(&s, &tol).unwrap();
        for k in 0..dims.len() {
            let unf = build_unfolding(&s, k).unwrap();
            let large = gram_large(&unf).eigenvalues().unwrap();
            let small = gram_small(&unf).eigenvalues().unwrap();
            let shared = small.len().min(large.len());
            for i in 0..shared {
                prop_assert!((small[i] - large[i]).abs() < 1e-12);
            }
            prop_assert!(small[shared..].iter().chain(&large[shared..]).all(|x| x.abs() < 1e-12));
            for (l, sigma) in small.iter().zip(&oracle.singular_values[k]) {
                prop_assert!((l - sigma * sigma).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn verdicts_ignore_global_phase(dims in small_dims(), seed in any::<u64>(), product in any::<bool>()) {
        let p = DimensionProfile::new(&dims).unwrap();
        let s = if product {
            random_product_with_factors(&p, seed).unwrap().0
        } else {
            random_state(&p, seed).unwrap()
        };
        let tol = ToleranceConfig::default();
        for theta in [std::f64::consts::PI / 7.0, 1.0, std::f64::consts::PI] {
            let t = s.with_global_phase(theta);
            for c in Criterion::ALL {
                let a = run_report(&s, &tol, c, ScanMode::Exhaustive).unwrap();
                let b = run_report(&t, &tol, c, ScanMode::Exhaustive).unwrap();
                prop_assert_eq!(a.separable, b.separable);
                prop_assert_eq!(a.separable, product);
                // squared, since the rank ratio of a product is sqrt(rounding noise)
                for (x, y) in a.per_party.iter().zip(&b.per_party) {
                    let (x, y) = (x.unwrap(), y.unwrap());
                    prop_assert!((x * x - y * y).abs() < 1e-12, "{c}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn verdicts_follow_party_permutations(dims in prop::collection::vec(2usize..=3, 3), seed in any::<u64>(), product in any::<bool>()) {
        let p = DimensionProfile::new(&dims).unwrap();
        let s = if product {
            random_product_with_factors(&p, seed).unwrap().0
        } else {
            random_state(&p, seed).unwrap()
        };
        let tol = ToleranceConfig::default();
        let base = run_report(&s, &tol, Criterion::Rank, ScanMode::Exhaustive).unwrap();
        for perm in [[1, 0, 2], [2, 0, 1], [2, 1, 0]] {
            let t = s.permute_parties(&perm).unwrap();
            let r = run_report(&t, &tol, Criterion::Rank, ScanMode::Exhaustive).unwrap();
            prop_assert_eq!(r.separable, base.separable);
            for (k, &old) in perm.iter().enumerate() {
                let (x, y) = (r.per_party[k].unwrap(), base.per_party[old].unwrap());
                prop_assert!((x * x - y * y).abs() < 1e-12);
            }
            for c in Criterion::ALL {
                prop_assert_eq!(run_report(&t, &tol, c, ScanMode::FirstViolation).unwrap().separable, product);
            }
        }
    }

    #[test]
    fn witnesses_survive_recheck(dims in small_dims(), seed in any::<u64>()) {
        let s = state(&dims, seed);
        let tol = ToleranceConfig::default();
        for c in Criterion::ALL {
            for mode in [ScanMode::FirstViolation, ScanMode::Exhaustive] {
                let report = run_report(&s, &tol, c, mode).unwrap();
                let w = report.witness.expect("random states are entangled");
                let (violation, threshold) = w.recheck(&s, &tol).unwrap();
                prop_assert!(violation > threshold, "{c}: {violation} <= {threshold}");
            }
        }
    }

    #[test]
    fn factors_rebuild_the_state(dims in prop::collection::vec(2usize..=4, 2..=4), seed in any::<u64>()) {
        let p = DimensionProfile::new(&dims).unwrap();
        let (s, truth) = random_product_with_factors(&p, seed).unwrap();
        let tol = ToleranceConfig::default();
        let f = extract_factors(&s, &tol).unwrap();
        prop_assert!(f.fidelity >= 1.0 - 1e-9);
        let rebuilt = product_state(&f.factors, &tol).unwrap();
        prop_assert!(rebuilt.fidelity(&s).unwrap() >= 1.0 - 1e-9);
        for (got, want) in f.factors.iter().zip(&truth) {
            prop_assert!(got.fidelity(want).unwrap() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn dense_and_spectral_determinants_agree(dims in prop::collection::vec(2usize..=4, 2..=3), seed in any::<u64>()) {
        let s = state(&dims, seed);
        for k in 0..dims.len() {
            let unf = build_unfolding(&s, k).unwrap();
            prop_assume!(unf.rows() <= 64);
            let dense = det_value_dense(&unf, &mut NoTally).unwrap();
            let spectral = det_value_spectral(&unf).unwrap();
            prop_assert!((dense - spectral).abs() < 1e-10, "{dense} vs {spectral}");
        }
    }
}
