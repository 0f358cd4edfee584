mod common;

use common::*;
use num_traits::{One, Signed, Zero};
use pjlab_core::{
    influence_exact, influence_mc, influences_exact, influences_spectral, russo_sweep,
    total_influence_spectral, walsh_expand, Builtin, Error, FunctionRep, ProductSpace, Rational, Scalar,
};
use proptest::prelude::*;

fn pow(x: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |a, _| a * x)
}

#[test]
fn closed_forms_for_or_and_parity() {
    for n in 1..=6usize {
        for (a, d) in [(1, 2), (1, 5), (3, 4)] {
            let p = q(a, d);
            let qq = Rational::one() - &p;
            let space = ProductSpace::p_biased(n, p.clone()).unwrap();
            let or = FunctionRep::builtin(space.clone(), Builtin::Or).unwrap();
            let parity = FunctionRep::builtin(space.clone(), Builtin::Parity).unwrap();
            let two = Rational::from_integer(2.into());
            for j in 0..n {
                assert_eq!(naive_influence(&or, j), two.clone() * &p * pow(&qq, n));
                assert_eq!(influence_exact(&or, j).unwrap(), two.clone() * &p * pow(&qq, n));
                assert_eq!(influence_exact(&parity, j).unwrap(), two.clone() * &p * &qq);
            }
        }
    }
}

#[test]
fn majority_three_influence() {
    let f = FunctionRep::builtin(ProductSpace::p_biased(3, q(1, 2)).unwrap(), Builtin::Majority).unwrap();
    let e = walsh_expand(&f).unwrap();
    for j in 0..3 {
        assert_eq!(naive_influence(&f, j), q(1, 4));
        assert_eq!(influences_spectral(&e).per_coord[j], q(1, 4));
    }
}

#[test]
fn dictator_spectral() {
    let p = q(2, 7);
    let f =
        FunctionRep::builtin(ProductSpace::p_biased(3, p.clone()).unwrap(), Builtin::Dictator(1)).unwrap();
    let r = influences_spectral(&walsh_expand(&f).unwrap());
    let i1 = Rational::from_integer(2.into()) * &p * (Rational::one() - &p);
    assert_eq!(r.per_coord, vec![q(0, 1), i1.clone(), q(0, 1)]);
    assert_eq!(r.total, i1);
}

#[test]
fn symmetric_fast_path_matches_enumeration() {
    let builtins = [
        Builtin::Or,
        Builtin::And,
        Builtin::Parity,
        Builtin::ParityEven,
        Builtin::Majority,
        Builtin::Threshold(2),
        Builtin::Const(true),
    ];
    for n in 1..=7usize {
        for (a, d) in [(1, 9), (1, 3), (1, 2), (5, 6)] {
            let space = ProductSpace::p_biased(n, q(a, d)).unwrap();
            for b in &builtins {
                let lazy = FunctionRep::builtin(space.clone(), b.clone()).unwrap();
                let table = lazy.materialize().unwrap();
                assert_eq!(
                    influences_exact(&lazy).unwrap().per_coord,
                    influences_exact(&table).unwrap().per_coord,
                    "{b} n={n}"
                );
                assert_eq!(lazy.expectation().unwrap(), table.expectation().unwrap(), "{b} n={n}");
            }
        }
    }
}

#[test]
fn monte_carlo_examples() {
    let space = ProductSpace::p_biased(10, 0.1f64).unwrap();
    let or = FunctionRep::builtin(space, Builtin::Or).unwrap();
    let truth = 2.0 * 0.1 * 0.9f64.powi(10);
    let est = influence_mc(&or, 3, 42, 100_000).unwrap();
    assert!((est.estimate - truth).abs() <= 4.0 * est.std_error, "{est:?} vs {truth}");

    let dict =
        FunctionRep::builtin(ProductSpace::p_biased(4, 0.5f64).unwrap(), Builtin::Dictator(0)).unwrap();
    let est = influence_mc(&dict, 0, 7, 100_000).unwrap();
    assert!((est.estimate - 0.5).abs() <= 4.0 * est.std_error);

    let one = FunctionRep::builtin(ProductSpace::p_biased(4, 0.3f64).unwrap(), Builtin::Const(true)).unwrap();
    let est = influence_mc(&one, 2, 1, 1000).unwrap();
    assert_eq!((est.estimate, est.std_error), (0.0, 0.0));

    let a = influence_mc(&or, 5, 99, 1000).unwrap();
    assert_eq!(a, influence_mc(&or, 5, 99, 1000).unwrap());
}

#[test]
fn russo_or_five() {
    let f = FunctionRep::builtin(ProductSpace::p_biased(5, 0.5f64).unwrap(), Builtin::Or).unwrap();
    let rows = russo_sweep(&f, &[0.2], &1e-4).unwrap();
    let truth = 10.0 * 0.2 * 0.8f64.powi(5);
    assert!((rows[0].russo_lhs - truth).abs() < 1e-6);
    assert!((rows[0].total_influence - truth).abs() < 1e-12);
    assert!((rows[0].mu - (1.0 - 0.8f64.powi(5))).abs() < 1e-12);
}

#[test]
fn russo_dictator_exact() {
    // μ_p is linear in p, so the central difference is exact.
    let f = FunctionRep::builtin(ProductSpace::p_biased(3, q(1, 2)).unwrap(), Builtin::Dictator(2)).unwrap();
    let grid: Vec<Rational> = (1..10).map(|i| q(i, 10)).collect();
    for row in russo_sweep(&f, &grid, &q(1, 10_000)).unwrap() {
        assert!(row.residual.is_zero());
        assert_eq!(row.mu, row.p);
    }
    let c = FunctionRep::builtin(ProductSpace::p_biased(3, q(1, 2)).unwrap(), Builtin::Const(true)).unwrap();
    for row in russo_sweep(&c, &grid, &q(1, 10_000)).unwrap() {
        assert!(row.russo_lhs.is_zero() && row.total_influence.is_zero());
    }
}

#[test]
fn russo_rejects_non_increasing() {
    let f = FunctionRep::builtin(ProductSpace::p_biased(3, q(1, 2)).unwrap(), Builtin::Parity).unwrap();
    assert_eq!(russo_sweep(&f, &[q(1, 2)], &q(1, 100)), Err(Error::NotIncreasing));
}

#[test]
fn russo_exact_mode_error_is_second_order() {
    // Exact central differences of a degree-n polynomial: the error is O(h²).
    let f = FunctionRep::builtin(ProductSpace::p_biased(5, q(1, 2)).unwrap(), Builtin::Majority).unwrap();
    let big = russo_sweep(&f, &[q(3, 10)], &q(1, 100)).unwrap()[0].residual.clone();
    let small = russo_sweep(&f, &[q(3, 10)], &q(1, 1000)).unwrap()[0].residual.clone();
    assert!(!big.is_zero());
    let ratio = big / small;
    assert!(ratio > q(90, 1) && ratio < q(110, 1), "{ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn definitional_equals_spectral(f in any_function_strategy(4)) {
        let e = walsh_expand(&f).unwrap();
        let exact = influences_exact(&f).unwrap();
        prop_assert_eq!(&exact.per_coord, &influences_spectral(&e).per_coord);
        prop_assert_eq!(&exact.total, &total_influence_spectral(&e));
        for j in 0..f.n() {
            prop_assert_eq!(&exact.per_coord[j], &naive_influence(&f, j));
        }
    }

    #[test]
    fn boolean_influences_are_probabilities(f in boolean_strategy(4)) {
        let r = influences_exact(&f).unwrap();
        for v in &r.per_coord {
            prop_assert!(!v.is_negative() && *v <= Rational::one());
        }
        prop_assert_eq!(r.total, r.per_coord.iter().fold(Rational::zero(), |a, b| a + b));
    }

    #[test]
    fn influences_are_stable(
        (f, flips) in boolean_strategy(4).prop_flat_map(|f| {
            let len = f.values().unwrap().len();
            (Just(f), prop::collection::vec(0..len, 1..4))
        })
    ) {
        let mut bits: Vec<bool> = f.values().unwrap().iter().map(|v| v.is_one()).collect();
        for i in flips {
            bits[i] = !bits[i];
        }
        let g = FunctionRep::from_bools(f.space().clone(), &bits).unwrap();
        let dist = f.l1_distance(&g).unwrap();
        let (a, b) = (influences_exact(&f).unwrap(), influences_exact(&g).unwrap());
        for j in 0..f.n() {
            prop_assert!((a.per_coord[j].clone() - &b.per_coord[j]).abs() <= Rational::from_integer(2.into()) * &dist);
        }
    }

    #[test]
    fn float_mode_tracks_exact(f in boolean_strategy(4)) {
        let exact = influences_exact(&f).unwrap();
        let fs = ProductSpace::new((0..f.n()).map(|i| f.space().weights(i).iter().map(Scalar::to_f64).collect()).collect()).unwrap();
        let g = FunctionRep::from_table(fs, f.values().unwrap().iter().map(Scalar::to_f64).collect(), f.range()).unwrap();
        let float = influences_exact(&g).unwrap();
        for j in 0..f.n() {
            prop_assert!((exact.per_coord[j].to_f64() - float.per_coord[j]).abs() < 1e-12);
        }
    }
}
