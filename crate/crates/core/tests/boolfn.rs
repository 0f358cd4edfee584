mod common;

use common::*;
use pjlab_core::{Builtin, Error, FunctionRep, PartialPoint, ProductSpace, Subset};
use proptest::prelude::*;

fn cube(n: usize) -> ProductSpace<pjlab_core::Rational> {
    ProductSpace::p_biased(n, q(1, 2)).unwrap()
}

fn ones(f: &FunctionRep<pjlab_core::Rational>) -> Vec<Vec<usize>> {
    points(&f.space().arities()).into_iter().filter(|x| f.eval(x) == q(1, 1)).collect()
}

#[test]
fn builtin_truth_tables() {
    let or = FunctionRep::builtin(cube(4), Builtin::Or).unwrap();
    assert_eq!(ones(&or).len(), 15);
    let even = FunctionRep::builtin(cube(3), Builtin::ParityEven).unwrap();
    assert_eq!(ones(&even), vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    let d = FunctionRep::builtin(cube(3), Builtin::Dictator(0)).unwrap();
    assert!(points(&[2, 2, 2]).iter().all(|x| d.eval(x) == q(x[0] as i64, 1)));
    let t = FunctionRep::builtin(cube(4), Builtin::Tribes(2)).unwrap();
    assert_eq!(ones(&t).len(), 7);
}

#[test]
fn builtins_need_binary_alphabets() {
    let ternary: ProductSpace<pjlab_core::Rational> = ProductSpace::uniform(2, 3).unwrap();
    assert!(matches!(
        FunctionRep::builtin(ternary.clone(), Builtin::Or),
        Err(Error::AlphabetNotBinary { .. })
    ));
    assert!(FunctionRep::builtin(ternary, Builtin::Const(true)).is_ok());
}

#[test]
fn restriction_examples() {
    let or = FunctionRep::builtin(cube(3), Builtin::Or).unwrap();
    let r = or.restrict(&PartialPoint::new(Subset::singleton(0), vec![1]).unwrap()).unwrap();
    assert!(r.values().unwrap().iter().all(|v| *v == q(1, 1)));
    let r = or.restrict(&PartialPoint::new(Subset::singleton(0), vec![0]).unwrap()).unwrap();
    let or2 = FunctionRep::builtin(cube(2), Builtin::Or).unwrap();
    assert_eq!(r.values().unwrap(), or2.values().unwrap());

    let even = FunctionRep::builtin(cube(3), Builtin::ParityEven).unwrap();
    let r = even.restrict(&PartialPoint::new(Subset::singleton(2), vec![1]).unwrap()).unwrap();
    let odd = FunctionRep::builtin(cube(2), Builtin::Parity).unwrap();
    assert_eq!(r.values().unwrap(), odd.values().unwrap());
}

#[test]
fn restriction_errors() {
    let or = FunctionRep::builtin(cube(3), Builtin::Or).unwrap();
    assert!(or.restrict(&PartialPoint::new(Subset::singleton(5), vec![1]).unwrap()).is_err());
    assert!(or.restrict(&PartialPoint::new(Subset::singleton(1), vec![2]).unwrap()).is_err());
}

#[test]
fn monotonicity_examples() {
    let inc = |b| FunctionRep::builtin(cube(3), b).unwrap().is_increasing().unwrap();
    assert!(inc(Builtin::Or));
    assert!(inc(Builtin::Majority));
    assert!(!inc(Builtin::ParityEven));
    assert!(!FunctionRep::builtin(cube(2), Builtin::ParityEven).unwrap().is_increasing().unwrap());

    // Majority of three: 12 covering pairs, none decreasing.
    let maj = FunctionRep::builtin(cube(3), Builtin::Majority).unwrap();
    let mut pairs = 0;
    for x in points(&[2, 2, 2]) {
        for i in 0..3 {
            if x[i] == 0 {
                let mut y = x.clone();
                y[i] = 1;
                pairs += 1;
                assert!(maj.eval(&x) <= maj.eval(&y));
            }
        }
    }
    assert_eq!(pairs, 12);
}

fn split(n: usize, t_mask: u32, r_mask: u32) -> (Subset, Subset) {
    let t = Subset::from_indices((0..n).filter(|&i| t_mask >> i & 1 == 1));
    let r = Subset::from_indices((0..n).filter(|&i| r_mask >> i & 1 == 1)).difference(t);
    (t, r)
}

fn point_on(space: &ProductSpace<pjlab_core::Rational>, s: Subset, seed: u64) -> PartialPoint {
    let values = s.iter().enumerate().map(|(k, i)| (seed >> (2 * k)) as usize % space.arity(i)).collect();
    PartialPoint::new(s, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn restrict_by_nothing_is_identity(f in any_function_strategy(4)) {
        prop_assert_eq!(f.restrict(&PartialPoint::empty()).unwrap(), f);
    }

    #[test]
    fn restrictions_compose(f in any_function_strategy(4), tm in 0u32..16, rm in 0u32..16, seed in any::<u64>()) {
        let n = f.n();
        let space = f.space().clone();
        let (t, r) = split(n, tm, rm);
        let y = point_on(&space, t, seed);
        let z = point_on(&space, r, seed >> 16);
        let rest = space.full().difference(t);
        let nested = f
            .restrict(&y).unwrap()
            .restrict(&PartialPoint::new(r.compress(rest), z.values().to_vec()).unwrap()).unwrap();
        let direct = f.restrict(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(nested.values().unwrap(), direct.values().unwrap());
        // Pointwise against the definition g(x) = f(y, x).
        let free: Vec<usize> = space.full().difference(t.union(r)).iter().collect();
        for x in points(&direct.space().arities()) {
            let mut full = vec![0; n];
            for (i, v) in y.iter().chain(z.iter()) {
                full[i] = v;
            }
            for (k, &i) in free.iter().enumerate() {
                full[i] = x[k];
            }
            prop_assert_eq!(direct.eval(&x), f.eval(&full));
        }
    }

    #[test]
    fn increasing_survives_restriction(
        f in pbiased_space_strategy(5).prop_flat_map(increasing_on),
        tm in 0u32..32,
        seed in any::<u64>(),
    ) {
        prop_assert!(f.is_increasing().unwrap());
        let (t, _) = split(f.n(), tm, 0);
        let y = point_on(f.space(), t, seed);
        prop_assert!(f.restrict(&y).unwrap().is_increasing().unwrap());
    }

    #[test]
    fn lazy_builtins_restrict_like_tables(n in 2usize..6, b in 0usize..5, tm in 0u32..32, seed in any::<u64>()) {
        let builtin = [Builtin::Or, Builtin::Majority, Builtin::ParityEven, Builtin::Dictator(1), Builtin::Threshold(2)][b].clone();
        let f = FunctionRep::builtin(cube(n), builtin).unwrap();
        let (t, _) = split(n, tm, 0);
        let y = point_on(f.space(), t, seed);
        let lazy = f.restrict(&y).unwrap();
        let table = f.materialize().unwrap().restrict(&y).unwrap();
        prop_assert_eq!(lazy.values().unwrap(), table.values().unwrap());
    }
}
