//! Brute-force oracles and proptest strategies shared by the integration tests.
//!
//! The oracles use nothing from the library beyond space construction and
//! function tables: every sum is a plain loop over enumerated points.

#![allow(dead_code)]

use num_traits::{One, Zero};
use pjlab_core::{FunctionRep, ProductSpace, RangeTag, Rational};
use proptest::prelude::*;

pub mod regimes;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub const BIASES: [(i64, i64); 3] = [(1, 4), (1, 3), (1, 2)];

/// All points of `X^n`, first coordinate most significant.
pub fn points(arities: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &m in arities {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..m).map(move |v| {
                    let mut p = p.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn weights(space: &ProductSpace<Rational>) -> Vec<Vec<Rational>> {
    (0..space.n()).map(|i| space.weights(i).to_vec()).collect()
}

pub fn mass(w: &[Vec<Rational>], x: &[usize], coords: impl Iterator<Item = usize>) -> Rational {
    coords.fold(Rational::one(), |acc, i| acc * &w[i][x[i]])
}

/// `(point, μ(point), f(point))` for every point.
pub fn table(f: &FunctionRep<Rational>) -> Vec<(Vec<usize>, Rational, Rational)> {
    let space = f.space();
    let w = weights(space);
    points(&space.arities())
        .into_iter()
        .map(|x| {
            let m = mass(&w, &x, 0..x.len());
            let v = f.eval(&x);
            (x, m, v)
        })
        .collect()
}

/// `∫ f(y_T, x_{[n]\T}) dx_{[n]\T}` by direct summation.
pub fn fiber_mean(f: &FunctionRep<Rational>, t: u32, y: &[usize]) -> Rational {
    let space = f.space();
    let n = space.n();
    let w = weights(space);
    let in_t = |i: usize| t >> i & 1 == 1;
    points(&space.arities())
        .into_iter()
        .filter(|z| (0..n).all(|i| !in_t(i) || z[i] == y[i]))
        .fold(Rational::zero(), |acc, z| acc + mass(&w, &z, (0..n).filter(|&i| !in_t(i))) * f.eval(&z))
}

/// `F_S(y) = Σ_{T⊆S} (-1)^{|S\T|} ∫ f(y_T, x_{[n]\T}) dx` with `S` a bitmask
/// (bit `i` is coordinate `i`) and `y` a full point.
pub fn naive_component(f: &FunctionRep<Rational>, s: u32, y: &[usize]) -> Rational {
    let mut acc = Rational::zero();
    let mut t = s;
    loop {
        let sign = if (s & !t).count_ones().is_multiple_of(2) { 1 } else { -1 };
        acc += Rational::from_integer(sign.into()) * fiber_mean(f, t, y);
        if t == 0 {
            break;
        }
        t = (t - 1) & s;
    }
    acc
}

/// `Σ_x μ(x) Σ_b w_j(b) (f(x) - f(x with x_j = b))²`.
pub fn naive_influence(f: &FunctionRep<Rational>, j: usize) -> Rational {
    let w = weights(f.space());
    let mut acc = Rational::zero();
    for (x, m, v) in table(f) {
        for (b, wb) in w[j].iter().enumerate() {
            let mut x2 = x.clone();
            x2[j] = b;
            let d = v.clone() - f.eval(&x2);
            acc += m.clone() * wb * &d * &d;
        }
    }
    acc
}

pub fn space_strategy(max_n: usize) -> impl Strategy<Value = ProductSpace<Rational>> {
    prop_oneof![
        (1..=max_n, 0..BIASES.len()).prop_map(|(n, b)| {
            let (a, d) = BIASES[b];
            ProductSpace::p_biased(n, q(a, d)).unwrap()
        }),
        prop::collection::vec(prop::collection::vec(1i64..=5, 2..=3), 1..=max_n).prop_map(|rows| {
            let w = rows
                .into_iter()
                .map(|r| {
                    let total: i64 = r.iter().sum();
                    r.into_iter().map(|x| q(x, total)).collect()
                })
                .collect();
            ProductSpace::new(w).unwrap()
        }),
    ]
}

pub fn pbiased_space_strategy(max_n: usize) -> impl Strategy<Value = ProductSpace<Rational>> {
    (1..=max_n, 0..BIASES.len()).prop_map(|(n, b)| {
        let (a, d) = BIASES[b];
        ProductSpace::p_biased(n, q(a, d)).unwrap()
    })
}

pub fn boolean_on(space: ProductSpace<Rational>) -> impl Strategy<Value = FunctionRep<Rational>> {
    let len = space.outcome_count(space.full()) as usize;
    prop::collection::vec(any::<bool>(), len)
        .prop_map(move |bits| FunctionRep::from_bools(space.clone(), &bits).unwrap())
}

pub fn real_on(space: ProductSpace<Rational>) -> impl Strategy<Value = FunctionRep<Rational>> {
    let len = space.outcome_count(space.full()) as usize;
    prop::collection::vec(-8i64..=8, len).prop_map(move |v| {
        let values = v.into_iter().map(|x| q(x, 4)).collect();
        FunctionRep::from_table(space.clone(), values, RangeTag::Real).unwrap()
    })
}

pub fn boolean_strategy(max_n: usize) -> impl Strategy<Value = FunctionRep<Rational>> {
    space_strategy(max_n).prop_flat_map(boolean_on)
}

pub fn any_function_strategy(max_n: usize) -> impl Strategy<Value = FunctionRep<Rational>> {
    space_strategy(max_n).prop_flat_map(|s| prop_oneof![boolean_on(s.clone()), real_on(s)])
}

/// Increasing Boolean function: the up-set of a list of generator masks.
pub fn increasing_on(space: ProductSpace<Rational>) -> impl Strategy<Value = FunctionRep<Rational>> {
    let n = space.n();
    prop::collection::vec(0u32..(1 << n), 0..4).prop_map(move |gens| {
        FunctionRep::from_predicate(space.clone(), |x| {
            let m = x.iter().fold(0u32, |acc, &v| (acc << 1) | v as u32);
            gens.iter().any(|&g| m & g ^ g == 0)
        })
        .unwrap()
    })
}
