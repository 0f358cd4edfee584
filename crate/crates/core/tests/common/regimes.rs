//! Small instances for the general construction at `k ∈ {1, 2}`.
//!
//! Only `k` is fixed; every other constant follows from the schedule, so the
//! relations the construction assumes hold exactly. Some coordinates carry a symbol
//! of mass below `δ²`, which is what makes `ψ_S` differ from 1.

use num_bigint::BigInt;
use num_traits::One;
use pjlab_core::constructor::{Constants, DEFAULT_BIT_BUDGET};
use pjlab_core::random::random_boolean;
use pjlab_core::rng::stream_rng;
use pjlab_core::{schedule, ConstructOptions, FunctionRep, Mode, Overrides, ProductSpace, Rational};

use super::q;

pub fn overrides(k: usize) -> Overrides {
    Overrides::parse([format!("k={k}").as_str()]).unwrap()
}

pub fn options(k: usize) -> ConstructOptions {
    ConstructOptions::new(Mode::General, q(1, 2)).with_overrides(overrides(k))
}

pub fn constants(k: usize) -> Constants<Rational> {
    schedule(&BigInt::one(), &q(1, 2), Mode::General, &overrides(k))
        .unwrap()
        .constants(DEFAULT_BIT_BUDGET)
        .unwrap()
}

fn rare(w: &Rational) -> Vec<Rational> {
    vec![Rational::one() - w, w.clone()]
}

/// `2^{-b}` with `b` the least integer such that `2^{-b} < δ`.
pub fn dyadic_below_delta(k: usize) -> (i32, Rational) {
    let d = constants(k).delta;
    let mut b = (d.denom().bits() as i32 - d.numer().bits() as i32 - 1).max(1);
    let two = q(2, 1);
    while two.pow(-b) >= d {
        b += 1;
    }
    (b, two.pow(-b))
}

/// Spaces on at most three coordinates, one of which has a symbol of mass
/// just below `δ²`.
///
/// The rare mass is a power of two and only one coordinate carries it, which
/// keeps the exact arithmetic cheap. At `k = 1` one space puts the rare mass
/// exactly at `δ²`, where `ψ` compares with `≥`.
pub fn spaces(k: usize) -> Vec<ProductSpace<Rational>> {
    let (_, e) = dyadic_below_delta(k);
    let w = e.clone() * &e;
    let half = vec![q(1, 2), q(1, 2)];
    let third = vec![q(2, 3), q(1, 3)];
    let mut weights = vec![
        vec![rare(&w)],
        vec![rare(&w), half.clone()],
        vec![third.clone(), rare(&w)],
        vec![vec![q(2, 3) - &w, q(1, 3), w.clone()], half.clone()],
        vec![rare(&w), half.clone(), third],
    ];
    if k == 1 {
        let d = constants(k).delta;
        weights.insert(3, vec![half, rare(&(d.clone() * &d))]);
    }
    weights.into_iter().map(|w| ProductSpace::new(w).unwrap()).collect()
}

/// Every Boolean function on spaces with at most four points, and a seeded
/// sample of eight on the larger ones.
pub fn instances(k: usize) -> Vec<FunctionRep<Rational>> {
    let mut out = Vec::new();
    for (i, space) in spaces(k).into_iter().enumerate() {
        let len: usize = space.arities().iter().product();
        if len <= 4 {
            for t in 0u32..(1 << len) {
                let bits: Vec<bool> = (0..len).map(|j| t >> j & 1 == 1).collect();
                out.push(FunctionRep::from_bools(space.clone(), &bits).unwrap());
            }
        } else {
            let mut rng = stream_rng(k as u64, i as u64);
            for _ in 0..8 {
                out.push(random_boolean(&mut rng, &space).unwrap());
            }
        }
    }
    out
}
