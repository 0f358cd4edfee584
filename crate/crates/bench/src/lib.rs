//! Fixtures shared by the benchmarks.

use pjlab_core::random::{random_boolean, random_collection};
use pjlab_core::rng::stream_rng;
use pjlab_core::{Builtin, FunctionRep, JuntaCollection, ProductSpace, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A random Boolean table on `{0,1}^n` at bias `1/3`.
pub fn random_table_exact(n: usize, seed: u64) -> FunctionRep<Rational> {
    let space = ProductSpace::p_biased(n, q(1, 3)).unwrap();
    random_boolean(&mut stream_rng(seed, n as u64), &space).unwrap()
}

pub fn random_table_float(n: usize, seed: u64) -> FunctionRep<f64> {
    let space = ProductSpace::p_biased(n, 1.0 / 3.0).unwrap();
    random_boolean(&mut stream_rng(seed, n as u64), &space).unwrap()
}

/// OR at `p = 1/n` with its one-coordinate collection.
pub fn or_pair(n: usize) -> (FunctionRep<Rational>, JuntaCollection<Rational>) {
    let space = ProductSpace::p_biased(n, q(1, n as i64)).unwrap();
    let f = FunctionRep::builtin(space.clone(), Builtin::Or).unwrap().materialize().unwrap();
    (f, JuntaCollection::or_example(space).unwrap())
}

/// Majority on `{0,1}^n` with a random collection of arity at most 2.
pub fn random_pair(n: usize, seed: u64) -> (FunctionRep<Rational>, JuntaCollection<Rational>) {
    let space = ProductSpace::p_biased(n, q(1, 2)).unwrap();
    let f = FunctionRep::builtin(space.clone(), Builtin::Majority).unwrap().materialize().unwrap();
    let c = random_collection(&mut stream_rng(seed, 0), &space, 2).unwrap();
    (f, c)
}
