//! Random instances for invariant checks: spaces, functions, collections.

use rand::Rng;

use crate::boolfn::{FunctionRep, RangeTag};
use crate::error::Result;
use crate::pseudojunta::{AtomPartition, Detector, JuntaCollection};
use crate::scalar::Scalar;
use crate::space::{PartialPoint, ProductSpace};
use crate::subset::{subsets_up_to, Subset};

/// Biases used by the randomized suites.
pub const BIASES: [(i64, i64); 3] = [(1, 4), (1, 3), (1, 2)];

pub fn random_bias<T: Scalar, R: Rng>(rng: &mut R) -> T {
    let (a, b) = BIASES[rng.random_range(0..BIASES.len())];
    T::from_ratio(a, b)
}

pub fn random_pbiased_space<T: Scalar, R: Rng>(rng: &mut R, n: usize) -> Result<ProductSpace<T>> {
    ProductSpace::p_biased(n, random_bias(rng))
}

/// Alphabet sizes in `2..=max_arity`, weights proportional to integers in `1..=5`.
pub fn random_finite_space<T: Scalar, R: Rng>(
    rng: &mut R,
    n: usize,
    max_arity: usize,
) -> Result<ProductSpace<T>> {
    let weights = (0..n)
        .map(|_| {
            let m = rng.random_range(2..=max_arity.max(2));
            let raw: Vec<i64> = (0..m).map(|_| rng.random_range(1..=5)).collect();
            let total: i64 = raw.iter().sum();
            raw.into_iter().map(|w| T::from_ratio(w, total)).collect()
        })
        .collect();
    ProductSpace::new(weights)
}

pub fn random_boolean<T: Scalar, R: Rng>(rng: &mut R, space: &ProductSpace<T>) -> Result<FunctionRep<T>> {
    let len = space.check_enumerable(space.full())?;
    let bits: Vec<bool> = (0..len).map(|_| rng.random_bool(0.5)).collect();
    FunctionRep::from_bools(space.clone(), &bits)
}

/// Values in `{-2, -7/4, .., 2}`.
pub fn random_real<T: Scalar, R: Rng>(rng: &mut R, space: &ProductSpace<T>) -> Result<FunctionRep<T>> {
    let len = space.check_enumerable(space.full())?;
    let values = (0..len).map(|_| T::from_ratio(rng.random_range(-8..=8), 4)).collect();
    FunctionRep::from_table(space.clone(), values, RangeTag::Real)
}

/// The up-set generated by a few random points of a binary space.
pub fn random_increasing<T: Scalar, R: Rng>(rng: &mut R, space: &ProductSpace<T>) -> Result<FunctionRep<T>> {
    space.require_binary()?;
    let n = space.n();
    let count = rng.random_range(0..=3);
    let gens: Vec<u32> = (0..count).map(|_| rng.random_range(0..(1u32 << n))).collect();
    FunctionRep::from_predicate(space.clone(), |x| {
        let m = x.iter().fold(0u32, |acc, &v| (acc << 1) | v as u32);
        gens.iter().any(|&g| m & g ^ g == 0)
    })
}

/// `1 - g` for a random increasing `g`.
pub fn random_decreasing<T: Scalar, R: Rng>(rng: &mut R, space: &ProductSpace<T>) -> Result<FunctionRep<T>> {
    let g = random_increasing(rng, space)?;
    let values = g.values()?.iter().map(|v| T::one() - v).collect();
    FunctionRep::from_table(space.clone(), values, RangeTag::Boolean)
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Subset {
    Subset::from_indices((0..n).filter(|_| rng.random_bool(0.5)))
}

pub fn random_partial_point<T: Scalar, R: Rng>(
    rng: &mut R,
    space: &ProductSpace<T>,
    s: Subset,
) -> PartialPoint {
    let values = s.iter().map(|i| rng.random_range(0..space.arity(i))).collect();
    PartialPoint::new(s, values).expect("values match support")
}

/// Each `S` with `|S| ≤ max_arity` gets a detector with probability 1/2:
/// a constant, the all-ones indicator (binary spaces) or a random table.
pub fn random_collection<T: Scalar, R: Rng>(
    rng: &mut R,
    space: &ProductSpace<T>,
    max_arity: usize,
) -> Result<JuntaCollection<T>> {
    let mut c = JuntaCollection::new(space.clone());
    for s in subsets_up_to(space.n(), max_arity.min(space.n())) {
        if !rng.random_bool(0.5) {
            continue;
        }
        let size = space.check_enumerable(s)?;
        let d = match rng.random_range(0..4) {
            0 => Detector::Const(true),
            1 if space.is_binary() => Detector::AllOnes,
            _ => Detector::Table((0..size).map(|_| rng.random_bool(0.3)).collect()),
        };
        c.insert(s, d)?;
    }
    Ok(c)
}

/// A `𝒥`-measurable Boolean function: one random bit per atom.
pub fn random_measurable<T: Scalar, R: Rng>(
    rng: &mut R,
    space: &ProductSpace<T>,
    atoms: &AtomPartition<T>,
) -> Result<FunctionRep<T>> {
    let bits: Vec<bool> = (0..atoms.len()).map(|_| rng.random_bool(0.5)).collect();
    let values: Vec<bool> = atoms.point_atom.iter().map(|&a| bits[a]).collect();
    FunctionRep::from_bools(space.clone(), &values)
}
