//! Finite product probability spaces.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::subset::{Subset, MAX_COORDS};

/// Default cap on the number of outcomes enumerated exactly (2^20).
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

/// Float-mode tolerance on the per-coordinate weight sum.
pub const FLOAT_NORMALIZATION_TOL: f64 = 1e-12;

/// A product of finite probability spaces `X_0 × .. × X_{n-1}`.
///
/// Coordinate `i` has alphabet `{0, .., m_i - 1}` with strictly positive
/// weights summing to one. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpace<T> {
    weights: Vec<Vec<T>>,
    enum_cap: u64,
}

impl<T: Scalar> ProductSpace<T> {
    pub fn new(weights: Vec<Vec<T>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        if weights.len() > MAX_COORDS {
            return Err(Error::InvalidParameter(format!("at most {MAX_COORDS} coordinates are supported")));
        }
        for (coord, w) in weights.iter().enumerate() {
            if w.len() < 2 {
                return Err(Error::AlphabetTooSmall { coord });
            }
            let one = T::one();
            for x in w {
                if *x <= T::zero() || *x >= one {
                    return Err(Error::NonPositiveWeight { coord, weight: x.to_string() });
                }
            }
            let sum = w.iter().fold(T::zero(), |acc, x| acc + x);
            if !sum.approx_eq(&one, FLOAT_NORMALIZATION_TOL) {
                return Err(Error::WeightsNotNormalized { coord, sum: sum.to_string() });
            }
        }
        Ok(ProductSpace { weights, enum_cap: DEFAULT_ENUM_CAP })
    }

    /// `{0,1}^n` with `Pr[x_i = 1] = p`.
    pub fn p_biased(n: usize, p: T) -> Result<Self> {
        let q = T::one() - &p;
        Self::new(vec![vec![q, p]; n])
    }

    pub fn uniform(n: usize, m: usize) -> Result<Self> {
        Self::new(vec![vec![T::from_ratio(1, m as i64); m]; n])
    }

    pub fn with_enum_cap(mut self, cap: u64) -> Self {
        self.enum_cap = cap;
        self
    }

    pub fn enum_cap(&self) -> u64 {
        self.enum_cap
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n())
    }

    pub fn arity(&self, i: usize) -> usize {
        self.weights[i].len()
    }

    pub fn arities(&self) -> Vec<usize> {
        self.weights.iter().map(Vec::len).collect()
    }

    pub fn weights(&self, i: usize) -> &[T] {
        &self.weights[i]
    }

    pub fn weight(&self, i: usize, symbol: usize) -> &T {
        &self.weights[i][symbol]
    }

    pub fn is_binary(&self) -> bool {
        self.weights.iter().all(|w| w.len() == 2)
    }

    pub fn require_binary(&self) -> Result<()> {
        match self.weights.iter().position(|w| w.len() != 2) {
            Some(coord) => Err(Error::AlphabetNotBinary { coord, size: self.arity(coord) }),
            None => Ok(()),
        }
    }

    /// The common bias `p` when every coordinate is `{0,1}` with the same
    /// weights.
    pub fn common_bias(&self) -> Option<&T> {
        let first = self.weights.first()?;
        if first.len() != 2 {
            return None;
        }
        if self.weights.iter().all(|w| w == first) {
            Some(&first[1])
        } else {
            None
        }
    }

    /// `∏_{i ∈ s} m_i`, saturating.
    pub fn outcome_count(&self, s: Subset) -> u128 {
        s.iter().fold(1u128, |acc, i| acc.saturating_mul(self.arity(i) as u128))
    }

    /// Number of points of `X^s`, or `EnumerationCapExceeded`.
    pub fn check_enumerable(&self, s: Subset) -> Result<usize> {
        let outcomes = self.outcome_count(s);
        if outcomes > self.enum_cap as u128 {
            return Err(Error::EnumerationCapExceeded { outcomes, cap: self.enum_cap });
        }
        Ok(outcomes as usize)
    }

    /// The factor space `X^s`, with its coordinates renumbered `0..|s|`.
    ///
    /// Unlike [`ProductSpace::new`] this admits `s = ∅` (a one-point space).
    pub fn subspace(&self, s: Subset) -> ProductSpace<T> {
        ProductSpace { weights: s.iter().map(|i| self.weights[i].clone()).collect(), enum_cap: self.enum_cap }
    }

    pub fn check_symbol(&self, coord: usize, symbol: usize) -> Result<()> {
        if coord >= self.n() {
            return Err(Error::CoordinateOutOfRange { coord, n: self.n() });
        }
        if symbol >= self.arity(coord) {
            return Err(Error::SymbolOutOfRange { coord, symbol, size: self.arity(coord) });
        }
        Ok(())
    }

    pub fn check_point(&self, y: &PartialPoint) -> Result<()> {
        for (i, v) in y.iter() {
            self.check_symbol(i, v)?;
        }
        Ok(())
    }

    /// `∏_{i ∈ supp y} w_i(y_i)`; 1 for the empty partial point.
    pub fn measure(&self, y: &PartialPoint) -> Result<T> {
        self.check_point(y)?;
        Ok(y.iter().fold(T::one(), |acc, (i, v)| acc * &self.weights[i][v]))
    }

    /// Row-major strides of `X^s` (first member of `s` most significant).
    pub fn strides(&self, s: Subset) -> Vec<usize> {
        let sizes: Vec<usize> = s.iter().map(|i| self.arity(i)).collect();
        strides_of(&sizes)
    }

    /// Measures of all points of `X^s` in enumeration order.
    pub fn measure_table(&self, s: Subset) -> Result<Vec<T>> {
        let total = self.check_enumerable(s)?;
        let mut out = Vec::with_capacity(total);
        out.push(T::one());
        for i in s.iter() {
            let w = &self.weights[i];
            let mut next = Vec::with_capacity(out.len() * w.len());
            for v in &out {
                for wa in w {
                    next.push(v.clone() * wa);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Every point of `X^s` with its measure.
    ///
    /// Order is lexicographic: the lowest coordinate of `s` varies slowest,
    /// symbols increase within a coordinate.
    pub fn enumerate(&self, s: Subset) -> Result<Enumeration<'_, T>> {
        let total = self.check_enumerable(s)?;
        Ok(Enumeration {
            space: self,
            support: s,
            coords: s.indices(),
            current: vec![0; s.len()],
            remaining: total,
        })
    }

    /// Draws `count` independent points of `X^n`.
    ///
    /// Coordinate `i` of every point is drawn from stream `i` of `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Vec<usize>> {
        let mut points = vec![vec![0usize; self.n()]; count];
        for i in 0..self.n() {
            let cdf = self.cdf(i);
            let mut rng = stream_rng(seed, i as u64);
            for p in points.iter_mut() {
                p[i] = draw(&cdf, rng.random::<f64>());
            }
        }
        points
    }

    /// Cumulative float weights of coordinate `i`.
    pub fn cdf(&self, i: usize) -> Vec<f64> {
        let mut acc = 0.0;
        self.weights[i]
            .iter()
            .map(|w| {
                acc += w.to_f64();
                acc
            })
            .collect()
    }

    /// Mixed-radix index of a full point.
    pub fn index_of(&self, point: &[usize]) -> usize {
        point.iter().zip(&self.weights).fold(0usize, |acc, (&v, w)| acc * w.len() + v)
    }

    /// Inverse of [`ProductSpace::index_of`].
    pub fn point_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for i in (0..self.n()).rev() {
            let m = self.arity(i);
            out[i] = index % m;
            index /= m;
        }
        out
    }
}

/// Draws a symbol from cumulative weights.
pub(crate) fn draw(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

pub(crate) fn strides_of(sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; sizes.len()];
    for j in (0..sizes.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * sizes[j + 1];
    }
    strides
}

/// Iterator returned by [`ProductSpace::enumerate`].
pub struct Enumeration<'a, T> {
    space: &'a ProductSpace<T>,
    support: Subset,
    coords: Vec<usize>,
    current: Vec<usize>,
    remaining: usize,
}

impl<T: Scalar> Iterator for Enumeration<'_, T> {
    type Item = (PartialPoint, T);

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let point = PartialPoint { support: self.support, values: self.current.clone() };
        let mass = self
            .coords
            .iter()
            .zip(&self.current)
            .fold(T::one(), |acc, (&i, &v)| acc * self.space.weight(i, v));
        for j in (0..self.coords.len()).rev() {
            self.current[j] += 1;
            if self.current[j] < self.space.arity(self.coords[j]) {
                break;
            }
            self.current[j] = 0;
        }
        Some((point, mass))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

/// An assignment `y ∈ X^S` of symbols to the coordinates of `S`.
///
/// `values[j]` is the symbol of the `j`-th smallest member of `support`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPoint {
    support: Subset,
    values: Vec<usize>,
}

impl PartialPoint {
    pub fn new(support: Subset, values: Vec<usize>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::SupportMismatch(format!(
                "support {support} has {} coordinates but {} values were given",
                support.len(),
                values.len()
            )));
        }
        Ok(PartialPoint { support, values })
    }

    pub fn empty() -> Self {
        PartialPoint { support: Subset::EMPTY, values: Vec::new() }
    }

    /// A point with full support `{0..values.len()}`.
    pub fn full(values: Vec<usize>) -> Self {
        PartialPoint { support: Subset::full(values.len()), values }
    }

    /// The same symbol on every coordinate of `support`.
    pub fn constant(support: Subset, symbol: usize) -> Self {
        PartialPoint { support, values: vec![symbol; support.len()] }
    }

    /// Restriction `x_S` of a full point.
    pub fn from_full(point: &[usize], support: Subset) -> Self {
        PartialPoint { support, values: support.iter().map(|i| point[i]).collect() }
    }

    pub fn support(&self) -> Subset {
        self.support
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, coord: usize) -> Option<usize> {
        self.support.position(coord).map(|j| self.values[j])
    }

    /// `(coordinate, symbol)` pairs in increasing coordinate order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.support.iter().zip(self.values.iter().copied())
    }

    /// The composition `(x, y)` of two partial points with disjoint support.
    pub fn compose(&self, other: &PartialPoint) -> Result<PartialPoint> {
        if !self.support.is_disjoint(other.support) {
            return Err(Error::SupportMismatch(format!(
                "supports {} and {} overlap",
                self.support, other.support
            )));
        }
        let support = self.support.union(other.support);
        let values = support
            .iter()
            .map(|i| self.get(i).or_else(|| other.get(i)).expect("coordinate in union"))
            .collect();
        Ok(PartialPoint { support, values })
    }

    /// Restriction to `sub ⊆ support`.
    pub fn restrict(&self, sub: Subset) -> Result<PartialPoint> {
        if !sub.is_subset_of(self.support) {
            return Err(Error::SupportMismatch(format!("{sub} is not contained in {}", self.support)));
        }
        Ok(PartialPoint { support: sub, values: sub.iter().map(|i| self.get(i).expect("member")).collect() })
    }
}
