//! Tables of values over a factor space `X^S`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{strides_of, PartialPoint, ProductSpace};
use crate::subset::Subset;

/// A function `X^S → T` stored densely in enumeration order of `X^S`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table<T> {
    support: Subset,
    sizes: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> Table<T> {
    pub fn new(space: &ProductSpace<T>, support: Subset, values: Vec<T>) -> Result<Self> {
        let sizes: Vec<usize> = support.iter().map(|i| space.arity(i)).collect();
        let expected: usize = sizes.iter().product();
        if values.len() != expected {
            return Err(Error::TableLengthMismatch { got: values.len(), expected });
        }
        Ok(Table { support, sizes, values })
    }

    pub fn constant(space: &ProductSpace<T>, support: Subset, value: T) -> Result<Self> {
        let len = space.check_enumerable(support)?;
        Self::new(space, support, vec![value; len])
    }

    /// Tabulates `f` over `X^S`; `f` receives the local symbol vector.
    pub fn from_fn(
        space: &ProductSpace<T>,
        support: Subset,
        mut f: impl FnMut(&[usize]) -> T,
    ) -> Result<Self> {
        let len = space.check_enumerable(support)?;
        let sizes: Vec<usize> = support.iter().map(|i| space.arity(i)).collect();
        let mut cur = vec![0usize; sizes.len()];
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            values.push(f(&cur));
            for j in (0..sizes.len()).rev() {
                cur[j] += 1;
                if cur[j] < sizes[j] {
                    break;
                }
                cur[j] = 0;
            }
        }
        Ok(Table { support, sizes, values })
    }

    pub fn support(&self) -> Subset {
        self.support
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.sizes)
    }

    /// Index of the local symbol vector `local`.
    pub fn index(&self, local: &[usize]) -> usize {
        local.iter().zip(&self.sizes).fold(0usize, |acc, (&v, &m)| acc * m + v)
    }

    /// Local symbol vector of entry `idx`.
    pub fn local_point(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for j in (0..self.sizes.len()).rev() {
            out[j] = idx % self.sizes[j];
            idx /= self.sizes[j];
        }
        out
    }

    /// Value at a full point `x ∈ X^n` (reads `x_S`).
    pub fn at_point(&self, point: &[usize]) -> &T {
        let idx = self.support.iter().zip(&self.sizes).fold(0usize, |acc, (i, &m)| acc * m + point[i]);
        &self.values[idx]
    }

    /// Value at a partial point whose support contains `S`.
    pub fn at_partial(&self, y: &PartialPoint) -> Result<&T> {
        let mut idx = 0usize;
        for (i, &m) in self.support.iter().zip(&self.sizes) {
            let v = y.get(i).ok_or_else(|| {
                Error::SupportMismatch(format!("{} does not cover {}", y.support(), self.support))
            })?;
            idx = idx * m + v;
        }
        Ok(&self.values[idx])
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Table<U> {
        Table {
            support: self.support,
            sizes: self.sizes.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Table<T>, f: impl Fn(&T, &T) -> T) -> Table<T> {
        assert_eq!(self.support, other.support, "tables over different supports");
        Table {
            support: self.support,
            sizes: self.sizes.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn split(&self, pos: usize) -> (usize, usize, usize) {
        let outer: usize = self.sizes[..pos].iter().product();
        let inner: usize = self.sizes[pos + 1..].iter().product();
        (outer, self.sizes[pos], inner)
    }

    /// `∫ g dx_i`: integrates coordinate `i` out of the table.
    pub fn integrate_coord(&self, space: &ProductSpace<T>, i: usize) -> Table<T> {
        let pos = self.support.position(i).expect("coordinate not in support");
        let (outer, m, inner) = self.split(pos);
        let w = space.weights(i);
        let mut values = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            for r in 0..inner {
                let mut acc = T::zero();
                for (a, wa) in w.iter().enumerate() {
                    acc += &(self.values[(o * m + a) * inner + r].clone() * wa);
                }
                values.push(acc);
            }
        }
        let mut sizes = self.sizes.clone();
        sizes.remove(pos);
        Table { support: self.support.without(i), sizes, values }
    }

    /// Fixes coordinate `i` to `symbol`, dropping it from the support.
    pub fn fix_coord(&self, i: usize, symbol: usize) -> Table<T> {
        let pos = self.support.position(i).expect("coordinate not in support");
        let (outer, m, inner) = self.split(pos);
        let mut values = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            for r in 0..inner {
                values.push(self.values[(o * m + symbol) * inner + r].clone());
            }
        }
        let mut sizes = self.sizes.clone();
        sizes.remove(pos);
        Table { support: self.support.without(i), sizes, values }
    }

    /// Fixes every coordinate of `y` (which must lie in the support).
    pub fn fix(&self, y: &PartialPoint) -> Result<Table<T>> {
        if !y.support().is_subset_of(self.support) {
            return Err(Error::SupportMismatch(format!(
                "{} is not contained in {}",
                y.support(),
                self.support
            )));
        }
        let mut t = self.clone();
        for (i, v) in y.iter() {
            t = t.fix_coord(i, v);
        }
        Ok(t)
    }

    /// `g - ∫ g dx_i`, still a function on `X^S`.
    pub fn center_coord(&self, space: &ProductSpace<T>, i: usize) -> Table<T> {
        let pos = self.support.position(i).expect("coordinate not in support");
        let (outer, m, inner) = self.split(pos);
        let w = space.weights(i);
        let mut values = self.values.clone();
        for o in 0..outer {
            for r in 0..inner {
                let mut mean = T::zero();
                for (a, wa) in w.iter().enumerate() {
                    mean += &(self.values[(o * m + a) * inner + r].clone() * wa);
                }
                for a in 0..m {
                    values[(o * m + a) * inner + r] -= &mean;
                }
            }
        }
        Table { support: self.support, sizes: self.sizes.clone(), values }
    }

    /// `∫ g dx_{S \ onto}` as a table over `X^onto`.
    pub fn marginal(&self, space: &ProductSpace<T>, onto: Subset) -> Table<T> {
        assert!(onto.is_subset_of(self.support));
        let mut t = self.clone();
        for i in self.support.difference(onto).iter() {
            t = t.integrate_coord(space, i);
        }
        t
    }

    /// Marginals onto every subset of the support.
    ///
    /// Entry `u` is the marginal onto `Subset(u).expand(support)`, i.e. the
    /// vector is indexed by local bitmasks. Each marginal is obtained from a
    /// parent with one more coordinate, so the total work is proportional to
    /// `∏ (m_i + 1)`.
    pub fn all_marginals(&self, space: &ProductSpace<T>) -> Vec<Table<T>> {
        let k = self.sizes.len();
        let full = (1usize << k) - 1;
        let members = self.support.indices();
        let mut out: Vec<Option<Table<T>>> = vec![None; full + 1];
        out[full] = Some(self.clone());
        for u in (0..full).rev() {
            let j = (!u).trailing_zeros() as usize;
            let parent = out[u | 1 << j].as_ref().expect("parent computed first");
            out[u] = Some(parent.integrate_coord(space, members[j]));
        }
        out.into_iter().map(|t| t.expect("all filled")).collect()
    }

    /// `∫ g` over `X^S`.
    pub fn integral(&self, space: &ProductSpace<T>) -> T {
        let t = self.marginal(space, Subset::EMPTY);
        t.values[0].clone()
    }

    /// `‖g‖_2^2`.
    pub fn sq_norm(&self, space: &ProductSpace<T>) -> T {
        self.map(|v| v.clone() * v).integral(space)
    }

    /// `‖g‖_∞`.
    pub fn sup_norm(&self) -> T {
        self.values.iter().map(Scalar::abs_val).fold(T::zero(), |m, v| if v > m { v } else { m })
    }

    /// `∫ 1[pred(g)]` over `X^S`.
    pub fn mass_where(&self, space: &ProductSpace<T>, pred: impl Fn(&T) -> bool) -> T {
        self.map(|v| if pred(v) { T::one() } else { T::zero() }).integral(space)
    }

    /// True when every entry is zero (exactly, or within `tol` for floats).
    pub fn is_zero(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.approx_eq(&T::zero(), tol))
    }
}
