//! Functions on `X^n`: explicit tables and builtin Boolean functions.

use std::borrow::Cow;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{PartialPoint, ProductSpace};
use crate::subset::Subset;
use crate::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeTag {
    Boolean,
    Real,
}

/// Builtin Boolean functions on `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Const(bool),
    /// `f(x) = x_i`.
    Dictator(usize),
    Or,
    And,
    /// 1 iff an odd number of ones.
    Parity,
    /// 1 iff an even number of ones.
    ParityEven,
    /// 1 iff strictly more than half the coordinates are one.
    Majority,
    /// 1 iff at least `t` ones.
    Threshold(usize),
    /// OR of ANDs over consecutive blocks of width `w`.
    Tribes(usize),
    /// Value depends only on the Hamming weight: `profile[w]`.
    Symmetric(Vec<bool>),
}

impl Builtin {
    /// Looks a builtin up by name. `param` carries the index, threshold or
    /// block width where the builtin takes one.
    pub fn parse(name: &str, param: Option<usize>) -> Result<Builtin> {
        let need = |what: &str| {
            param.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs parameter `{what}`")))
        };
        Ok(match name {
            "const0" => Builtin::Const(false),
            "const1" => Builtin::Const(true),
            "dictator" => Builtin::Dictator(need("i")?),
            "or" => Builtin::Or,
            "and" => Builtin::And,
            "parity" | "parity-odd" | "xor" => Builtin::Parity,
            "parity-even" => Builtin::ParityEven,
            "majority" => Builtin::Majority,
            "threshold" => Builtin::Threshold(need("t")?),
            "tribes" => Builtin::Tribes(need("w")?),
            other => return Err(Error::UnknownBuiltin(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Const(false) => "const0",
            Builtin::Const(true) => "const1",
            Builtin::Dictator(_) => "dictator",
            Builtin::Or => "or",
            Builtin::And => "and",
            Builtin::Parity => "parity",
            Builtin::ParityEven => "parity-even",
            Builtin::Majority => "majority",
            Builtin::Threshold(_) => "threshold",
            Builtin::Tribes(_) => "tribes",
            Builtin::Symmetric(_) => "symmetric",
        }
    }

    /// The parameter, if the builtin has one.
    pub fn param(&self) -> Option<usize> {
        match self {
            Builtin::Dictator(i) | Builtin::Threshold(i) | Builtin::Tribes(i) => Some(*i),
            _ => None,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Builtin::Dictator(i) if *i >= n => {
                Err(Error::InvalidParameter(format!("dictator index {i} out of range for n={n}")))
            }
            Builtin::Tribes(w) if *w == 0 || !n.is_multiple_of(*w) => {
                Err(Error::InvalidParameter(format!("tribes width {w} must be positive and divide n={n}")))
            }
            Builtin::Symmetric(p) if p.len() != n + 1 => Err(Error::InvalidParameter(format!(
                "weight profile has {} entries, expected {}",
                p.len(),
                n + 1
            ))),
            _ => Ok(()),
        }
    }

    /// Value as a function of the Hamming weight, for symmetric builtins.
    pub fn weight_profile(&self, n: usize) -> Option<Vec<bool>> {
        let f = |g: &dyn Fn(usize) -> bool| Some((0..=n).map(g).collect());
        match self {
            Builtin::Const(b) => f(&|_| *b),
            Builtin::Or => f(&|w| w >= 1),
            Builtin::And => f(&|w| w == n),
            Builtin::Parity => f(&|w| w % 2 == 1),
            Builtin::ParityEven => f(&|w| w % 2 == 0),
            Builtin::Majority => f(&|w| 2 * w > n),
            Builtin::Threshold(t) => f(&|w| w >= *t),
            Builtin::Symmetric(p) => Some(p.clone()),
            Builtin::Dictator(_) | Builtin::Tribes(_) => None,
        }
    }

    pub fn eval(&self, x: &[usize]) -> bool {
        match self {
            Builtin::Const(b) => *b,
            Builtin::Dictator(i) => x[*i] == 1,
            Builtin::Tribes(w) => x.chunks(*w).any(|block| block.iter().all(|&v| v == 1)),
            _ => {
                let weight = x.iter().filter(|&&v| v == 1).count();
                self.weight_profile(x.len()).expect("symmetric")[weight]
            }
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(p) => write!(f, "{}({p})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind<T> {
    /// Values of all points of `X^n` in enumeration order.
    Table(Vec<T>),
    /// Evaluated on demand; never materialized unless asked.
    Builtin(Builtin),
}

/// A real- or Boolean-valued function on a product space.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionRep<T> {
    space: ProductSpace<T>,
    kind: FunctionKind<T>,
    range: RangeTag,
}

impl<T: Scalar> FunctionRep<T> {
    pub fn from_table(space: ProductSpace<T>, values: Vec<T>, range: RangeTag) -> Result<Self> {
        let expected = space.outcome_count(space.full());
        if values.len() as u128 != expected {
            return Err(Error::TableLengthMismatch {
                got: values.len(),
                expected: expected.min(usize::MAX as u128) as usize,
            });
        }
        if range == RangeTag::Boolean {
            if let Some(index) = values.iter().position(|v| !is_bool(v)) {
                return Err(Error::NonBooleanValue { index, value: values[index].to_string() });
            }
        }
        Ok(FunctionRep { space, kind: FunctionKind::Table(values), range })
    }

    pub fn from_bools(space: ProductSpace<T>, bits: &[bool]) -> Result<Self> {
        let values = bits.iter().map(|&b| bool_value(b)).collect();
        Self::from_table(space, values, RangeTag::Boolean)
    }

    /// Boolean function defined by a predicate on points.
    pub fn from_predicate(space: ProductSpace<T>, pred: impl Fn(&[usize]) -> bool) -> Result<Self> {
        let t = Table::from_fn(&space, space.full(), |x| bool_value(pred(x)))?;
        Self::from_table(space, t.into_values(), RangeTag::Boolean)
    }

    pub fn builtin(space: ProductSpace<T>, builtin: Builtin) -> Result<Self> {
        if !matches!(builtin, Builtin::Const(_)) {
            space.require_binary()?;
        }
        builtin.validate(space.n())?;
        Ok(FunctionRep { space, kind: FunctionKind::Builtin(builtin), range: RangeTag::Boolean })
    }

    pub fn space(&self) -> &ProductSpace<T> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn kind(&self) -> &FunctionKind<T> {
        &self.kind
    }

    pub fn range(&self) -> RangeTag {
        self.range
    }

    pub fn is_boolean(&self) -> bool {
        self.range == RangeTag::Boolean
    }

    /// The same function viewed over another space of identical shape.
    pub fn with_space(&self, space: ProductSpace<T>) -> Result<Self> {
        if space.arities() != self.space.arities() {
            return Err(Error::InvalidParameter("spaces have different shapes".into()));
        }
        Ok(FunctionRep { space, kind: self.kind.clone(), range: self.range })
    }

    pub fn eval(&self, x: &[usize]) -> T {
        match &self.kind {
            FunctionKind::Table(v) => v[self.space.index_of(x)].clone(),
            FunctionKind::Builtin(b) => bool_value(b.eval(x)),
        }
    }

    /// Values over all of `X^n` (materialized for builtins).
    pub fn values(&self) -> Result<Cow<'_, [T]>> {
        match &self.kind {
            FunctionKind::Table(v) => Ok(Cow::Borrowed(v)),
            FunctionKind::Builtin(b) => {
                let t = Table::from_fn(&self.space, self.space.full(), |x| bool_value(b.eval(x)))?;
                Ok(Cow::Owned(t.into_values()))
            }
        }
    }

    pub fn to_table(&self) -> Result<Table<T>> {
        Table::new(&self.space, self.space.full(), self.values()?.into_owned())
    }

    /// An explicit-table copy of this function.
    pub fn materialize(&self) -> Result<Self> {
        Ok(FunctionRep {
            space: self.space.clone(),
            kind: FunctionKind::Table(self.values()?.into_owned()),
            range: self.range,
        })
    }

    /// Weight profile when `f` is a symmetric builtin.
    pub fn symmetric_profile(&self) -> Option<Vec<bool>> {
        match &self.kind {
            FunctionKind::Builtin(b) => b.weight_profile(self.n()),
            FunctionKind::Table(_) => None,
        }
    }

    /// `g(x) = f(y, x)` on `X^{[n] \ T}` where `T = supp y`.
    ///
    /// The remaining coordinates are renumbered `0..n-|T|` in order.
    pub fn restrict(&self, y: &PartialPoint) -> Result<Self> {
        self.space.check_point(y)?;
        let rest = self.space.full().difference(y.support());
        let space = self.space.subspace(rest);
        let kind = match &self.kind {
            FunctionKind::Builtin(Builtin::Const(b)) => FunctionKind::Builtin(Builtin::Const(*b)),
            FunctionKind::Builtin(Builtin::Dictator(i)) => match y.get(*i) {
                Some(v) => FunctionKind::Builtin(Builtin::Const(v == 1)),
                None => FunctionKind::Builtin(Builtin::Dictator(rest.position(*i).expect("free"))),
            },
            FunctionKind::Builtin(b) if b.weight_profile(self.n()).is_some() => {
                let profile = b.weight_profile(self.n()).expect("symmetric");
                let ones = y.values().iter().filter(|&&v| v == 1).count();
                let m = rest.len();
                FunctionKind::Builtin(Builtin::Symmetric(profile[ones..=ones + m].to_vec()))
            }
            _ => {
                let t = self.to_table()?.fix(y)?;
                FunctionKind::Table(t.into_values())
            }
        };
        Ok(FunctionRep { space, kind, range: self.range })
    }

    /// `∫ f dμ`.
    pub fn expectation(&self) -> Result<T> {
        if let (Some(profile), Some(p)) = (self.symmetric_profile(), self.space.common_bias()) {
            return Ok(binomial_mean(&profile, p));
        }
        Ok(self.to_table()?.integral(&self.space))
    }

    /// `E[f | x_T = y]` for `T = supp y`.
    pub fn conditional_mean(&self, y: &PartialPoint) -> Result<T> {
        self.restrict(y)?.expectation()
    }

    /// `E[f | x_S = (1, .., 1)]`.
    pub fn all_ones_conditional(&self, s: Subset) -> Result<T> {
        self.conditional_mean(&PartialPoint::constant(s, 1))
    }

    /// Whether `f(x) <= f(y)` for all `x <= y` coordinatewise.
    ///
    /// Checks every covering pair (one coordinate flipped from 0 to 1).
    pub fn is_increasing(&self) -> Result<bool> {
        self.space.require_binary()?;
        if let Some(profile) = self.symmetric_profile() {
            return Ok(profile.windows(2).all(|w| w[0] <= w[1]));
        }
        let values = self.values()?;
        let n = self.n();
        for (idx, v) in values.iter().enumerate() {
            for i in 0..n {
                let stride = 1usize << (n - 1 - i);
                if idx & stride == 0 && *v > values[idx | stride] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `f(x) >= f(y)` for all `x <= y` coordinatewise.
    pub fn is_decreasing(&self) -> Result<bool> {
        self.space.require_binary()?;
        let values = self.values()?;
        let n = self.n();
        for (idx, v) in values.iter().enumerate() {
            for i in 0..n {
                let stride = 1usize << (n - 1 - i);
                if idx & stride == 0 && *v < values[idx | stride] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `‖f - g‖_1` over the shared space.
    pub fn l1_distance(&self, other: &FunctionRep<T>) -> Result<T> {
        let a = self.to_table()?;
        let b = other.to_table()?;
        Ok(a.zip_with(&b, |x, y| (x.clone() - y).abs_val()).integral(&self.space))
    }
}

pub(crate) fn bool_value<T: Scalar>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

pub(crate) fn is_bool<T: Scalar>(v: &T) -> bool {
    *v == T::zero() || *v == T::one()
}

/// `Σ_w C(m,w) p^w (1-p)^{m-w} profile[w]` with `m = profile.len() - 1`.
pub(crate) fn binomial_mean<T: Scalar>(profile: &[bool], p: &T) -> T {
    let m = profile.len() - 1;
    let q = T::one() - p;
    let mut acc = T::zero();
    let mut binom = T::one();
    for (w, &on) in profile.iter().enumerate() {
        if on {
            acc += &(binom.clone() * &p.powi(w as u32) * &q.powi((m - w) as u32));
        }
        binom = binom * &T::from_ratio((m - w) as i64, (w + 1) as i64);
    }
    acc
}
