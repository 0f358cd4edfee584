//! Parameter schedules.
//!
//! The structure theorems fix the constants
//!
//! ```text
//! C = ⌈I_f⌉, ε₀ = 10⁻³ε, k = Cε₀⁻¹, ε₁ = 3^{-10k²} ε₀^{10k},
//! p-biased: δ = 2^{-100k²}
//! general:  δ₀ = 2^{-2k}, δ = 2^{-1000k²} ε₁^{10}, ε₂ = δ^{10k}
//! ```
//!
//! which are far too small to represent for any realistic `ε`. Each constant
//! is therefore kept as a product of rational bases raised to rational
//! exponents, so its log₂ is available without evaluating it. Values are
//! only materialized when they fit a bit budget.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{ceil_rational, parse_rational, rational_to_f64, Rational, Scalar};

/// Default budget for exact materialization, in bits.
pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

/// Float mode refuses values whose log₂ leaves this range.
const FLOAT_LOG2_RANGE: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    PBiased,
    General,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::PBiased => "pbiased",
            Mode::General => "general",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "pbiased" | "p-biased" => Ok(Mode::PBiased),
            "general" => Ok(Mode::General),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Schedule entries that can be overridden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    K,
    Eps0,
    Eps1,
    Delta,
    Delta0,
    Eps2,
}

impl Field {
    pub const ALL: [Field; 6] =
        [Field::K, Field::Eps0, Field::Eps1, Field::Delta, Field::Delta0, Field::Eps2];

    pub fn name(self) -> &'static str {
        match self {
            Field::K => "k",
            Field::Eps0 => "eps0",
            Field::Eps1 => "eps1",
            Field::Delta => "delta",
            Field::Delta0 => "delta0",
            Field::Eps2 => "eps2",
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        Field::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown schedule field {s:?}")))
    }
}

/// Field values replacing the formulas.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides(pub BTreeMap<Field, Rational>);

impl Overrides {
    pub fn none() -> Self {
        Overrides::default()
    }

    pub fn set(mut self, field: Field, value: Rational) -> Self {
        self.0.insert(field, value);
        self
    }

    /// Parses `name=value` pairs, e.g. `k=2`, `delta=1/100`.
    pub fn parse<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut out = Overrides::none();
        for pair in pairs {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("override {pair:?} is not name=value")))?;
            out.0.insert(name.trim().parse()?, parse_rational(value.trim())?);
        }
        Ok(out)
    }

    pub fn get(&self, field: Field) -> Option<&Rational> {
        self.0.get(&field)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `∏ base^exponent` over positive rational bases.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerProduct {
    factors: Vec<(Rational, Rational)>,
}

impl PowerProduct {
    pub fn literal(value: Rational) -> Self {
        PowerProduct { factors: vec![(value, Rational::one())] }
    }

    pub fn power(base: Rational, exponent: Rational) -> Self {
        PowerProduct { factors: vec![(base, exponent)] }
    }

    pub fn two_to(exponent: Rational) -> Self {
        Self::power(int(2), exponent)
    }

    pub fn factors(&self) -> &[(Rational, Rational)] {
        &self.factors
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut factors = self.factors.clone();
        for (b, e) in &other.factors {
            match factors.iter_mut().find(|(fb, _)| fb == b) {
                Some((_, fe)) => *fe += e,
                None => factors.push((b.clone(), e.clone())),
            }
        }
        factors.retain(|(_, e)| !e.is_zero());
        PowerProduct { factors }
    }

    pub fn pow(&self, exponent: &Rational) -> PowerProduct {
        let factors = self
            .factors
            .iter()
            .map(|(b, e)| (b.clone(), e * exponent))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        PowerProduct { factors }
    }

    /// `log₂` as a float.
    pub fn log2(&self) -> f64 {
        self.factors.iter().map(|(b, e)| rational_to_f64(e) * log2_rational(b)).sum()
    }

    /// `log₂` exactly, when every base is an integer power of 2.
    pub fn log2_exact(&self) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (b, e) in &self.factors {
            acc += e * Rational::from_integer(BigInt::from(exact_log2(b)?));
        }
        Some(acc)
    }

    /// Rough size of the exact value: `Σ |e| · bits(base)`.
    pub fn bit_estimate(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| {
                let bits = b.numer().bits().max(b.denom().bits()).max(1) as f64;
                rational_to_f64(&e.abs()) * bits
            })
            .sum()
    }

    /// The value in the requested arithmetic.
    ///
    /// Exact mode needs integer exponents and at most `budget` bits; float
    /// mode needs the value to stay within double range.
    pub fn materialize<T: Scalar>(&self, name: &str, budget: u64) -> Result<T> {
        if T::EXACT {
            Ok(T::from_rational(&self.exact(name, budget)?))
        } else {
            let l = self.log2();
            if !(-FLOAT_LOG2_RANGE..=FLOAT_LOG2_RANGE).contains(&l) {
                return Err(Error::ScheduleInfeasible(format!("{name} = 2^{l:.6e} is outside float range")));
            }
            Ok(T::from_rational(&crate::scalar::rational_from_f64(l.exp2())?))
        }
    }

    fn exact(&self, name: &str, budget: u64) -> Result<Rational> {
        let bits = self.bit_estimate();
        if bits > budget as f64 {
            return Err(Error::ScheduleInfeasible(format!(
                "{name} needs about {bits:.3e} bits, budget is {budget}"
            )));
        }
        let mut acc = Rational::one();
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return Err(Error::ScheduleInfeasible(format!(
                    "{name} has non-integer exponent {e} on base {b}"
                )));
            }
            let e = e.to_integer().to_i32().expect("bounded by the bit budget");
            acc *= b.pow(e);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "log2": self.log2(),
            "log2_exact": self.log2_exact().map(|r| r.to_string()),
            "factors": self.factors.iter().map(|(b, e)| json!({"base": b.to_string(), "exp": e.to_string()})).collect::<Vec<_>>(),
        })
    }
}

/// The constants used by one run of the constructor.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSchedule {
    pub mode: Mode,
    pub c: BigInt,
    pub epsilon: Rational,
    pub eps0: Rational,
    pub k: Rational,
    pub eps1: PowerProduct,
    pub delta: PowerProduct,
    /// General mode only.
    pub delta0: Option<PowerProduct>,
    /// General mode only.
    pub eps2: Option<PowerProduct>,
    pub overridden: BTreeSet<Field>,
}

/// Builds the schedule for `C`, `ε` and `mode`; fields without an override
/// are derived from the (possibly overridden) fields they depend on.
pub fn schedule(
    c: &BigInt,
    epsilon: &Rational,
    mode: Mode,
    overrides: &Overrides,
) -> Result<ParameterSchedule> {
    if *c < BigInt::one() {
        return Err(Error::InvalidParameter("C must be at least 1".into()));
    }
    if !epsilon.is_positive() || *epsilon > Rational::one() {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must lie in (0,1]")));
    }
    for (field, value) in &overrides.0 {
        if !value.is_positive() {
            return Err(Error::InvalidParameter(format!("{} must be positive", field.name())));
        }
        if mode == Mode::PBiased && matches!(field, Field::Delta0 | Field::Eps2) {
            return Err(Error::InvalidParameter(format!("{} is not used in pbiased mode", field.name())));
        }
    }
    let eps0 = overrides.get(Field::Eps0).cloned().unwrap_or_else(|| epsilon / int(1000));
    let k = overrides.get(Field::K).cloned().unwrap_or_else(|| Rational::from_integer(c.clone()) / &eps0);
    let k2 = &k * &k;
    let eps1 = match overrides.get(Field::Eps1) {
        Some(v) => PowerProduct::literal(v.clone()),
        None => {
            PowerProduct::power(int(3), -int(10) * &k2).mul(&PowerProduct::power(eps0.clone(), int(10) * &k))
        }
    };
    let (delta, delta0, eps2) = match mode {
        Mode::PBiased => {
            let delta = match overrides.get(Field::Delta) {
                Some(v) => PowerProduct::literal(v.clone()),
                None => PowerProduct::two_to(-int(100) * &k2),
            };
            (delta, None, None)
        }
        Mode::General => {
            let delta0 = match overrides.get(Field::Delta0) {
                Some(v) => PowerProduct::literal(v.clone()),
                None => PowerProduct::two_to(-int(2) * &k),
            };
            let delta = match overrides.get(Field::Delta) {
                Some(v) => PowerProduct::literal(v.clone()),
                None => PowerProduct::two_to(-int(1000) * &k2).mul(&eps1.pow(&int(10))),
            };
            let eps2 = match overrides.get(Field::Eps2) {
                Some(v) => PowerProduct::literal(v.clone()),
                None => delta.pow(&(int(10) * &k)),
            };
            (delta, Some(delta0), Some(eps2))
        }
    };
    Ok(ParameterSchedule {
        mode,
        c: c.clone(),
        epsilon: epsilon.clone(),
        eps0,
        k,
        eps1,
        delta,
        delta0,
        eps2,
        overridden: overrides.0.keys().copied().collect(),
    })
}

/// `max(1, ⌈I_f⌉)`.
pub fn c_from_influence(total_influence: &Rational) -> BigInt {
    ceil_rational(total_influence).max(BigInt::one())
}

impl ParameterSchedule {
    pub fn is_overridden(&self) -> bool {
        !self.overridden.is_empty()
    }

    /// Largest admissible `|S|`: `⌊k⌋`, capped at the coordinate limit.
    pub fn max_size(&self) -> usize {
        self.k.floor().to_integer().to_usize().unwrap_or(usize::MAX).min(crate::subset::MAX_COORDS)
    }

    /// `2^{3k} δ^{-2k}`, the scale of the general-mode weights `a_S`.
    pub fn a_scale(&self) -> PowerProduct {
        PowerProduct::two_to(int(3) * &self.k).mul(&self.delta.pow(&(-int(2) * &self.k)))
    }

    /// `δ^{-3k}`, the bound on `Σ_S ∫ a_S`.
    pub fn a_total_bound(&self) -> PowerProduct {
        self.delta.pow(&(-int(3) * &self.k))
    }

    /// Materializes every constant the mode uses.
    pub fn constants<T: Scalar>(&self, budget: u64) -> Result<Constants<T>> {
        let general = |p: &Option<PowerProduct>, name: &str| -> Result<Option<T>> {
            p.as_ref().map(|v| v.materialize(name, budget)).transpose()
        };
        let (a_scale, a_total_bound) = match self.mode {
            Mode::PBiased => (None, None),
            Mode::General => (
                Some(self.a_scale().materialize("2^{3k} delta^{-2k}", budget)?),
                Some(self.a_total_bound().materialize("delta^{-3k}", budget)?),
            ),
        };
        Ok(Constants {
            max_size: self.max_size(),
            eps0: T::from_rational(&self.eps0),
            eps1: self.eps1.materialize("eps1", budget)?,
            delta: self.delta.materialize("delta", budget)?,
            delta0: general(&self.delta0, "delta0")?,
            eps2: general(&self.eps2, "eps2")?,
            k: T::from_rational(&self.k),
            a_scale,
            a_total_bound,
        })
    }

    pub fn to_json(&self) -> Value {
        let flag = |f: Field| self.overridden.contains(&f);
        let entry = |p: &PowerProduct, f: Field| {
            let mut v = p.to_json();
            v["overridden"] = json!(flag(f));
            v
        };
        let mut out = json!({
            "mode": self.mode.name(),
            "C": self.c.to_string(),
            "epsilon": self.epsilon.to_string(),
            "eps0": {
                "value": self.eps0.to_string(),
                "log2": log2_rational(&self.eps0),
                "overridden": flag(Field::Eps0),
            },
            "k": {
                "value": self.k.to_string(),
                "log2": log2_rational(&self.k),
                "overridden": flag(Field::K),
            },
            "eps1": entry(&self.eps1, Field::Eps1),
            "delta": entry(&self.delta, Field::Delta),
            "overridden": self.overridden.iter().map(|f| f.name()).collect::<Vec<_>>(),
        });
        if let Some(d0) = &self.delta0 {
            out["delta0"] = entry(d0, Field::Delta0);
        }
        if let Some(e2) = &self.eps2 {
            out["eps2"] = entry(e2, Field::Eps2);
        }
        out
    }
}

/// Materialized constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Constants<T> {
    pub max_size: usize,
    pub k: T,
    pub eps0: T,
    pub eps1: T,
    pub delta: T,
    pub delta0: Option<T>,
    pub eps2: Option<T>,
    pub a_scale: Option<T>,
    pub a_total_bound: Option<T>,
}

fn int(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

fn log2_rational(r: &Rational) -> f64 {
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // Shift both sides into f64 range before taking logs.
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (r.numer().abs() >> shift_n as usize).to_f64().unwrap_or(f64::MAX);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(f64::MAX);
    n.log2() - d.log2() + (shift_n - shift_d) as f64
}

/// `log₂ r` when `r` is an integer power of 2 (possibly negative).
fn exact_log2(r: &Rational) -> Option<i64> {
    let pow2 = |b: &BigInt| -> Option<i64> {
        if b.is_positive() && (b & (b - BigInt::one())).is_zero() {
            Some(b.bits() as i64 - 1)
        } else {
            None
        }
    };
    let n = pow2(r.numer())?;
    let d = pow2(r.denom())?;
    Some(n - d)
}
