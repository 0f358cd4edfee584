//! Generalized Walsh (Hoeffding / Efron–Stein) expansion `f = Σ_S F_S`.
//!
//! `F_S` depends only on `x_S` and integrates to zero along every coordinate
//! of `S`. With the marginals `M_T = ∫ f dx_{[n]\T}`, inclusion–exclusion
//! gives `F_S = Σ_{T⊆S} (-1)^{|S\T|} M_T`, which factors as
//! `F_S = ∏_{i∈S} (I - E_i) M_S` where `E_i` averages coordinate `i` away.
//! That factored form is what [`walsh_expand`] evaluates.

use crate::boolfn::{FunctionRep, RangeTag};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::ProductSpace;
use crate::subset::Subset;
use crate::table::Table;

/// Float-mode tolerance for orthogonality and mean-zero checks.
pub const FLOAT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct WalshExpansion<T> {
    space: ProductSpace<T>,
    components: Vec<Table<T>>,
    sq_norms: Vec<T>,
    sup_norms: Vec<T>,
    f_sq_norm: T,
    f_sup_norm: T,
}

/// `Σ_S |X^S| = ∏ (m_i + 1)`: storage needed by a full expansion.
pub fn expansion_size<T: Scalar>(space: &ProductSpace<T>) -> u128 {
    (0..space.n()).fold(1u128, |acc, i| acc.saturating_mul(space.arity(i) as u128 + 1))
}

/// Expands `f` into its generalized Walsh components.
pub fn walsh_expand<T: Scalar>(f: &FunctionRep<T>) -> Result<WalshExpansion<T>> {
    let space = f.space();
    let size = expansion_size(space);
    if size > space.enum_cap() as u128 {
        return Err(Error::EnumerationCapExceeded { outcomes: size, cap: space.enum_cap() });
    }
    WalshExpansion::of_table(space, &f.to_table()?)
}

impl<T: Scalar> WalshExpansion<T> {
    /// Expansion of a table over `X^n` (the table's support must be `[n]`).
    pub fn of_table(space: &ProductSpace<T>, table: &Table<T>) -> Result<Self> {
        if table.support() != space.full() {
            return Err(Error::SupportMismatch("expansion needs a table over all coordinates".into()));
        }
        let marginals = table.all_marginals(space);
        let components: Vec<Table<T>> = marginals
            .into_iter()
            .enumerate()
            .map(|(mask, m)| Subset(mask as u32).iter().fold(m, |acc, i| acc.center_coord(space, i)))
            .collect();
        let sq_norms = components.iter().map(|c| c.sq_norm(space)).collect();
        let sup_norms = components.iter().map(Table::sup_norm).collect();
        Ok(WalshExpansion {
            space: space.clone(),
            f_sq_norm: table.sq_norm(space),
            f_sup_norm: table.sup_norm(),
            components,
            sq_norms,
            sup_norms,
        })
    }

    pub fn space(&self) -> &ProductSpace<T> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    /// `F_S` as a table over `X^S`.
    pub fn component(&self, s: Subset) -> &Table<T> {
        &self.components[s.bits() as usize]
    }

    pub fn components(&self) -> impl Iterator<Item = (Subset, &Table<T>)> {
        self.components.iter().enumerate().map(|(m, c)| (Subset(m as u32), c))
    }

    /// `‖F_S‖_2^2`.
    pub fn sq_norm(&self, s: Subset) -> &T {
        &self.sq_norms[s.bits() as usize]
    }

    /// `‖F_S‖_∞`.
    pub fn sup_norm(&self, s: Subset) -> &T {
        &self.sup_norms[s.bits() as usize]
    }

    /// `‖f‖_2^2` of the expanded function.
    pub fn f_sq_norm(&self) -> &T {
        &self.f_sq_norm
    }

    pub fn f_sup_norm(&self) -> &T {
        &self.f_sup_norm
    }

    /// `Σ_S F_S(x_S)` at a full point.
    pub fn eval(&self, x: &[usize]) -> T {
        self.components.iter().fold(T::zero(), |acc, c| acc + c.at_point(x))
    }

    /// `Σ_{S ∈ family} F_S` as a function on `X^n`.
    pub fn partial_sum(&self, family: impl IntoIterator<Item = Subset>) -> Result<Table<T>> {
        let space = &self.space;
        let len = space.check_enumerable(space.full())?;
        let mut acc = vec![T::zero(); len];
        for s in family {
            let c = self.component(s);
            for (idx, v) in acc.iter_mut().enumerate() {
                *v += c.at_point(&space.point_of(idx));
            }
        }
        Table::new(space, space.full(), acc)
    }

    /// Rebuilds `f` pointwise from its components.
    pub fn reconstruct(&self) -> Result<FunctionRep<T>> {
        let t = self.partial_sum(Subset::full(self.n()).subsets())?;
        FunctionRep::from_table(self.space.clone(), t.into_values(), RangeTag::Real)
    }

    /// Both sides of `‖f‖² = Σ_S ‖F_S‖²` and their difference.
    pub fn parseval_report(&self) -> ParsevalReport<T> {
        let rhs = self.sq_norms.iter().fold(T::zero(), |a, v| a + v);
        let residual = (self.f_sq_norm.clone() - &rhs).abs_val();
        ParsevalReport { lhs: self.f_sq_norm.clone(), rhs, residual }
    }

    /// `Σ_{|S| > k} ‖F_S‖²`: the weight above level `k`.
    pub fn weight_above(&self, k: usize) -> T {
        self.components().filter(|(s, _)| s.len() > k).fold(T::zero(), |a, (s, _)| a + self.sq_norm(s))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsevalReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

impl<T: Scalar> ParsevalReport<T> {
    pub fn holds(&self) -> bool {
        self.residual.approx_eq(&T::zero(), FLOAT_TOL)
    }
}

/// Coefficients of `f` in the orthonormal p-biased basis
/// `χ_S(x) = ∏_{i∈S} r(x_i)`, `r(0) = -√(p/(1-p))`, `r(1) = √((1-p)/p)`.
///
/// `r` is irrational in general, so coefficients are floats; their squares
/// `f̂(S)² = ‖F_S‖²` are kept exactly alongside.
#[derive(Clone, Debug)]
pub struct PBiasedBasis<T> {
    pub p: f64,
    pub r: [f64; 2],
    pub coefficients: Vec<f64>,
    pub coefficient_sq: Vec<T>,
}

/// Computes `f̂(S) = ∫ f ∏_{i∈S} r(x_i)` for every `S`.
///
/// One butterfly pass per coordinate maps `(v_0, v_1)` to
/// `(w_0 v_0 + w_1 v_1, w_0 ρ(0) v_0 + w_1 ρ(1) v_1)`; the exact pass uses the
/// rational `ρ(0) = -p`, `ρ(1) = 1-p`, so `r = ρ / √(p(1-p))` and
/// `f̂(S)² = (∫ f ∏ρ)² / (p(1-p))^{|S|}` stays rational.
pub fn pbiased_coefficients<T: Scalar>(f: &FunctionRep<T>) -> Result<PBiasedBasis<T>> {
    let space = f.space();
    space.require_binary()?;
    let p = space
        .common_bias()
        .ok_or_else(|| Error::InvalidParameter("p-biased basis needs a common bias".into()))?
        .clone();
    let q = T::one() - &p;
    let pf = p.to_f64();
    let r = [-(pf / (1.0 - pf)).sqrt(), ((1.0 - pf) / pf).sqrt()];
    let n = space.n();
    let values = f.values()?;

    let mut approx: Vec<f64> = values.iter().map(Scalar::to_f64).collect();
    let mut exact: Vec<T> = values.to_vec();
    let (pw, qw) = (pf, 1.0 - pf);
    for i in 0..n {
        let stride = 1usize << (n - 1 - i);
        for base in (0..approx.len()).filter(|b| b & stride == 0) {
            let (v0, v1) = (approx[base], approx[base | stride]);
            approx[base] = qw * v0 + pw * v1;
            approx[base | stride] = qw * r[0] * v0 + pw * r[1] * v1;
            let (e0, e1) = (exact[base].clone(), exact[base | stride].clone());
            exact[base] = q.clone() * &e0 + p.clone() * &e1;
            exact[base | stride] = (q.clone() * &p) * &(e1 - e0);
        }
    }
    let var = p.clone() * &q;
    let mut coefficients = vec![0.0; 1 << n];
    let mut coefficient_sq = vec![T::zero(); 1 << n];
    for idx in 0..approx.len() {
        let mask = (0..n).filter(|&i| idx & (1 << (n - 1 - i)) != 0).fold(0u32, |m, i| m | 1 << i);
        let s = Subset(mask);
        coefficients[mask as usize] = approx[idx];
        coefficient_sq[mask as usize] = exact[idx].clone() * &exact[idx] / var.powi(s.len() as u32);
    }
    Ok(PBiasedBasis { p: pf, r, coefficients, coefficient_sq })
}

impl<T: Scalar> PBiasedBasis<T> {
    pub fn coefficient(&self, s: Subset) -> f64 {
        self.coefficients[s.bits() as usize]
    }

    /// `∏_{i∈S} r(x_i)`.
    pub fn chi(&self, s: Subset, x: &[usize]) -> f64 {
        s.iter().map(|i| self.r[x[i]]).product()
    }

    /// Largest `|F_S(x) - f̂(S) χ_S(x)|` over all `S` and `x`.
    pub fn max_deviation(&self, e: &WalshExpansion<T>) -> f64 {
        let space = e.space();
        let mut worst = 0.0f64;
        for idx in 0..space.outcome_count(space.full()) as usize {
            let x = space.point_of(idx);
            for (s, c) in e.components() {
                let dev = (c.at_point(&x).to_f64() - self.coefficient(s) * self.chi(s, &x)).abs();
                worst = worst.max(dev);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Builtin;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn zero() -> Rational {
        q(0, 1)
    }

    #[test]
    fn constant_has_only_empty_component() {
        let space = ProductSpace::p_biased(3, q(1, 3)).unwrap();
        let f = FunctionRep::from_table(space, vec![q(5, 7); 8], RangeTag::Real).unwrap();
        let e = walsh_expand(&f).unwrap();
        assert_eq!(e.component(Subset::EMPTY).values(), &[q(5, 7)]);
        for (s, c) in e.components().skip(1) {
            assert!(c.is_zero(0.0), "{s}");
        }
    }

    #[test]
    fn dictator_components() {
        let p = q(1, 3);
        let space = ProductSpace::p_biased(3, p.clone()).unwrap();
        let f = FunctionRep::builtin(space, Builtin::Dictator(0)).unwrap();
        let e = walsh_expand(&f).unwrap();
        assert_eq!(e.component(Subset::EMPTY).values(), std::slice::from_ref(&p));
        assert_eq!(e.component(Subset::singleton(0)).values(), &[-p.clone(), q(1, 1) - &p]);
        for (s, c) in e.components() {
            if s.bits() > 1 {
                assert!(c.is_zero(0.0));
            }
        }
    }

    #[test]
    fn parity_even_two_bits() {
        let space = ProductSpace::p_biased(2, q(1, 2)).unwrap();
        let f = FunctionRep::builtin(space, Builtin::ParityEven).unwrap();
        let e = walsh_expand(&f).unwrap();
        assert_eq!(e.component(Subset::EMPTY).values(), &[q(1, 2)]);
        assert!(e.component(Subset::singleton(0)).is_zero(0.0));
        assert!(e.component(Subset::singleton(1)).is_zero(0.0));
        let top = e.component(Subset::full(2));
        assert_eq!(top.values(), &[q(1, 2), q(-1, 2), q(-1, 2), q(1, 2)]);
    }

    #[test]
    fn majority_parseval() {
        let space = ProductSpace::p_biased(3, q(1, 2)).unwrap();
        let f = FunctionRep::builtin(space, Builtin::Majority).unwrap();
        let r = walsh_expand(&f).unwrap().parseval_report();
        assert_eq!(r.lhs, q(1, 2));
        assert_eq!(r.rhs, q(1, 2));
        assert_eq!(r.residual, zero());
    }

    #[test]
    fn pbiased_coefficient_examples() {
        for p in [q(1, 2), q(1, 5)] {
            let space = ProductSpace::p_biased(2, p.clone()).unwrap();
            let f = FunctionRep::builtin(space, Builtin::Dictator(0)).unwrap();
            let b = pbiased_coefficients(&f).unwrap();
            let pf = p.to_f64();
            assert!((b.coefficient(Subset::singleton(0)) - (pf * (1.0 - pf)).sqrt()).abs() < 1e-12);
            assert!((b.coefficient(Subset::EMPTY) - pf).abs() < 1e-12);
            assert_eq!(b.coefficient_sq[1], p.clone() * (q(1, 1) - &p));
        }
        let space = ProductSpace::p_biased(2, q(1, 2)).unwrap();
        let one = FunctionRep::builtin(space.clone(), Builtin::Const(true)).unwrap();
        let b = pbiased_coefficients(&one).unwrap();
        assert!((b.coefficient(Subset::EMPTY) - 1.0).abs() < 1e-12);
        assert!(b.coefficients[1..].iter().all(|c| c.abs() < 1e-12));

        let or = FunctionRep::builtin(space, Builtin::Or).unwrap();
        let b = pbiased_coefficients(&or).unwrap();
        let expected = [0.75, 0.25, 0.25, -0.25];
        for (c, e) in b.coefficients.iter().zip(expected) {
            assert!((c - e).abs() < 1e-12);
        }
        let e = walsh_expand(&or).unwrap();
        assert!(b.max_deviation(&e) < 1e-12);
        for (s, _) in e.components() {
            assert_eq!(&b.coefficient_sq[s.bits() as usize], e.sq_norm(s));
        }
    }

    #[test]
    fn expansion_respects_cap() {
        let space = ProductSpace::p_biased(8, q(1, 2)).unwrap().with_enum_cap(1000);
        let f = FunctionRep::builtin(space, Builtin::Or).unwrap();
        assert!(matches!(walsh_expand(&f), Err(Error::EnumerationCapExceeded { .. })));
    }
}
