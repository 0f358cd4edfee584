//! Measurable guarantees of the constructions, checked exhaustively.
//!
//! Each check reports the worst slack it found so failures are diagnosable.

use crate::error::Result;
use crate::pseudojunta::JuntaCollection;
use crate::scalar::Scalar;
use crate::space::ProductSpace;
use crate::subset::Subset;
use crate::table::Table;
use crate::walsh::{WalshExpansion, FLOAT_TOL};

use super::general::{embed, large_indicator};
use super::{Construction, Mode};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name, pass, detail: detail.into() }
    }
}

/// `Σ_{|S| ≥ k} ‖F_S‖² ≤ I_f / k` for `k ≥ 1`.
pub fn high_frequency_bound<T: Scalar>(e: &WalshExpansion<T>, k: usize, total_influence: &T) -> Check {
    let weight =
        e.components().filter(|(s, _)| s.len() >= k).fold(T::zero(), |acc, (s, _)| acc + e.sq_norm(s));
    let bound = total_influence.clone() / T::from_int(k as i64);
    Check::new(
        "high-frequency-weight",
        weight.approx_le(&bound, FLOAT_TOL),
        format!("weight {} vs I_f/k {}", weight.to_f64(), bound.to_f64()),
    )
}

/// `‖f - h‖_1 ≤ 4 ‖f - E[f|F_𝒥]‖_2²`.
pub fn rounding_bound<T: Scalar>(c: &Construction<T>) -> Check {
    let bound = T::from_int(4) * &c.report.sq_error;
    Check::new(
        "rounding",
        c.report.l1_error.approx_le(&bound, FLOAT_TOL),
        format!("l1 {} vs 4*sq {}", c.report.l1_error.to_f64(), bound.to_f64()),
    )
}

/// `∫|J_𝒥| ≤ Σ_T |T| ∫J_T ≤ k Σ_{|T|≤k} ∫J_T`.
pub fn cost_accounting<T: Scalar>(collection: &JuntaCollection<T>, k: &T) -> Result<Check> {
    let space = collection.space();
    let mut weighted = T::zero();
    let mut plain = T::zero();
    for e in collection.entries() {
        let bits = collection.detector_table(e.set())?;
        let mass =
            Table::new(space, e.set(), bits.iter().map(|&b| bool_t::<T>(b)).collect())?.integral(space);
        weighted += &(T::from_int(e.set().len() as i64) * &mass);
        plain += &mass;
    }
    let cost = collection.cost()?;
    let bound = k.clone() * &plain;
    let pass = cost.approx_le(&weighted, FLOAT_TOL) && weighted.approx_le(&bound, FLOAT_TOL);
    Ok(Check::new(
        "cost-accounting",
        pass,
        format!("cost {} <= {} <= {}", cost.to_f64(), weighted.to_f64(), bound.to_f64()),
    ))
}

pub fn monotone_detectors<T: Scalar>(collection: &JuntaCollection<T>) -> Result<Check> {
    let ok = collection.detectors_increasing()?;
    Ok(Check::new(
        "monotone-detectors",
        ok,
        if ok { "all increasing" } else { "a detector is not increasing" },
    ))
}

/// `G_S` depends on `S` only and integrates to zero along each `i ∈ S`.
pub fn walsh_conditions<T: Scalar>(space: &ProductSpace<T>, g_s: &Table<T>) -> bool {
    g_s.support().iter().all(|i| g_s.integrate_coord(space, i).is_zero(FLOAT_TOL))
}

/// `1[|F_S| > ε₁] ≤ ξ_S ≤ J_S` for `S ∈ 𝒮`, and `ξ_T ≤ J_T` for every `T`.
pub fn sandwich<T: Scalar>(c: &Construction<T>) -> Result<Check> {
    let Some(art) = &c.general else {
        return Ok(Check::new("sandwich", true, "not applicable"));
    };
    let mut bad = Vec::new();
    for (t, xi) in &art.xi {
        let j = c.collection.detector_table(*t)?;
        if xi.iter().zip(&j).any(|(&x, &jj)| x && !jj) {
            bad.push(format!("xi_{t} > J_{t}"));
        }
    }
    for &s in &c.selected {
        let ind = large_indicator(c.expansion.component(s), &c.constants.eps1);
        let xi = &art.xi[&s];
        if ind.values().iter().zip(xi).any(|(v, &x)| *v == T::one() && !x) {
            bad.push(format!("1[|F_{s}| > eps1] > xi_{s}"));
        }
    }
    Ok(Check::new("sandwich", bad.is_empty(), bad.join("; ")))
}

/// `G_S` satisfies the Walsh conditions on `X^S` for every `S ∈ 𝒮`.
pub fn modified_is_walsh<T: Scalar>(c: &Construction<T>) -> Check {
    let Some(art) = &c.general else {
        return Check::new("modified-walsh", true, "not applicable");
    };
    let space = c.expansion.space();
    let bad: Vec<String> = art
        .modified
        .iter()
        .filter(|(_, m)| !walsh_conditions(space, &m.g))
        .map(|(s, _)| s.to_string())
        .collect();
    Check::new("modified-walsh", bad.is_empty(), bad.join(", "))
}

/// `‖H_T‖_∞ ≤ δ` for every `T ⊊ S`, `S ∈ 𝒮`.
pub fn residues_small<T: Scalar>(c: &Construction<T>) -> Check {
    let Some(art) = &c.general else {
        return Check::new("residues-small", true, "not applicable");
    };
    let mut worst = T::zero();
    for m in art.modified.values() {
        for (_, h) in &m.residues {
            let v = h.sup_norm();
            if v > worst {
                worst = v;
            }
        }
    }
    Check::new(
        "residues-small",
        worst.approx_le(&c.constants.delta, FLOAT_TOL),
        format!("max |H_T| {:e} vs delta {:e}", worst.to_f64(), c.constants.delta.to_f64()),
    )
}

/// `|G_S| ≤ a_S` pointwise.
pub fn weights_dominate<T: Scalar>(c: &Construction<T>) -> Check {
    let Some(art) = &c.general else {
        return Check::new("weights-dominate", true, "not applicable");
    };
    let bad: Vec<String> = art
        .modified
        .iter()
        .filter(|(s, m)| {
            let a = &art.a[s];
            m.g.values().iter().zip(a.values()).any(|(g, a)| !g.abs_val().approx_le(a, FLOAT_TOL))
        })
        .map(|(s, _)| s.to_string())
        .collect();
    Check::new("weights-dominate", bad.is_empty(), bad.join(", "))
}

/// `Σ_{S∈𝒮} ∫ a_S ≤ δ^{-3k}`.
pub fn weights_total<T: Scalar>(c: &Construction<T>) -> Check {
    let (Some(art), Some(bound)) = (&c.general, &c.constants.a_total_bound) else {
        return Check::new("weights-total", true, "not applicable");
    };
    let space = c.expansion.space();
    let total = art.a.values().fold(T::zero(), |acc, a| acc + a.integral(space));
    Check::new(
        "weights-total",
        total.approx_le(bound, FLOAT_TOL),
        format!("log2 sum {:.3} vs log2 bound {:.3}", log2_of(&total), log2_of(bound)),
    )
}

/// For every `T`, `R ⊆ T` and `y ∈ X^R`: either `∫ J_T(y, ·) ≤ δ₀` or
/// `J_T ≡ 1` on the fiber over `y`.
pub fn dichotomy<T: Scalar>(collection: &JuntaCollection<T>, delta0: &T) -> Result<Check> {
    let space = collection.space();
    let mut bad = Vec::new();
    for e in collection.entries() {
        let t = e.set();
        let bits = collection.detector_table(t)?;
        let table = Table::new(space, t, bits.iter().map(|&b| bool_t::<T>(b)).collect())?;
        for (mask, m) in table.all_marginals(space).iter().enumerate() {
            let r = Subset(mask as u32).expand(t);
            for v in m.values() {
                let full = v.approx_eq(&T::one(), FLOAT_TOL);
                if !(full || v.approx_le(delta0, FLOAT_TOL)) {
                    bad.push(format!("J_{t} over {r}: mass {}", v.to_f64()));
                }
            }
        }
    }
    Ok(Check::new("dichotomy", bad.is_empty(), bad.join("; ")))
}

/// For `S ∈ 𝒮`, `y ∈ X^S` with `J_{𝒥_S}(y) = A`:
/// `∫ 1[J_{𝒥_S}(y_A, x_{S\A}) = A] dx_{S\A} ≥ 1/2`.
pub fn fat_atoms<T: Scalar>(collection: &JuntaCollection<T>, selected: &[Subset]) -> Result<Check> {
    let space = collection.space();
    let n = space.n();
    let half = T::from_ratio(1, 2);
    let mut worst: Option<T> = None;
    for &s in selected {
        let cs = collection.restrict_to(s);
        for (y, _) in space.enumerate(s)? {
            let y_full = embed(n, s, y.values());
            let a = cs.junta_map(&y_full);
            let free = s.difference(a);
            let mut mass = T::zero();
            for (z, w) in space.enumerate(free)? {
                let mut x = y_full.clone();
                for (i, v) in z.iter() {
                    x[i] = v;
                }
                if cs.junta_map(&x) == a {
                    mass += &w;
                }
            }
            if worst.as_ref().is_none_or(|m| mass < *m) {
                worst = Some(mass);
            }
        }
    }
    let worst = worst.unwrap_or_else(T::one);
    Ok(Check::new(
        "fat-atoms",
        half.approx_le(&worst, FLOAT_TOL),
        format!("smallest fiber mass {}", worst.to_f64()),
    ))
}

/// Every invariant that applies to the construction's mode.
pub fn all_checks<T: Scalar>(c: &Construction<T>) -> Result<Vec<Check>> {
    let k = c.constants.max_size.max(1);
    let mut out = vec![
        high_frequency_bound(&c.expansion, k, &c.report.total_influence),
        rounding_bound(c),
        cost_accounting(&c.collection, &c.constants.k)?,
    ];
    match c.schedule.mode {
        Mode::PBiased => {
            let p_small = c.expansion.space().common_bias().is_some_and(|p| *p <= T::from_ratio(1, 2));
            if p_small {
                out.push(monotone_detectors(&c.collection)?);
            }
        }
        Mode::General => {
            out.push(sandwich(c)?);
            out.push(modified_is_walsh(c));
            out.push(residues_small(c));
            out.push(weights_dominate(c));
            out.push(weights_total(c));
            out.push(dichotomy(&c.collection, c.constants.delta0.as_ref().expect("general"))?);
            out.push(fat_atoms(&c.collection, &c.selected)?);
        }
    }
    Ok(out)
}

fn bool_t<T: Scalar>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

fn log2_of<T: Scalar>(v: &T) -> f64 {
    let r = v.to_rational();
    if r <= crate::scalar::Rational::from_integer(0.into()) {
        return f64::NEG_INFINITY;
    }
    (r.numer().bits() as f64) - (r.denom().bits() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{Builtin, FunctionRep};
    use crate::constructor::{construct, ConstructOptions, Overrides};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn pbiased_invariants_hold() {
        let space = ProductSpace::p_biased(4, q(1, 4)).unwrap();
        let f = FunctionRep::builtin(space, Builtin::Or).unwrap();
        let o = Overrides::parse(["k=3", "eps1=1/20", "delta=1/100"]).unwrap();
        let c = construct(&f, &ConstructOptions::new(Mode::PBiased, q(1, 2)).with_overrides(o)).unwrap();
        for check in all_checks(&c).unwrap() {
            assert!(check.pass, "{check:?}");
        }
    }

    #[test]
    fn general_invariants_hold() {
        let space = ProductSpace::p_biased(3, q(1, 3)).unwrap();
        let f = FunctionRep::builtin(space, Builtin::Majority).unwrap();
        let o = Overrides::parse(["k=1"]).unwrap();
        let c = construct(&f, &ConstructOptions::new(Mode::General, q(1, 2)).with_overrides(o)).unwrap();
        let checks = all_checks(&c).unwrap();
        assert_eq!(checks.len(), 10);
        for check in checks {
            assert!(check.pass, "{check:?}");
        }
    }

    #[test]
    fn dichotomy_detects_violation() {
        let space = ProductSpace::p_biased(2, q(1, 2)).unwrap();
        let mut c = JuntaCollection::new(space);
        c.insert(Subset::full(2), crate::pseudojunta::Detector::Table(vec![false, true, true, true]))
            .unwrap();
        // Over R = ∅ the mass is 3/4: neither ≤ 1/16 nor full.
        assert!(!dichotomy(&c, &q(1, 16)).unwrap().pass);
    }
}
