//! The construction on an arbitrary finite product space.
//!
//! For `S ∈ 𝒮` the component `F_S` is cut down by a Boolean `ψ_S` and
//! replaced by the top Walsh component `G_S` of `F_S ψ_S`. The weights `a_S`
//! dominate `|G_S|`; thresholding their marginals gives `ξ_T`, and the
//! detectors `J_T` fire wherever some marginal of `ξ_T` is not too small.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::pseudojunta::{Detector, JuntaCollection};
use crate::scalar::Scalar;
use crate::space::ProductSpace;
use crate::subset::Subset;
use crate::table::Table;
use crate::walsh::{WalshExpansion, FLOAT_TOL};

/// `{S : |S| ≤ max_size, ∫F_S² 1[|F_S| ≤ ε₁] ≤ ε₀ k⁻¹ ∫F_S²}` without the
/// components that vanish identically.
pub fn select_general<T: Scalar>(
    e: &WalshExpansion<T>,
    max_size: usize,
    eps0: &T,
    k: &T,
    eps1: &T,
) -> Vec<Subset> {
    let space = e.space();
    let ratio = eps0.clone() / k.clone();
    let mut out: Vec<Subset> = e
        .components()
        .filter(|(s, c)| s.len() <= max_size && !c.is_zero(FLOAT_TOL))
        .filter(|(s, c)| {
            let low = c.map(|v| if v.abs_val() <= *eps1 { v.clone() * v } else { T::zero() }).integral(space);
            low <= ratio.clone() * e.sq_norm(*s)
        })
        .map(|(s, _)| s)
        .collect();
    out.sort_by(|a, b| a.cmp_size_lex(*b));
    out
}

/// `1[|F_S| > ε₁]` as a 0/1 table over `X^S`.
pub fn large_indicator<T: Scalar>(f_s: &Table<T>, eps1: &T) -> Table<T> {
    f_s.map(|v| if v.abs_val() > *eps1 { T::one() } else { T::zero() })
}

/// `ψ_S(y) = 1` iff for some `T ⊆ S`,
/// `∫ 1[|F_S(y_T, x_{S\T})| > ε₁] dx_{S\T} ≥ δ^{2|S\T|}`.
pub fn psi<T: Scalar>(space: &ProductSpace<T>, f_s: &Table<T>, delta: &T, eps1: &T) -> Result<Vec<bool>> {
    let s = f_s.support();
    let marginals = large_indicator(f_s, eps1).all_marginals(space);
    let delta_sq = delta.clone() * delta;
    let thresholds: Vec<T> = (0..=s.len()).map(|d| delta_sq.powi(d as u32)).collect();
    let n = space.n();
    let t = Table::from_fn(space, s, |local| {
        let x = embed(n, s, local);
        let fires = marginals.iter().enumerate().any(|(mask, m)| {
            let free = s.len() - Subset(mask as u32).len();
            *m.at_point(&x) >= thresholds[free]
        });
        if fires {
            T::one()
        } else {
            T::zero()
        }
    })?;
    Ok(t.values().iter().map(|v| *v == T::one()).collect())
}

/// Walsh expansion of `F_S ψ_S` over `X^S`.
#[derive(Clone, Debug)]
pub struct ModifiedComponent<T> {
    /// `G_S = H_S`, over `X^S`.
    pub g: Table<T>,
    /// `H_T` for `T ⊊ S`, each over `X^T`.
    pub residues: Vec<(Subset, Table<T>)>,
}

pub fn modified_component<T: Scalar>(
    space: &ProductSpace<T>,
    f_s: &Table<T>,
    psi: &[bool],
) -> Result<ModifiedComponent<T>> {
    let s = f_s.support();
    let sub = space.subspace(s);
    let local_full = Subset::full(s.len());
    let product: Vec<T> =
        f_s.values().iter().zip(psi).map(|(v, &on)| if on { v.clone() } else { T::zero() }).collect();
    let e = WalshExpansion::of_table(&sub, &Table::new(&sub, local_full, product)?)?;
    let globalize = |local: Subset, t: &Table<T>| -> Result<Table<T>> {
        Table::new(space, local.expand(s), t.values().to_vec())
    };
    let g = globalize(local_full, e.component(local_full))?;
    let residues = e
        .components()
        .filter(|(t, _)| *t != local_full)
        .map(|(t, c)| Ok((t.expand(s), globalize(t, c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModifiedComponent { g, residues })
}

/// `a_S(y) = scale · Σ_{T⊆S} ∫ 1[|F_S(y_{S\T}, x_T)| > ε₁] dx_T` with
/// `scale = 2^{3k} δ^{-2k}`.
pub fn a_weight<T: Scalar>(space: &ProductSpace<T>, f_s: &Table<T>, scale: &T, eps1: &T) -> Result<Table<T>> {
    let s = f_s.support();
    let marginals = large_indicator(f_s, eps1).all_marginals(space);
    let n = space.n();
    Table::from_fn(space, s, |local| {
        let x = embed(n, s, local);
        let sum = marginals.iter().fold(T::zero(), |acc, m| acc + m.at_point(&x));
        scale.clone() * &sum
    })
}

/// Per-`T` outputs of [`build_j_general`].
#[derive(Clone, Debug)]
pub struct GeneralCollection<T> {
    pub collection: JuntaCollection<T>,
    /// `ξ_T` over `X^T` for every `T` contained in a member of `𝒮`.
    pub xi: BTreeMap<Subset, Vec<bool>>,
    /// `Σ_{R⊆T} Σ_{S∈𝒮, S⊇T} ∫ a_S(y_R, x_{S\R}) dx_{S\R}` over `X^T`.
    pub xi_score: BTreeMap<Subset, Table<T>>,
}

/// `ξ_T(y) = 1` iff the score above exceeds `ε₂`; `J_T(y) = 1` iff for some
/// `R ⊆ T`, `∫ ξ_T(y_R, x_{T\R}) dx_{T\R} ≥ δ₀^{2|T\R|}`.
///
/// Sets `T` outside every member of `𝒮` have an empty sum, so `ξ_T ≡ 0`
/// and `J_T ≡ 0`; only subsets of members are visited.
pub fn build_j_general<T: Scalar>(
    space: &ProductSpace<T>,
    a: &BTreeMap<Subset, Table<T>>,
    max_size: usize,
    delta0: &T,
    eps2: &T,
) -> Result<GeneralCollection<T>> {
    let n = space.n();
    let a_marginals: BTreeMap<Subset, Vec<Table<T>>> =
        a.iter().map(|(s, t)| (*s, t.all_marginals(space))).collect();
    let mut targets: Vec<Subset> =
        a.keys().flat_map(|s| s.subsets()).filter(|t| t.len() <= max_size).collect();
    targets.sort_by(|x, y| x.cmp_size_lex(*y));
    targets.dedup();

    let delta0_sq = delta0.clone() * delta0;
    let mut collection = JuntaCollection::new(space.clone());
    let mut xi = BTreeMap::new();
    let mut xi_score = BTreeMap::new();
    for t in targets {
        let score = Table::from_fn(space, t, |local| {
            let x = embed(n, t, local);
            let mut acc = T::zero();
            for (s, margs) in a_marginals.iter().filter(|(s, _)| t.is_subset_of(**s)) {
                for r in t.subsets() {
                    acc += margs[r.compress(*s).bits() as usize].at_point(&x);
                }
            }
            acc
        })?;
        let xi_t = score.map(|v| if *v > *eps2 { T::one() } else { T::zero() });
        let xi_marg = xi_t.all_marginals(space);
        let thresholds: Vec<T> = (0..=t.len()).map(|d| delta0_sq.powi(d as u32)).collect();
        let j = Table::from_fn(space, t, |local| {
            let x = embed(n, t, local);
            let fires = xi_marg.iter().enumerate().any(|(mask, m)| {
                let free = t.len() - Subset(mask as u32).len();
                *m.at_point(&x) >= thresholds[free]
            });
            if fires {
                T::one()
            } else {
                T::zero()
            }
        })?;
        let bits: Vec<bool> = j.values().iter().map(|v| *v == T::one()).collect();
        collection.insert(t, Detector::Table(bits))?;
        xi.insert(t, xi_t.values().iter().map(|v| *v == T::one()).collect());
        xi_score.insert(t, score);
    }
    Ok(GeneralCollection { collection, xi, xi_score })
}

/// A full point with `local` written into the coordinates of `s`.
pub(crate) fn embed(n: usize, s: Subset, local: &[usize]) -> Vec<usize> {
    let mut x = vec![0; n];
    for (i, v) in s.iter().zip(local) {
        x[i] = *v;
    }
    x
}
