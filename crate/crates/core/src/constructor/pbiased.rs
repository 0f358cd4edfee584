//! The construction under a p-biased measure.
//!
//! `𝒮 = {S : |S| ≤ k, ‖F_S‖_∞ > ε₁}`, and for `T ⊆ [n]`, `|T| ≤ k`,
//! `J_T(y) = 1` iff `m_T ≥ δ μ(y)` where the activation mass
//! `m_T = Σ_{S∈𝒮, S⊇T} ∫ 1[|F_S| ≥ ε₁]` does not depend on `y`.

use crate::error::Result;
use crate::pseudojunta::{Detector, JuntaCollection};
use crate::scalar::Scalar;
use crate::subset::Subset;
use crate::walsh::WalshExpansion;

/// `(T, m_T)` for every activated `T`.
pub type Activation<T> = Vec<(Subset, T)>;

/// `{S : |S| ≤ max_size, ‖F_S‖_∞ > ε₁}`, ordered by size then lexicographically.
pub fn select_pbiased<T: Scalar>(e: &WalshExpansion<T>, max_size: usize, eps1: &T) -> Vec<Subset> {
    let mut out: Vec<Subset> =
        e.components().map(|(s, _)| s).filter(|s| s.len() <= max_size && e.sup_norm(*s) > eps1).collect();
    out.sort_by(|a, b| a.cmp_size_lex(*b));
    out
}

/// `m_T` for every `T` contained in some member of `𝒮`; all other `T`
/// have `m_T = 0` and hence `J_T ≡ 0`.
pub fn activation_masses<T: Scalar>(
    e: &WalshExpansion<T>,
    selected: &[Subset],
    eps1: &T,
) -> Vec<(Subset, T)> {
    let space = e.space();
    let per_s: Vec<(Subset, T)> =
        selected.iter().map(|&s| (s, e.component(s).mass_where(space, |v| v.abs_val() >= *eps1))).collect();
    let mut targets: Vec<Subset> = selected.iter().flat_map(|s| s.subsets()).collect();
    targets.sort_by(|a, b| a.cmp_size_lex(*b));
    targets.dedup();
    targets
        .into_iter()
        .map(|t| {
            let m = per_s.iter().filter(|(s, _)| t.is_subset_of(*s)).fold(T::zero(), |acc, (_, v)| acc + v);
            (t, m)
        })
        .collect()
}

/// The collection `𝒥` together with the activation masses used.
pub fn build_j_pbiased<T: Scalar>(
    e: &WalshExpansion<T>,
    selected: &[Subset],
    delta: &T,
    eps1: &T,
) -> Result<(JuntaCollection<T>, Activation<T>)> {
    let space = e.space();
    let masses = activation_masses(e, selected, eps1);
    let mut c = JuntaCollection::new(space.clone());
    for (t, m) in &masses {
        let bits = space.measure_table(*t)?.into_iter().map(|mu| *m >= delta.clone() * &mu).collect();
        c.insert(*t, Detector::Table(bits))?;
    }
    Ok((c, masses))
}
