//! Structure-theorem pipelines: expand, select, (modify), build `𝒥`,
//! condition on `F_𝒥`, round.
//!
//! The schedules of the theorems are far too extreme to run, so every run
//! either uses overrides (and reports measured quantities only) or is
//! refused with [`Error::ScheduleInfeasible`] before any heavy work.

pub mod checks;
pub mod general;
pub mod pbiased;
pub mod schedule;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::boolfn::FunctionRep;
use crate::error::{Error, Result};
use crate::influence::total_influence_spectral;
use crate::pseudojunta::{conditional_expectation_with, round_half, AtomPartition, JuntaCollection};
use crate::scalar::{Rational, Scalar};
use crate::subset::Subset;
use crate::table::Table;
use crate::walsh::{walsh_expand, WalshExpansion};

pub use general::{a_weight, build_j_general, modified_component, psi, select_general, ModifiedComponent};
pub use pbiased::{activation_masses, build_j_pbiased, select_pbiased};
pub use schedule::{
    c_from_influence, schedule, Constants, Field, Mode, Overrides, ParameterSchedule, PowerProduct,
    DEFAULT_BIT_BUDGET,
};

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructOptions {
    pub mode: Mode,
    pub epsilon: Rational,
    pub overrides: Overrides,
    pub bit_budget: u64,
}

impl ConstructOptions {
    pub fn new(mode: Mode, epsilon: Rational) -> Self {
        ConstructOptions { mode, epsilon, overrides: Overrides::none(), bit_budget: DEFAULT_BIT_BUDGET }
    }

    pub fn with_overrides(mut self, overrides: Overrides) -> Self {
        self.overrides = overrides;
        self
    }
}

/// Intermediate objects of the general pipeline, keyed by `S ∈ 𝒮`.
#[derive(Clone, Debug)]
pub struct GeneralArtifacts<T> {
    pub psi: BTreeMap<Subset, Vec<bool>>,
    pub modified: BTreeMap<Subset, ModifiedComponent<T>>,
    pub a: BTreeMap<Subset, Table<T>>,
    pub xi: BTreeMap<Subset, Vec<bool>>,
    pub xi_score: BTreeMap<Subset, Table<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructReport<T> {
    pub mode: Mode,
    /// `‖f - h‖_1`.
    pub l1_error: T,
    /// `‖f - E[f | F_𝒥]‖_2²`.
    pub sq_error: T,
    /// `∫ |J_𝒥|`.
    pub cost: T,
    /// `α = ∫ f`.
    pub alpha: T,
    pub total_influence: T,
    pub selected: Vec<Subset>,
    pub atoms: usize,
    pub overridden: bool,
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct Construction<T> {
    pub schedule: ParameterSchedule,
    pub constants: Constants<T>,
    pub expansion: WalshExpansion<T>,
    pub selected: Vec<Subset>,
    /// `m_T` per `T` (p-biased mode).
    pub activation: Option<Vec<(Subset, T)>>,
    pub general: Option<GeneralArtifacts<T>>,
    /// `g = Σ_{S∈𝒮} F_S` (p-biased) or `Σ_{S∈𝒮} G_S` (general).
    pub g: Table<T>,
    pub collection: JuntaCollection<T>,
    pub atoms: AtomPartition<T>,
    /// `E[f | F_𝒥]`.
    pub conditional: FunctionRep<T>,
    pub h: FunctionRep<T>,
    pub report: ConstructReport<T>,
}

/// The schedule `construct` would use for `f`.
pub fn schedule_for<T: Scalar>(
    f: &FunctionRep<T>,
    options: &ConstructOptions,
) -> Result<(ParameterSchedule, T)> {
    let e = walsh_expand(f)?;
    let total = total_influence_spectral(&e);
    let c = c_from_influence(&total.to_rational());
    Ok((schedule(&c, &options.epsilon, options.mode, &options.overrides)?, total))
}

/// Runs the pipeline of `options.mode` on a Boolean `f`.
pub fn construct<T: Scalar>(f: &FunctionRep<T>, options: &ConstructOptions) -> Result<Construction<T>> {
    if !f.is_boolean() {
        return Err(Error::InvalidParameter("construct needs a Boolean function".into()));
    }
    let space = f.space();
    if options.mode == Mode::PBiased {
        space.require_binary()?;
        if space.common_bias().is_none() {
            return Err(Error::InvalidParameter("pbiased mode needs a common bias".into()));
        }
    }
    let expansion = walsh_expand(f)?;
    let total_influence = total_influence_spectral(&expansion);
    let c = c_from_influence(&total_influence.to_rational());
    let sched = schedule(&c, &options.epsilon, options.mode, &options.overrides)?;
    let constants: Constants<T> = sched.constants(options.bit_budget)?;
    let k = constants.max_size;

    let (selected, activation, general, collection, g) = match options.mode {
        Mode::PBiased => {
            let selected = select_pbiased(&expansion, k, &constants.eps1);
            let (collection, masses) =
                build_j_pbiased(&expansion, &selected, &constants.delta, &constants.eps1)?;
            let g = expansion.partial_sum(selected.iter().copied())?;
            (selected, Some(masses), None, collection, g)
        }
        Mode::General => {
            let selected = select_general(&expansion, k, &constants.eps0, &constants.k, &constants.eps1);
            let mut art = GeneralArtifacts {
                psi: BTreeMap::new(),
                modified: BTreeMap::new(),
                a: BTreeMap::new(),
                xi: BTreeMap::new(),
                xi_score: BTreeMap::new(),
            };
            let scale = constants.a_scale.clone().expect("general constants");
            for &s in &selected {
                let f_s = expansion.component(s);
                let p = psi(space, f_s, &constants.delta, &constants.eps1)?;
                art.modified.insert(s, modified_component(space, f_s, &p)?);
                art.a.insert(s, a_weight(space, f_s, &scale, &constants.eps1)?);
                art.psi.insert(s, p);
            }
            let out = build_j_general(
                space,
                &art.a,
                k,
                constants.delta0.as_ref().expect("general constants"),
                constants.eps2.as_ref().expect("general constants"),
            )?;
            art.xi = out.xi;
            art.xi_score = out.xi_score;
            let mut g = vec![T::zero(); space.check_enumerable(space.full())?];
            for m in art.modified.values() {
                for (idx, v) in g.iter_mut().enumerate() {
                    *v += m.g.at_point(&space.point_of(idx));
                }
            }
            let g = Table::new(space, space.full(), g)?;
            (selected, None, Some(art), out.collection, g)
        }
    };

    let atoms = collection.atoms()?;
    let conditional = conditional_expectation_with(f, &collection, &atoms)?;
    let h = round_half(&conditional)?;
    let diff = f.to_table()?.zip_with(&conditional.to_table()?, |a, b| a.clone() - b);
    let report = ConstructReport {
        mode: options.mode,
        l1_error: f.l1_distance(&h)?,
        sq_error: diff.sq_norm(space),
        cost: collection.cost()?,
        alpha: f.expectation()?,
        total_influence,
        selected: selected.clone(),
        atoms: atoms.len(),
        overridden: sched.is_overridden(),
    };
    Ok(Construction {
        schedule: sched,
        constants,
        expansion,
        selected,
        activation,
        general,
        g,
        collection,
        atoms,
        conditional,
        h,
        report,
    })
}

impl<T: Scalar> ConstructReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "l1_error": self.l1_error.to_json(),
            "sq_error": self.sq_error.to_json(),
            "cost": self.cost.to_json(),
            "alpha": self.alpha.to_json(),
            "total_influence": self.total_influence.to_json(),
            "selected": self.selected.iter().map(|s| s.indices()).collect::<Vec<_>>(),
            "atoms": self.atoms,
            "overridden": self.overridden,
            "guarantee": if self.overridden { "none: overridden schedule, measured values only" } else { "theorem schedule" },
        })
    }
}
