//! Boolean functions on finite product probability spaces.
//!
//! Generalized Walsh expansions and influences, plus pseudo-junta
//! collections and the structure constructions built on top of them.

pub mod boolfn;
pub mod constructor;
pub mod error;
pub mod influence;
pub mod io;
pub mod monotone;
pub mod pseudojunta;
pub mod random;
pub mod rng;
pub mod scalar;
pub mod space;
pub mod subset;
pub mod table;
pub mod verify;
pub mod walsh;

pub use boolfn::{Builtin, FunctionKind, FunctionRep, RangeTag};
pub use constructor::{
    construct, schedule, ConstructOptions, ConstructReport, Construction, Mode, Overrides, ParameterSchedule,
};
pub use error::{Error, Result};
pub use influence::{
    influence_exact, influence_mc, influence_spectral, influences_exact, influences_mc, influences_spectral,
    russo_sweep, total_influence_spectral, InfluenceMethod, InfluenceReport, McEstimate, RussoRow,
};
pub use io::{collection_to_json, function_to_json, load_collection, load_function};
pub use monotone::{boost_bruteforce, boost_via_atoms, fkg_check, BoostMethod, BoostReport, FkgReport};
pub use pseudojunta::{
    check_prop_direct, conditional_expectation, is_measurable, round_half, Atom, AtomPartition, Detector,
    JuntaCollection, PropReport,
};
pub use scalar::{Rational, Scalar};
pub use space::{PartialPoint, ProductSpace};
pub use subset::Subset;
pub use table::Table;
pub use verify::{run_all, run_suite, SuiteReport};
pub use walsh::{pbiased_coefficients, walsh_expand, PBiasedBasis, ParsevalReport, WalshExpansion};
