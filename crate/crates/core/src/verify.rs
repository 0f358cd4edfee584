//! Randomized invariant suites, one per module, in exact arithmetic.
//!
//! Trial `t` of suite number `s` draws from `stream_rng(seed, (s << 32) | t)`,
//! so every trial is reproducible on its own.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::boolfn::FunctionRep;
use crate::constructor::{checks, construct, ConstructOptions, Mode, Overrides};
use crate::error::{Error, Result};
use crate::influence::{influences_exact, influences_spectral};
use crate::monotone::{boost_bruteforce, boost_via_atoms, fkg_check};
use crate::pseudojunta::{
    check_prop_direct, conditional_expectation, is_measurable, Detector, JuntaCollection,
};
use crate::random::*;
use crate::rng::stream_rng;
use crate::scalar::Rational;
use crate::space::{PartialPoint, ProductSpace};
use crate::subset::{subsets_up_to, Subset};
use crate::walsh::{pbiased_coefficients, walsh_expand};

type Q = Rational;

/// Suite names accepted by [`run_suite`], in run order.
pub const SUITES: [&str; 8] =
    ["space", "boolfn", "parseval", "walsh", "influence", "pseudojunta", "monotone", "constructor"];

/// Largest dimension the suites accept.
pub const MAX_N: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct Tally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Trial and detail of the first failure.
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub invariants: Vec<Tally>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.invariants.iter().all(|t| t.failed == 0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "pass": self.all_passed(),
            "invariants": self.invariants.iter().map(|t| json!({
                "name": t.name,
                "passed": t.passed,
                "checked": t.passed + t.failed,
                "first_failure": t.first_failure,
            })).collect::<Vec<_>>(),
        })
    }
}

struct Recorder {
    tallies: Vec<Tally>,
    trial: usize,
}

impl Recorder {
    fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let pos = match self.tallies.iter().position(|t| t.name == name) {
            Some(p) => p,
            None => {
                self.tallies.push(Tally { name, passed: 0, failed: 0, first_failure: None });
                self.tallies.len() - 1
            }
        };
        let t = &mut self.tallies[pos];
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if t.first_failure.is_none() {
                t.first_failure = Some(format!("trial {}: {}", self.trial, detail()));
            }
        }
    }
}

/// Runs one suite.
pub fn run_suite(suite: &str, n: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let index = SUITES.iter().position(|s| *s == suite).ok_or_else(|| {
        Error::InvalidParameter(format!("unknown suite `{suite}`; known: {}", SUITES.join(", ")))
    })?;
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidParameter(format!("suite dimension must be in 1..={MAX_N}, got {n}")));
    }
    let mut rec = Recorder { tallies: Vec::new(), trial: 0 };
    for t in 0..trials {
        rec.trial = t;
        let mut rng = stream_rng(seed, ((index as u64) << 32) | t as u64);
        match index {
            0 => space_trial(&mut rng, n, &mut rec)?,
            1 => boolfn_trial(&mut rng, n, &mut rec)?,
            2 => parseval_trial(&mut rng, n, &mut rec)?,
            3 => walsh_trial(&mut rng, n, &mut rec)?,
            4 => influence_trial(&mut rng, n, &mut rec)?,
            5 => pseudojunta_trial(&mut rng, n, &mut rec)?,
            6 => monotone_trial(&mut rng, n, &mut rec)?,
            _ => constructor_trial(&mut rng, n, &mut rec)?,
        }
    }
    Ok(SuiteReport { suite: SUITES[index], n, trials, seed, invariants: rec.tallies })
}

/// Runs every suite.
pub fn run_all(n: usize, trials: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, n, trials, seed)).collect()
}

fn any_space(rng: &mut ChaCha8Rng, n: usize) -> Result<ProductSpace<Q>> {
    if rng.random_bool(0.5) {
        random_pbiased_space(rng, n)
    } else {
        random_finite_space(rng, n, 3)
    }
}

fn any_function(rng: &mut ChaCha8Rng, space: &ProductSpace<Q>) -> Result<FunctionRep<Q>> {
    if rng.random_bool(0.75) {
        random_boolean(rng, space)
    } else {
        random_real(rng, space)
    }
}

/// Splits a random subset into two disjoint random parts.
fn disjoint_pair(rng: &mut ChaCha8Rng, n: usize) -> (Subset, Subset) {
    let s = random_subset(rng, n);
    let a = Subset::from_indices(s.iter().filter(|_| rng.random_bool(0.5)));
    (a, s.difference(a))
}

fn space_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = random_finite_space::<Q, _>(rng, n, 3)?;
    let s = random_subset(rng, n);
    let total = space.measure_table(s)?.into_iter().fold(Q::zero(), |a, b| a + b);
    rec.record("marginal-mass-one", total.is_one(), || format!("S={s}: total {total}"));

    let (a, b) = disjoint_pair(rng, n);
    let y = random_partial_point(rng, &space, a);
    let z = random_partial_point(rng, &space, b);
    let joint = space.measure(&y.compose(&z)?)?;
    let product = space.measure(&y)? * space.measure(&z)?;
    rec.record("product-measure", joint == product, || format!("{joint} != {product}"));

    let len = space.check_enumerable(space.full())?;
    let k = rng.random_range(0..len);
    let order_ok = space.index_of(&space.point_of(k)) == k
        && space.enumerate(space.full())?.nth(k).map(|(x, _)| x.values().to_vec()) == Some(space.point_of(k));
    rec.record("enumeration-order", order_ok, || format!("index {k}"));
    Ok(())
}

fn boolfn_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = any_space(rng, n)?;
    let f = any_function(rng, &space)?;
    let same = f.restrict(&PartialPoint::empty())?.values()? == f.values()?;
    rec.record("restrict-empty", same, String::new);

    let (t, r) = disjoint_pair(rng, n);
    let y = random_partial_point(rng, &space, t);
    let z = random_partial_point(rng, &space, r);
    let rest = space.full().difference(t);
    let z_local = PartialPoint::new(r.compress(rest), z.values().to_vec())?;
    let nested = f.restrict(&y)?.restrict(&z_local)?;
    let direct = f.restrict(&y.compose(&z)?)?;
    rec.record("restrict-compose", nested.values()? == direct.values()?, || format!("T={t} R={r}"));

    let bspace = random_pbiased_space::<Q, _>(rng, n)?;
    let g = random_increasing(rng, &bspace)?;
    let s = random_subset(rng, n);
    let y = random_partial_point(rng, &bspace, s);
    let ok = g.restrict(&y)?.is_increasing()?;
    rec.record("increasing-restrict", ok, || format!("T={s}"));
    Ok(())
}

fn parseval_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = any_space(rng, n)?;
    let f = any_function(rng, &space)?;
    let r = walsh_expand(&f)?.parseval_report();
    rec.record("parseval", r.residual.is_zero(), || format!("residual {}", r.residual));
    Ok(())
}

fn walsh_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = any_space(rng, n)?;
    let f = any_function(rng, &space)?;
    let e = walsh_expand(&f)?;
    let r = e.parseval_report();
    rec.record("parseval", r.residual.is_zero(), || format!("residual {}", r.residual));

    let mean_zero = e.components().all(|(s, c)| s.iter().all(|i| c.integrate_coord(&space, i).is_zero(0.0)));
    rec.record("mean-zero", mean_zero, String::new);

    let back = e.reconstruct()?;
    rec.record("reconstruct", back.values()? == f.values()?, String::new);

    let again = walsh_expand(&back)?;
    let unique = e.components().all(|(s, c)| again.component(s) == c);
    rec.record("uniqueness", unique, String::new);

    let full: Vec<(Subset, Vec<Q>)> =
        e.components().map(|(s, _)| Ok((s, e.partial_sum([s])?.into_values()))).collect::<Result<_>>()?;
    let masses = space.measure_table(space.full())?;
    let inner = |a: &[Q], b: &[Q]| {
        a.iter().zip(b).zip(&masses).fold(Q::zero(), |acc, ((x, y), m)| acc + x.clone() * y * m)
    };
    let pairs: Vec<(usize, usize)> = if n <= 4 {
        (0..full.len()).flat_map(|i| (i + 1..full.len()).map(move |j| (i, j))).collect()
    } else {
        (0..32)
            .map(|_| {
                let i = rng.random_range(0..full.len());
                let j = (i + rng.random_range(1..full.len())) % full.len();
                (i, j)
            })
            .collect()
    };
    let bad = pairs.iter().copied().find(|&(i, j)| !inner(&full[i].1, &full[j].1).is_zero());
    rec.record("orthogonality", bad.is_none(), || {
        let (i, j) = bad.expect("failure");
        format!("S1={} S2={}", full[i].0, full[j].0)
    });

    let t = random_subset(rng, n);
    let marginal = f.to_table()?.marginal(&space, t);
    let partial = e.partial_sum(t.subsets())?;
    let ok = (0..partial.len()).all(|idx| {
        let x = space.point_of(idx);
        marginal.at_point(&x) == &partial.values()[idx]
    });
    rec.record("marginal-identity", ok, || format!("T={t}"));

    let bound = e.components().all(|(s, _)| {
        let scale = Q::from_integer((1u64 << s.len()).into());
        *e.sup_norm(s) <= scale * e.f_sup_norm()
    });
    rec.record("fs-infinity", bound, String::new);

    if space.is_binary() && space.common_bias().is_some() {
        let dev = pbiased_coefficients(&f)?.max_deviation(&e);
        rec.record("pbiased-agreement", dev <= 1e-9, || format!("deviation {dev:e}"));
    }
    Ok(())
}

fn influence_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = any_space(rng, n)?;
    let f = random_boolean(rng, &space)?;
    let e = walsh_expand(&f)?;
    let exact = influences_exact(&f)?;
    let spectral = influences_spectral(&e);
    rec.record("definitional-equals-spectral", exact.per_coord == spectral.per_coord, String::new);

    let formula = e
        .components()
        .fold(Q::zero(), |acc, (s, _)| acc + Q::from_integer((2 * s.len() as i64).into()) * e.sq_norm(s));
    rec.record("total-formula", exact.total == formula, || format!("{} != {formula}", exact.total));

    let in_range = exact.per_coord.iter().all(|v| !(*v < Q::zero()) && *v <= Q::one());
    rec.record("range", in_range, String::new);

    let mut bits: Vec<bool> = f.values()?.iter().map(|v| v.is_one()).collect();
    let flips = rng.random_range(1..=3);
    for _ in 0..flips {
        let i = rng.random_range(0..bits.len());
        bits[i] = !bits[i];
    }
    let g = FunctionRep::from_bools(space.clone(), &bits)?;
    let dist = f.l1_distance(&g)?;
    let ig = influences_exact(&g)?;
    let two = Q::from_integer(2.into());
    let stable = exact.per_coord.iter().zip(&ig.per_coord).all(|(a, b)| (a - b).abs() <= two.clone() * &dist);
    rec.record("stability", stable, String::new);
    Ok(())
}

fn pseudojunta_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = any_space(rng, n)?;
    let c = random_collection(rng, &space, 2)?;
    let atoms = c.atoms()?;
    let keys_ok = atoms.total_mass().is_one()
        && atoms.point_atom.iter().enumerate().all(|(idx, &a)| {
            let x = space.point_of(idx);
            let key = &atoms.atoms[a].key;
            key.support() == c.junta_map(&x) && *key == PartialPoint::from_full(&x, key.support())
        });
    rec.record("atoms-partition", keys_ok, String::new);

    let f = any_function(rng, &space)?;
    let cond = conditional_expectation(&f, &c)?;
    let tower = cond.expectation()? == f.expectation()?;
    rec.record("tower", tower, String::new);
    let contraction = cond.to_table()?.sq_norm(&space) <= f.to_table()?.sq_norm(&space);
    rec.record("contraction", contraction, String::new);
    rec.record("conditional-measurable", is_measurable(&cond, &c)?, String::new);

    let h = random_measurable(rng, &space, &atoms)?;
    let mut wider = JuntaCollection::new(space.clone());
    for s in subsets_up_to(n, 2.min(n)) {
        let bits: Vec<bool> = c.detector_table(s)?.into_iter().map(|b| b || rng.random_bool(0.2)).collect();
        wider.insert(s, Detector::Table(bits))?;
    }
    rec.record("dominance", is_measurable(&h, &wider)?, String::new);

    let prop = check_prop_direct(&c, &h)?;
    rec.record("influence-vs-cost", prop.pass, || {
        format!("I_h={} 2cost={}", prop.influence, prop.twice_cost)
    });
    Ok(())
}

fn monotone_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = random_pbiased_space::<Q, _>(rng, n)?;
    let g1 = random_increasing(rng, &space)?;
    let g2 = random_decreasing(rng, &space)?;
    let r = fkg_check(&g1, &g2)?;
    rec.record("fkg", r.pass, || format!("{} > {}", r.joint, r.product));

    let s = random_subset(rng, n);
    let i = rng.random_range(0..n);
    let grows = g1.all_ones_conditional(s)? <= g1.all_ones_conditional(s.with(i))?;
    rec.record("conditional-monotone", grows, || format!("S={s} i={i}"));

    let eps = Q::new(1.into(), 10.into());
    let target = Q::one() - &eps;
    if let Some(b) = boost_bruteforce(&g1, &eps, n)? {
        rec.record("boost-bruteforce-verified", b.value >= target, || format!("value {}", b.value));
    }
    let c = random_collection(rng, &space, 2)?;
    match boost_via_atoms(&g1, &c, &eps) {
        Ok(b) => rec.record("boost-atoms-verified", b.value >= target, || format!("value {}", b.value)),
        Err(Error::NoQualifyingAtom(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(())
}

fn constructor_trial(rng: &mut ChaCha8Rng, n: usize, rec: &mut Recorder) -> Result<()> {
    let space = random_pbiased_space::<Q, _>(rng, n)?;
    let f = random_boolean(rng, &space)?;
    let overrides = Overrides::parse(["k=2", "eps1=1/10", "delta=1/100"])?;
    let opts = ConstructOptions::new(Mode::PBiased, Q::new(1.into(), 2.into())).with_overrides(overrides);
    let c = construct(&f, &opts)?;
    rec.record("l1-recomputed", c.report.l1_error == f.l1_distance(&c.h)?, String::new);
    rec.record("h-measurable", is_measurable(&c.h, &c.collection)?, String::new);
    for check in checks::all_checks(&c)? {
        rec.record(check.name, check.pass, || check.detail.clone());
    }
    Ok(())
}
