//! Increasing functions: restrictions that push `E[f]` close to 1, and the
//! FKG correlation inequality.

use std::cmp::Ordering;

use crate::boolfn::FunctionRep;
use crate::error::{Error, Result};
use crate::pseudojunta::JuntaCollection;
use crate::scalar::Scalar;
use crate::space::PartialPoint;
use crate::subset::{subsets_up_to, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoostMethod {
    BruteForce,
    AtomBased,
}

impl BoostMethod {
    pub fn tag(self) -> &'static str {
        match self {
            BoostMethod::BruteForce => "brute-force",
            BoostMethod::AtomBased => "atom-based",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoostReport<T> {
    pub set: Subset,
    /// `E[f | x_S = (1, .., 1)]`, measured.
    pub value: T,
    pub alpha: T,
    pub epsilon: T,
    pub method: BoostMethod,
    /// The atom `(S, y₀)` the set came from (atom-based search).
    pub atom: Option<PartialPoint>,
    /// `E[f | atom]` for that atom.
    pub atom_density: Option<T>,
}

/// Smallest `S` (by size, then lexicographically) with `|S| ≤ max_size`
/// and `E[f | x_S = 1] ≥ 1 - ε`.
pub fn boost_bruteforce<T: Scalar>(
    f: &FunctionRep<T>,
    epsilon: &T,
    max_size: usize,
) -> Result<Option<BoostReport<T>>> {
    if !f.is_increasing()? {
        return Err(Error::NotIncreasing);
    }
    let target = T::one() - epsilon;
    for s in subsets_up_to(f.n(), max_size.min(f.n())) {
        let value = f.all_ones_conditional(s)?;
        if value >= target {
            return Ok(Some(BoostReport {
                set: s,
                value,
                alpha: f.expectation()?,
                epsilon: epsilon.clone(),
                method: BoostMethod::BruteForce,
                atom: None,
                atom_density: None,
            }));
        }
    }
    Ok(None)
}

/// Atoms of `F_𝒥` with `E[f | atom] ≥ 1 - ε`, tried from the densest (ties:
/// smaller `|S|`, then lexicographic `S`, then lexicographic `y₀`). Returns
/// the first whose set `S` measures `E[f | x_S = 1] ≥ 1 - ε`.
pub fn boost_via_atoms<T: Scalar>(
    f: &FunctionRep<T>,
    collection: &JuntaCollection<T>,
    epsilon: &T,
) -> Result<BoostReport<T>> {
    if !f.is_increasing()? {
        return Err(Error::NotIncreasing);
    }
    let target = T::one() - epsilon;
    let atoms = collection.atoms()?;
    let densities = atoms.averages(f.space(), &f.values()?)?;
    let mut order: Vec<usize> = (0..atoms.len()).filter(|&i| densities[i] >= target).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (&atoms.atoms[a].key, &atoms.atoms[b].key);
        densities[b]
            .partial_cmp(&densities[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| ka.support().cmp_size_lex(kb.support()))
            .then_with(|| ka.values().cmp(kb.values()))
    });
    let tried = order.len();
    for i in order {
        let key = &atoms.atoms[i].key;
        let value = f.all_ones_conditional(key.support())?;
        if value >= target {
            return Ok(BoostReport {
                set: key.support(),
                value,
                alpha: f.expectation()?,
                epsilon: epsilon.clone(),
                method: BoostMethod::AtomBased,
                atom: Some(key.clone()),
                atom_density: Some(densities[i].clone()),
            });
        }
    }
    Err(Error::NoQualifyingAtom(format!(
        "{tried} atoms reach density {target} but none of their sets does when pinned to ones"
    )))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FkgReport<T> {
    /// `∫ g1 g2`.
    pub joint: T,
    /// `∫ g1 · ∫ g2`.
    pub product: T,
    pub pass: bool,
}

/// Checks `∫ g1 g2 ≤ ∫ g1 ∫ g2` for increasing `g1` and decreasing `g2`.
pub fn fkg_check<T: Scalar>(g1: &FunctionRep<T>, g2: &FunctionRep<T>) -> Result<FkgReport<T>> {
    if !g1.is_increasing()? {
        return Err(Error::MonotonicityViolated("first function is not increasing".into()));
    }
    if !g2.is_decreasing()? {
        return Err(Error::MonotonicityViolated("second function is not decreasing".into()));
    }
    let space = g1.space();
    let a = g1.to_table()?;
    let b = g2.to_table()?;
    let joint = a.zip_with(&b, |x, y| x.clone() * y).integral(space);
    let product = a.integral(space) * b.integral(space);
    let pass = joint.approx_le(&product, 1e-12);
    Ok(FkgReport { joint, product, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Builtin;
    use crate::scalar::Rational;
    use crate::space::ProductSpace;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn f(n: usize, p: Rational, b: Builtin) -> FunctionRep<Rational> {
        FunctionRep::builtin(ProductSpace::p_biased(n, p).unwrap(), b).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        for p in [q(1, 2), q(1, 5)] {
            let r = boost_bruteforce(&f(3, p, Builtin::Or), &q(0, 1), 3).unwrap().unwrap();
            assert_eq!(r.set, Subset::singleton(0));
            assert_eq!(r.value, q(1, 1));
        }
        let r = boost_bruteforce(&f(3, q(1, 2), Builtin::And), &q(0, 1), 3).unwrap().unwrap();
        assert_eq!(r.set, Subset::full(3));
        let maj = f(3, q(1, 2), Builtin::Majority);
        assert_eq!(maj.all_ones_conditional(Subset::singleton(0)).unwrap(), q(3, 4));
        let r = boost_bruteforce(&maj, &q(1, 5), 2).unwrap().unwrap();
        assert_eq!(r.set, Subset::from_indices([0, 1]));
        assert!(boost_bruteforce(&maj, &q(1, 5), 1).unwrap().is_none());
        let parity = f(3, q(1, 2), Builtin::Parity);
        assert_eq!(boost_bruteforce(&parity, &q(0, 1), 3), Err(Error::NotIncreasing));
    }

    #[test]
    fn atom_examples() {
        let space = ProductSpace::p_biased(3, q(1, 3)).unwrap();
        let or = FunctionRep::builtin(space.clone(), Builtin::Or).unwrap();
        let oc = JuntaCollection::or_example(space.clone()).unwrap();
        let r = boost_via_atoms(&or, &oc, &q(0, 1)).unwrap();
        assert_eq!(r.set, Subset::singleton(0));
        assert_eq!(r.value, q(1, 1));
        assert_eq!(r.atom_density, Some(q(1, 1)));

        let one = FunctionRep::builtin(space.clone(), Builtin::Const(true)).unwrap();
        let r = boost_via_atoms(&one, &JuntaCollection::new(space), &q(0, 1)).unwrap();
        assert_eq!(r.value, q(1, 1));
        assert_eq!(r.set, Subset::EMPTY);

        let maj = f(3, q(1, 2), Builtin::Majority);
        let a = Subset::from_indices([0, 1]);
        let c = JuntaCollection::junta(maj.space().clone(), a).unwrap();
        let r = boost_via_atoms(&maj, &c, &q(1, 10)).unwrap();
        assert_eq!(r.set, a);
        assert_eq!(r.atom.unwrap().values(), &[1, 1]);
        assert_eq!(r.value, q(1, 1));
    }

    #[test]
    fn atoms_without_candidate() {
        let maj = f(3, q(1, 2), Builtin::Majority);
        let c = JuntaCollection::new(maj.space().clone());
        assert!(matches!(boost_via_atoms(&maj, &c, &q(1, 10)), Err(Error::NoQualifyingAtom(_))));
    }

    #[test]
    fn fkg_examples() {
        let space = ProductSpace::p_biased(2, q(1, 2)).unwrap();
        let g1 = FunctionRep::builtin(space.clone(), Builtin::And).unwrap();
        let g2 = FunctionRep::from_predicate(space.clone(), |x| x[0] == 0).unwrap();
        let r = fkg_check(&g1, &g2).unwrap();
        assert_eq!((r.joint, r.product.clone(), r.pass), (q(0, 1), q(1, 8), true));

        for p in [q(1, 2), q(1, 7)] {
            let s3 = ProductSpace::p_biased(3, p).unwrap();
            let or = FunctionRep::builtin(s3.clone(), Builtin::Or).unwrap();
            let nand = FunctionRep::from_predicate(s3, |x| !x.iter().all(|&v| v == 1)).unwrap();
            assert!(fkg_check(&or, &nand).unwrap().pass);
        }

        let one = FunctionRep::builtin(space.clone(), Builtin::Const(true)).unwrap();
        let r = fkg_check(&g1, &one).unwrap();
        assert_eq!(r.joint, r.product);
        assert!(matches!(fkg_check(&g2, &g1), Err(Error::MonotonicityViolated(_))));
    }
}
