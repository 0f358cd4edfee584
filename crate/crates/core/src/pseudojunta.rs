//! Pseudo-juntas.
//!
//! A collection `𝒥 = {J_S}` of Boolean detectors `J_S : X^S → {0,1}` reveals,
//! at each point `x`, the coordinates `J_𝒥(x) = ∪{S : J_S(x_S) = 1}`. The
//! sigma-algebra `F_𝒥` is generated by `x ↦ (J_𝒥(x), x_{J_𝒥(x)})`; its atoms
//! are the level sets of that map.

use std::collections::HashMap;

use rand::Rng;

use crate::boolfn::{bool_value, FunctionRep, RangeTag};
use crate::error::{Error, Result};
use crate::influence::{influences_exact, McEstimate};
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::space::{draw, PartialPoint, ProductSpace};
use crate::subset::Subset;

/// A Boolean function on `X^S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detector {
    Const(bool),
    /// Fires iff every coordinate of `S` carries symbol 1.
    AllOnes,
    /// Values over `X^S` in enumeration order.
    Table(Vec<bool>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    set: Subset,
    detector: Detector,
    strides: Vec<usize>,
}

impl Entry {
    pub fn set(&self) -> Subset {
        self.set
    }

    pub fn detector(&self) -> &Detector {
        &self.detector
    }

    /// `J_S(x_S)` at a full point.
    pub fn fires(&self, x: &[usize]) -> bool {
        match &self.detector {
            Detector::Const(b) => *b,
            Detector::AllOnes => self.set.iter().all(|i| x[i] == 1),
            Detector::Table(bits) => {
                let idx: usize = self.set.iter().zip(&self.strides).map(|(i, s)| x[i] * s).sum();
                bits[idx]
            }
        }
    }

    /// `J_S` at a local point of `X^S`.
    pub fn fires_local(&self, local: &[usize]) -> bool {
        match &self.detector {
            Detector::Const(b) => *b,
            Detector::AllOnes => local.iter().all(|&v| v == 1),
            Detector::Table(bits) => bits[local.iter().zip(&self.strides).map(|(v, s)| v * s).sum::<usize>()],
        }
    }
}

/// The family `𝒥`; absent sets have `J_S ≡ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct JuntaCollection<T> {
    space: ProductSpace<T>,
    entries: Vec<Entry>,
}

impl<T: Scalar> JuntaCollection<T> {
    pub fn new(space: ProductSpace<T>) -> Self {
        JuntaCollection { space, entries: Vec::new() }
    }

    /// The collection with `J_S(x) = 1` iff `x_S = (1, .., 1)`, for every `S`.
    pub fn or_example(space: ProductSpace<T>) -> Result<Self> {
        space.require_binary()?;
        let mut c = JuntaCollection::new(space);
        for s in Subset::full(c.space.n()).subsets() {
            c.insert(s, Detector::AllOnes)?;
        }
        Ok(c)
    }

    /// `{J_A ≡ 1}`: the collection of a junta on `A`.
    pub fn junta(space: ProductSpace<T>, a: Subset) -> Result<Self> {
        let mut c = JuntaCollection::new(space);
        c.insert(a, Detector::Const(true))?;
        Ok(c)
    }

    /// Sets `J_S`, replacing any previous detector; `J_S ≡ 0` removes it.
    pub fn insert(&mut self, s: Subset, detector: Detector) -> Result<()> {
        if !s.is_subset_of(self.space.full()) {
            let coord = s.iter().find(|&i| i >= self.space.n()).unwrap_or(0);
            return Err(Error::CoordinateOutOfRange { coord, n: self.space.n() });
        }
        let sizes: Vec<usize> = s.iter().map(|i| self.space.arity(i)).collect();
        let detector = match detector {
            Detector::Table(bits) => {
                let len = self.space.check_enumerable(s)?;
                if bits.len() != len {
                    return Err(Error::TableLengthMismatch { got: bits.len(), expected: len });
                }
                if bits.iter().all(|&b| b) {
                    Detector::Const(true)
                } else if bits.iter().all(|&b| !b) {
                    Detector::Const(false)
                } else {
                    Detector::Table(bits)
                }
            }
            other => other,
        };
        self.entries.retain(|e| e.set != s);
        if detector != Detector::Const(false) {
            let strides = crate::space::strides_of(&sizes);
            self.entries.push(Entry { set: s, detector, strides });
            self.entries.sort_by(|a, b| a.set.cmp_size_lex(b.set));
        }
        Ok(())
    }

    pub fn space(&self) -> &ProductSpace<T> {
        &self.space
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn entry(&self, s: Subset) -> Option<&Entry> {
        self.entries.iter().find(|e| e.set == s)
    }

    /// Largest `|S|` with `J_S ≢ 0`.
    pub fn max_arity(&self) -> usize {
        self.entries.iter().map(|e| e.set.len()).max().unwrap_or(0)
    }

    /// `𝒥_A = {J_T : T ⊆ A}`.
    pub fn restrict_to(&self, a: Subset) -> Self {
        JuntaCollection {
            space: self.space.clone(),
            entries: self.entries.iter().filter(|e| e.set.is_subset_of(a)).cloned().collect(),
        }
    }

    /// `J_S` as a Boolean table over `X^S` (all zero when absent).
    pub fn detector_table(&self, s: Subset) -> Result<Vec<bool>> {
        let len = self.space.check_enumerable(s)?;
        let Some(e) = self.entry(s) else {
            return Ok(vec![false; len]);
        };
        let sizes: Vec<usize> = s.iter().map(|i| self.space.arity(i)).collect();
        let strides = crate::space::strides_of(&sizes);
        Ok((0..len)
            .map(|idx| {
                let local: Vec<usize> = sizes.iter().zip(&strides).map(|(m, st)| idx / st % m).collect();
                e.fires_local(&local)
            })
            .collect())
    }

    /// `J_𝒥(x)`.
    pub fn junta_map(&self, x: &[usize]) -> Subset {
        self.entries.iter().filter(|e| e.fires(x)).fold(Subset::EMPTY, |acc, e| acc.union(e.set))
    }

    /// `∫ |J_𝒥(x)| dx`.
    pub fn cost(&self) -> Result<T> {
        let mut acc = T::zero();
        for (x, mass) in self.space.enumerate(self.space.full())? {
            let size = self.junta_map(x.values()).len() as i64;
            if size > 0 {
                acc += &(mass * &T::from_int(size));
            }
        }
        Ok(acc)
    }

    /// Sampled `∫ |J_𝒥|`, drawing coordinate `i` from stream `i` of `seed`.
    pub fn cost_mc(&self, seed: u64, samples: usize) -> Result<McEstimate> {
        if samples == 0 {
            return Err(Error::InvalidParameter("sample count must be positive".into()));
        }
        let n = self.space.n();
        let cdfs: Vec<Vec<f64>> = (0..n).map(|i| self.space.cdf(i)).collect();
        let mut rngs: Vec<_> = (0..n as u64).map(|i| stream_rng(seed, i)).collect();
        let mut x = vec![0usize; n];
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for _ in 0..samples {
            for i in 0..n {
                x[i] = draw(&cdfs[i], rngs[i].random::<f64>());
            }
            let c = self.junta_map(&x).len() as f64;
            sum += c;
            sum_sq += c * c;
        }
        let m = samples as f64;
        let mean = sum / m;
        let var = if samples > 1 { ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
        Ok(McEstimate { estimate: mean, std_error: (var / m).sqrt(), samples })
    }

    /// The atoms of `F_𝒥`, in order of their first point.
    pub fn atoms(&self) -> Result<AtomPartition<T>> {
        let mut atoms: Vec<Atom<T>> = Vec::new();
        let mut lookup: HashMap<PartialPoint, usize> = HashMap::new();
        let mut point_atom = Vec::new();
        for (idx, (x, mass)) in self.space.enumerate(self.space.full())?.enumerate() {
            let a = self.junta_map(x.values());
            let key = PartialPoint::from_full(x.values(), a);
            let slot = *lookup.entry(key.clone()).or_insert_with(|| {
                atoms.push(Atom { key, members: Vec::new(), mass: T::zero() });
                atoms.len() - 1
            });
            atoms[slot].members.push(idx);
            atoms[slot].mass += &mass;
            point_atom.push(slot);
        }
        Ok(AtomPartition { atoms, point_atom })
    }

    /// Whether every `J_S` is increasing on `X^S` (binary alphabets).
    pub fn detectors_increasing(&self) -> Result<bool> {
        self.space.require_binary()?;
        for e in &self.entries {
            let bits = self.detector_table(e.set)?;
            let m = e.set.len();
            for (idx, &b) in bits.iter().enumerate() {
                for j in 0..m {
                    let stride = 1usize << (m - 1 - j);
                    if idx & stride == 0 && b && !bits[idx | stride] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// One atom of `F_𝒥`: the points `z` with `J_𝒥(z) = A` and `z_A = y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom<T> {
    /// `(A, y)` as a partial point with support `A`.
    pub key: PartialPoint,
    /// Point indices in enumeration order.
    pub members: Vec<usize>,
    pub mass: T,
}

impl<T> Atom<T> {
    pub fn set(&self) -> Subset {
        self.key.support()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomPartition<T> {
    pub atoms: Vec<Atom<T>>,
    /// Atom index of every point.
    pub point_atom: Vec<usize>,
}

impl<T: Scalar> AtomPartition<T> {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().fold(T::zero(), |a, at| a + &at.mass)
    }

    /// Mass-weighted average of `values` over each atom.
    pub fn averages(&self, space: &ProductSpace<T>, values: &[T]) -> Result<Vec<T>> {
        let masses = space.measure_table(space.full())?;
        Ok(self
            .atoms
            .iter()
            .map(|a| {
                let s = a.members.iter().fold(T::zero(), |acc, &i| acc + masses[i].clone() * &values[i]);
                s / a.mass.clone()
            })
            .collect())
    }
}

/// `E[f | F_𝒥]` as a real-valued function.
pub fn conditional_expectation<T: Scalar>(
    f: &FunctionRep<T>,
    c: &JuntaCollection<T>,
) -> Result<FunctionRep<T>> {
    let atoms = c.atoms()?;
    conditional_expectation_with(f, c, &atoms)
}

/// [`conditional_expectation`] with precomputed atoms.
pub fn conditional_expectation_with<T: Scalar>(
    f: &FunctionRep<T>,
    c: &JuntaCollection<T>,
    atoms: &AtomPartition<T>,
) -> Result<FunctionRep<T>> {
    same_space(f.space(), c.space())?;
    let avg = atoms.averages(f.space(), &f.values()?)?;
    let values = atoms.point_atom.iter().map(|&a| avg[a].clone()).collect();
    FunctionRep::from_table(f.space().clone(), values, RangeTag::Real)
}

/// Whether `h` is constant on every atom of `F_𝒥`.
pub fn is_measurable<T: Scalar>(h: &FunctionRep<T>, c: &JuntaCollection<T>) -> Result<bool> {
    same_space(h.space(), c.space())?;
    let atoms = c.atoms()?;
    let values = h.values()?;
    Ok(atoms.atoms.iter().all(|a| {
        let first = &values[a.members[0]];
        a.members.iter().all(|&i| values[i] == *first)
    }))
}

/// `h = 1` where `g > 1/2`, else 0.
pub fn round_half<T: Scalar>(g: &FunctionRep<T>) -> Result<FunctionRep<T>> {
    let half = T::from_ratio(1, 2);
    let values = g.values()?.iter().map(|v| bool_value(*v > half)).collect();
    FunctionRep::from_table(g.space().clone(), values, RangeTag::Boolean)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropReport<T> {
    pub influence: T,
    pub twice_cost: T,
    pub pass: bool,
}

/// Checks `I_h ≤ 2 ∫|J_𝒥|` for an `F_𝒥`-measurable Boolean `h`.
pub fn check_prop_direct<T: Scalar>(c: &JuntaCollection<T>, h: &FunctionRep<T>) -> Result<PropReport<T>> {
    if !is_measurable(h, c)? {
        return Err(Error::NotMeasurable);
    }
    let influence = influences_exact(h)?.total;
    let twice_cost = T::from_int(2) * &c.cost()?;
    let pass = influence.approx_le(&twice_cost, 1e-9);
    Ok(PropReport { influence, twice_cost, pass })
}

fn same_space<T: Scalar>(a: &ProductSpace<T>, b: &ProductSpace<T>) -> Result<()> {
    if a.arities() != b.arities() {
        return Err(Error::SupportMismatch("function and collection live on different spaces".into()));
    }
    Ok(())
}
