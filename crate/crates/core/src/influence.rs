//! Influences: by definition, through the Walsh expansion, and by sampling.
//!
//! `I_f(j)` is the probability that resampling coordinate `j` changes `f`.
//! For real-valued `f` the same sums compute `E[(f(x) - f(x'))²]`, which is
//! that probability when `f` is Boolean.

use rand::Rng;

use crate::boolfn::FunctionRep;
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::space::{draw, ProductSpace};
use crate::walsh::WalshExpansion;

#[derive(Clone, Debug, PartialEq)]
pub enum InfluenceMethod {
    ExactDefinitional,
    ExactSpectral,
    MonteCarlo { seed: u64, samples: usize },
}

impl InfluenceMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            InfluenceMethod::ExactDefinitional => "exact-definitional",
            InfluenceMethod::ExactSpectral => "exact-spectral",
            InfluenceMethod::MonteCarlo { .. } => "monte-carlo",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceReport<V> {
    pub per_coord: Vec<V>,
    pub total: V,
    pub method: InfluenceMethod,
    /// Standard error per coordinate (sampling only).
    pub std_errors: Option<Vec<f64>>,
}

/// `I_f(j)` as a finite sum over `X^n × X_j`.
pub fn influence_exact<T: Scalar>(f: &FunctionRep<T>, j: usize) -> Result<T> {
    let space = f.space();
    check_coord(space, j)?;
    if let (Some(profile), Some(p)) = (f.symmetric_profile(), space.common_bias()) {
        return Ok(symmetric_influence(&profile, p));
    }
    let values = f.values()?;
    Ok(fiber_influence(space, &values, j))
}

/// `Σ_j I_f(j)` with every term from [`influence_exact`].
pub fn influences_exact<T: Scalar>(f: &FunctionRep<T>) -> Result<InfluenceReport<T>> {
    let space = f.space();
    let per_coord = if let (Some(profile), Some(p)) = (f.symmetric_profile(), space.common_bias()) {
        vec![symmetric_influence(&profile, p); space.n()]
    } else {
        let values = f.values()?;
        (0..space.n()).map(|j| fiber_influence(space, &values, j)).collect()
    };
    Ok(report(per_coord, InfluenceMethod::ExactDefinitional))
}

/// `I_f(j) = 2 Σ_{S∋j} ‖F_S‖²`.
pub fn influence_spectral<T: Scalar>(e: &WalshExpansion<T>, j: usize) -> Result<T> {
    check_coord(e.space(), j)?;
    let sum = e.components().filter(|(s, _)| s.contains(j)).fold(T::zero(), |acc, (s, _)| acc + e.sq_norm(s));
    Ok(T::from_int(2) * &sum)
}

pub fn influences_spectral<T: Scalar>(e: &WalshExpansion<T>) -> InfluenceReport<T> {
    let per_coord = (0..e.n()).map(|j| influence_spectral(e, j).expect("coordinate in range")).collect();
    report(per_coord, InfluenceMethod::ExactSpectral)
}

/// `I_f = 2 Σ_S |S| ‖F_S‖²`.
pub fn total_influence_spectral<T: Scalar>(e: &WalshExpansion<T>) -> T {
    let sum = e.components().fold(T::zero(), |acc, (s, _)| acc + T::from_int(s.len() as i64) * e.sq_norm(s));
    T::from_int(2) * &sum
}

/// Sample mean of `(f(x) - f(x'))²` with `x'` resampled at `j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Monte Carlo estimate of `I_f(j)`; draws come from stream `j` of `seed`.
pub fn influence_mc<T: Scalar>(
    f: &FunctionRep<T>,
    j: usize,
    seed: u64,
    samples: usize,
) -> Result<McEstimate> {
    let space = f.space();
    check_coord(space, j)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let cdfs: Vec<Vec<f64>> = (0..space.n()).map(|i| space.cdf(i)).collect();
    let mut rng = stream_rng(seed, j as u64);
    let mut x = vec![0usize; space.n()];
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        for (xi, cdf) in x.iter_mut().zip(&cdfs) {
            *xi = draw(cdf, rng.random::<f64>());
        }
        let a = f.eval(&x).to_f64();
        x[j] = draw(&cdfs[j], rng.random::<f64>());
        let b = f.eval(&x).to_f64();
        let d = (a - b) * (a - b);
        sum += d;
        sum_sq += d * d;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = if samples > 1 { ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
    Ok(McEstimate { estimate: mean, std_error: (var / m).sqrt(), samples })
}

/// Sampled influences of every coordinate.
pub fn influences_mc<T: Scalar>(
    f: &FunctionRep<T>,
    seed: u64,
    samples: usize,
) -> Result<InfluenceReport<f64>> {
    let est = (0..f.n()).map(|j| influence_mc(f, j, seed, samples)).collect::<Result<Vec<_>>>()?;
    let total = est.iter().map(|e| e.estimate).sum();
    Ok(InfluenceReport {
        per_coord: est.iter().map(|e| e.estimate).collect(),
        total,
        method: InfluenceMethod::MonteCarlo { seed, samples },
        std_errors: Some(est.iter().map(|e| e.std_error).collect()),
    })
}

/// One grid point of a Margulis–Russo sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct RussoRow<T> {
    pub p: T,
    pub mu: T,
    pub total_influence: T,
    /// `2p(1-p) (μ_{p+h} - μ_{p-h}) / 2h`.
    pub russo_lhs: T,
    pub residual: T,
}

/// Compares `2p(1-p) dμ_p/dp` (central difference, step `h`) with `I_f`
/// at every grid point. `f` must be increasing on the binary cube.
pub fn russo_sweep<T: Scalar>(f: &FunctionRep<T>, grid: &[T], h: &T) -> Result<Vec<RussoRow<T>>> {
    if !f.is_increasing()? {
        return Err(Error::NotIncreasing);
    }
    if *h <= T::zero() {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let n = f.n();
    let at = |p: T| -> Result<FunctionRep<T>> {
        let space = ProductSpace::p_biased(n, p)?.with_enum_cap(f.space().enum_cap());
        f.with_space(space)
    };
    let two = T::from_int(2);
    grid.iter()
        .map(|p| {
            let lo = p.clone() - h;
            let hi = p.clone() + h;
            if lo <= T::zero() || hi >= T::one() {
                return Err(Error::InvalidParameter(format!("grid point {p} with step {h} leaves (0,1)")));
            }
            let centre = at(p.clone())?;
            let mu = centre.expectation()?;
            let total = influences_exact(&centre)?.total;
            let slope = (at(hi)?.expectation()? - at(lo)?.expectation()?) / (two.clone() * h);
            let lhs = two.clone() * p * &(T::one() - p) * &slope;
            let residual = (lhs.clone() - &total).abs_val();
            Ok(RussoRow { p: p.clone(), mu, total_influence: total, russo_lhs: lhs, residual })
        })
        .collect()
}

fn report<T: Scalar>(per_coord: Vec<T>, method: InfluenceMethod) -> InfluenceReport<T> {
    let total = per_coord.iter().fold(T::zero(), |a, v| a + v);
    InfluenceReport { per_coord, total, method, std_errors: None }
}

fn check_coord<T: Scalar>(space: &ProductSpace<T>, j: usize) -> Result<()> {
    if j >= space.n() {
        return Err(Error::CoordinateOutOfRange { coord: j, n: space.n() });
    }
    Ok(())
}

/// `Σ_x μ(x) Σ_b w_j(b) (f(x) - f(x^{j←b}))²`, one fiber along `j` at a time.
fn fiber_influence<T: Scalar>(space: &ProductSpace<T>, values: &[T], j: usize) -> T {
    let strides = space.strides(space.full());
    let stride = strides[j];
    let m = space.arity(j);
    let w = space.weights(j);
    let rest = space.full().without(j);
    let mut acc = T::zero();
    for (y, mass) in space.enumerate(rest).expect("table already materialized") {
        let base: usize = y.iter().map(|(i, v)| v * strides[i]).sum();
        let mut fiber = T::zero();
        for a in 0..m {
            for b in (a + 1)..m {
                let d = values[base + a * stride].clone() - &values[base + b * stride];
                fiber += &(w[a].clone() * &w[b] * &d * &d);
            }
        }
        acc += &(mass * &fiber);
    }
    T::from_int(2) * &acc
}

/// Influence of any coordinate of a symmetric function under `μ_p`:
/// `2p(1-p) Σ_w C(n-1,w) p^w (1-p)^{n-1-w} [profile(w) ≠ profile(w+1)]`.
fn symmetric_influence<T: Scalar>(profile: &[bool], p: &T) -> T {
    let m = profile.len() - 2;
    let q = T::one() - p;
    let mut acc = T::zero();
    let mut binom = T::one();
    for w in 0..=m {
        if profile[w] != profile[w + 1] {
            acc += &(binom.clone() * &p.powi(w as u32) * &q.powi((m - w) as u32));
        }
        binom = binom * &T::from_ratio((m - w) as i64, (w + 1) as i64);
    }
    T::from_int(2) * p * &q * &acc
}
