//! Admissible pairs and the half-plane foliation of `Δ+`.
//!
//! An admissible pair `(l, b)` has `l` a unit vector with positive entries
//! and `b` summing to zero. Its leaf is `{(s·l + b, t·l + b) : s < t}`, and on
//! that leaf the multidimensional rank invariant equals the one-dimensional
//! invariant of `F(x) = max_i (φ_i(x) − b_i) / l_i`.

use std::f64::consts::FRAC_PI_2;

use crate::complex::MultiFilteredComplex;
use crate::error::{Error, Result};
use crate::persistence::{diagram, PersistenceDiagram, ScalarFiltration};
use crate::rank_invariant::DeltaPlusPoint;

pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Norm used to make `l` a unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Euclidean,
    Max,
}

impl Normalization {
    pub fn norm(self, x: &[f64]) -> f64 {
        match self {
            Normalization::Euclidean => x.iter().map(|a| a * a).sum::<f64>().sqrt(),
            Normalization::Max => x.iter().fold(0.0, |m, a| m.max(a.abs())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissiblePair {
    l: Vec<f64>,
    b: Vec<f64>,
    normalization: Normalization,
}

/// Normalizes `l_raw` (Euclidean) and projects `b_raw` onto `Σ b_i = 0`.
pub fn make_admissible(l_raw: &[f64], b_raw: &[f64]) -> Result<AdmissiblePair> {
    make_admissible_with(l_raw, b_raw, Normalization::Euclidean)
}

pub fn make_admissible_with(l_raw: &[f64], b_raw: &[f64], normalization: Normalization) -> Result<AdmissiblePair> {
    if l_raw.len() != b_raw.len() {
        return Err(Error::DimensionMismatch { expected: l_raw.len(), found: b_raw.len() });
    }
    if l_raw.is_empty() {
        return Err(Error::NoComponents);
    }
    if let Some((index, &value)) = l_raw.iter().enumerate().find(|(_, x)| !(**x > 0.0) || !x.is_finite()) {
        return Err(Error::NonPositiveDirection { index, value });
    }
    if b_raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("offset must be finite".into()));
    }
    let norm = normalization.norm(l_raw);
    let l = l_raw.iter().map(|x| x / norm).collect();
    let mean = b_raw.iter().sum::<f64>() / b_raw.len() as f64;
    let b = b_raw.iter().map(|x| x - mean).collect();
    AdmissiblePair::new(l, b, normalization)
}

impl AdmissiblePair {
    /// Checks the invariants without normalizing.
    pub fn new(l: Vec<f64>, b: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if l.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: l.len(), found: b.len() });
        }
        if let Some((index, &value)) = l.iter().enumerate().find(|(_, x)| !(**x > 0.0)) {
            return Err(Error::NonPositiveDirection { index, value });
        }
        if (normalization.norm(&l) - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidArgument("direction is not a unit vector".into()));
        }
        if b.iter().sum::<f64>().abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidArgument("offset does not sum to zero".into()));
        }
        Ok(AdmissiblePair { l, b, normalization })
    }

    pub fn l(&self) -> &[f64] {
        &self.l
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn min_l(&self) -> f64 {
        self.l.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `s·l + b`.
    pub fn point(&self, s: f64) -> Vec<f64> {
        self.l.iter().zip(&self.b).map(|(l, b)| s * l + b).collect()
    }

    /// `max_i (x_i − b_i) / l_i`.
    pub fn reduce_value(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.l)
            .zip(&self.b)
            .map(|((x, l), b)| (x - b) / l)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Per-vertex value of `max_i (φ_i(x) − b_i) / l_i`.
pub fn leaf_function(c: &MultiFilteredComplex, pair: &AdmissiblePair) -> Result<Vec<f64>> {
    if c.n() != pair.n() {
        return Err(Error::DimensionMismatch { expected: c.n(), found: pair.n() });
    }
    Ok((0..c.num_vertices()).map(|v| pair.reduce_value(c.vertex_value(v))).collect())
}

/// The scalar complex carrying the leaf function.
pub fn leaf_complex(c: &MultiFilteredComplex, pair: &AdmissiblePair) -> Result<MultiFilteredComplex> {
    c.with_scalar_values(&leaf_function(c, pair)?)
}

/// Degree-`k` diagram of the leaf function's lower-star filtration.
pub fn leaf_diagram(c: &MultiFilteredComplex, pair: &AdmissiblePair, k: usize, p: u32) -> Result<PersistenceDiagram> {
    let values = leaf_function(c, pair)?;
    diagram(&ScalarFiltration::lower_star(c.simplices(), &values)?, k, p)
}

/// Leaf through `(u, v)` and the parameters `s < t` with
/// `u = s·l + b`, `v = t·l + b`.
pub fn point_to_leaf(pt: &DeltaPlusPoint) -> Result<(AdmissiblePair, f64, f64)> {
    let diff: Vec<f64> = pt.v().iter().zip(pt.u()).map(|(v, u)| v - u).collect();
    let norm = Normalization::Euclidean.norm(&diff);
    let l: Vec<f64> = diff.iter().map(|d| d / norm).collect();
    let sum_l: f64 = l.iter().sum();
    let s = pt.u().iter().sum::<f64>() / sum_l;
    let t = pt.v().iter().sum::<f64>() / sum_l;
    let b: Vec<f64> = pt.u().iter().zip(&l).map(|(u, l)| u - s * l).collect();
    if l.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::NotInDeltaPlus);
    }
    // b sums to zero up to rounding; rebuild without the tolerance check
    let pair = AdmissiblePair { l, b, normalization: Normalization::Euclidean };
    Ok((pair, s, t))
}

/// Grid over admissible pairs.
///
/// Directions: `l ∝ (1, tan θ_1, …, tan θ_{n−1})` with every `θ_j` on
/// `{(j + ½)·π / (2A)}`; for `n = 2` this is `(cos θ, sin θ)`.
/// Offsets: `b = Σ_j β_j (e_j − e_{j+1})` with every `β_j` on `B` evenly spaced
/// points of `[−R, R]` (just `0` when `B = 1`).
pub fn sample_admissible(n: usize, angles: usize, offsets: usize, radius: f64) -> Result<Vec<AdmissiblePair>> {
    sample_admissible_with(n, angles, offsets, radius, Normalization::Euclidean)
}

pub fn sample_admissible_with(
    n: usize,
    angles: usize,
    offsets: usize,
    radius: f64,
    normalization: Normalization,
) -> Result<Vec<AdmissiblePair>> {
    if n == 0 {
        return Err(Error::NoComponents);
    }
    if angles == 0 || offsets == 0 {
        return Err(Error::InvalidArgument("angle and offset resolutions must be at least 1".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("offset radius must be positive".into()));
    }
    let thetas: Vec<f64> = (0..angles).map(|j| (j as f64 + 0.5) * FRAC_PI_2 / angles as f64).collect();
    let betas: Vec<f64> = if offsets == 1 {
        vec![0.0]
    } else {
        (0..offsets).map(|i| -radius + 2.0 * radius * i as f64 / (offsets - 1) as f64).collect()
    };

    let mut pairs = Vec::new();
    for dir in product(&thetas, n - 1) {
        let mut l_raw = vec![1.0];
        l_raw.extend(dir.iter().map(|t| t.tan()));
        for shift in product(&betas, n - 1) {
            let mut b = vec![0.0; n];
            for (j, beta) in shift.iter().enumerate() {
                b[j] += beta;
                b[j + 1] -= beta;
            }
            pairs.push(make_admissible_with(&l_raw, &b, normalization)?);
        }
    }
    Ok(pairs)
}

/// All `len`-tuples over `values`, last coordinate fastest.
fn product(values: &[f64], len: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out
}
