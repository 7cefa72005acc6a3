//! One-parameter sublevel persistence.
//!
//! A [`ScalarFiltration`] orders simplices by (value, dimension, vertex
//! list). [`reduce`] runs the standard column reduction over `Z/p` with the
//! twist (clearing) step, and [`diagram`] turns the pairing into a
//! [`PersistenceDiagram`]. Pairs born and killed at the same value sit on
//! the diagonal and are dropped.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::complex::{build_complex, MultiFilteredComplex, Simplex};
use crate::error::{Error, Result};
use crate::field::{axpy, PrimeField, SparseColumn};

/// Simplices with their entry values, sorted so that faces come first.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFiltration {
    entries: Vec<(Simplex, f64)>,
}

impl ScalarFiltration {
    /// Lower-star filtration of a scalar (`n == 1`) complex.
    pub fn from_complex(c: &MultiFilteredComplex) -> Result<Self> {
        let values = c.scalar_values()?;
        Self::lower_star(c.simplices(), values)
    }

    /// Lower-star filtration of `simplices` under per-vertex `values`.
    pub fn lower_star(simplices: &[Simplex], values: &[f64]) -> Result<Self> {
        let mut entries = Vec::with_capacity(simplices.len());
        for s in simplices {
            let mut m = f64::NEG_INFINITY;
            for &v in s.vertices() {
                let x = *values
                    .get(v)
                    .ok_or(Error::DanglingVertex { vertex: v, count: values.len() })?;
                if !x.is_finite() {
                    return Err(Error::NonFiniteValue { vertex: v });
                }
                m = m.max(x);
            }
            entries.push((s.clone(), m));
        }
        entries.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(ScalarFiltration { entries })
    }

    pub fn entries(&self) -> &[(Simplex, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.entries[idx].1
    }

    pub fn simplex(&self, idx: usize) -> &Simplex {
        &self.entries[idx].0
    }

    /// Sorted distinct entry values.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.1).collect();
        v.dedup();
        v
    }
}

/// Output of [`reduce`]: `(birth, death)` index pairs and unpaired indices,
/// both referring to positions in the filtration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub unpaired: Vec<usize>,
}

/// Column reduction of the filtered boundary matrix over `Z/p`.
pub fn reduce(f: &ScalarFiltration, p: u32) -> Result<Pairing> {
    let field = PrimeField::new(p)?;
    let n = f.len();
    let position: HashMap<&Simplex, usize> =
        f.entries.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();

    let mut columns: Vec<SparseColumn> = Vec::with_capacity(n);
    for (j, (s, _)) in f.entries.iter().enumerate() {
        let mut col = Vec::with_capacity(s.dimension() + 1);
        for (i, facet) in s.facets().enumerate() {
            let r = *position
                .get(&facet)
                .ok_or_else(|| Error::NotFaceClosed(facet.to_string()))?;
            if r >= j {
                return Err(Error::InvalidArgument(format!("{facet} enters after its coface {s}")));
            }
            col.push((r, if i % 2 == 0 { 1 } else { field.neg(1) }));
        }
        col.sort_unstable_by_key(|e| e.0);
        columns.push(col);
    }

    let max_dim = f.entries.iter().map(|e| e.0.dimension()).max().unwrap_or(0);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut cleared = vec![false; n];
    let mut paired = vec![false; n];
    let mut pairs = Vec::new();

    for dim in (1..=max_dim).rev() {
        for j in 0..n {
            if f.entries[j].0.dimension() != dim {
                continue;
            }
            if cleared[j] {
                columns[j].clear();
                continue;
            }
            while let Some(&(low, val)) = columns[j].last() {
                match owner[low] {
                    Some(i) => {
                        let piv = columns[i].last().expect("pivot column is non-zero").1;
                        let factor = field.neg(field.mul(val, field.inv(piv)));
                        let reduced = axpy(field, &columns[j], factor, &columns[i]);
                        columns[j] = reduced;
                    }
                    None => {
                        owner[low] = Some(j);
                        cleared[low] = true;
                        paired[low] = true;
                        paired[j] = true;
                        pairs.push((low, j));
                        break;
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    let unpaired = (0..n).filter(|&i| !paired[i]).collect();
    Ok(Pairing { pairs, unpaired })
}

/// Death coordinate of a cornerpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Death {
    Finite(f64),
    Infinity,
}

impl Death {
    pub fn is_infinite(self) -> bool {
        matches!(self, Death::Infinity)
    }

    /// `true` when this death is strictly above `v`.
    pub fn exceeds(self, v: f64) -> bool {
        match self {
            Death::Finite(d) => d > v,
            Death::Infinity => true,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Death::Finite(d) => Some(d),
            Death::Infinity => None,
        }
    }
}

impl Eq for Death {}

impl Ord for Death {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Death::Finite(a), Death::Finite(b)) => a.total_cmp(b),
            (Death::Finite(_), Death::Infinity) => Ordering::Less,
            (Death::Infinity, Death::Finite(_)) => Ordering::Greater,
            (Death::Infinity, Death::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Death {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(d) => write!(f, "{d}"),
            Death::Infinity => write!(f, "inf"),
        }
    }
}

/// A proper cornerpoint `(birth, death)` or a cornerpoint at infinity
/// `(birth, ∞)`, with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cornerpoint {
    pub birth: f64,
    pub death: Death,
    pub multiplicity: u64,
}

impl Cornerpoint {
    pub fn new(birth: f64, death: Death, multiplicity: u64) -> Result<Self> {
        if !birth.is_finite() {
            return Err(Error::InvalidArgument(format!("birth {birth} is not finite")));
        }
        if let Death::Finite(d) = death {
            if !d.is_finite() || d <= birth {
                return Err(Error::InvalidArgument(format!(
                    "cornerpoint ({birth}, {d}) is not above the diagonal"
                )));
            }
        }
        if multiplicity == 0 {
            return Err(Error::InvalidArgument("multiplicity must be at least 1".into()));
        }
        Ok(Cornerpoint { birth, death, multiplicity })
    }

    pub fn proper(birth: f64, death: f64, multiplicity: u64) -> Result<Self> {
        Self::new(birth, Death::Finite(death), multiplicity)
    }

    pub fn at_infinity(birth: f64, multiplicity: u64) -> Result<Self> {
        Self::new(birth, Death::Infinity, multiplicity)
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.birth.total_cmp(&other.birth).then_with(|| self.death.cmp(&other.death))
    }
}

/// Multiset of cornerpoints in one homology degree. The diagonal is implicit.
///
/// Points are kept sorted by (birth, death) with equal points merged, so two
/// diagrams are equal as multisets iff they compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    degree: usize,
    points: Vec<Cornerpoint>,
}

impl PersistenceDiagram {
    pub fn empty(degree: usize) -> Self {
        PersistenceDiagram { degree, points: Vec::new() }
    }

    pub fn new(degree: usize, points: impl IntoIterator<Item = Cornerpoint>) -> Self {
        let mut points: Vec<Cornerpoint> = points.into_iter().collect();
        points.sort_by(Cornerpoint::key_cmp);
        let mut merged: Vec<Cornerpoint> = Vec::with_capacity(points.len());
        for p in points {
            match merged.last_mut() {
                Some(last) if last.key_cmp(&p) == Ordering::Equal => last.multiplicity += p.multiplicity,
                _ => merged.push(p),
            }
        }
        PersistenceDiagram { degree, points: merged }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[Cornerpoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn proper(&self) -> impl Iterator<Item = &Cornerpoint> {
        self.points.iter().filter(|p| !p.death.is_infinite())
    }

    pub fn at_infinity(&self) -> impl Iterator<Item = &Cornerpoint> {
        self.points.iter().filter(|p| p.death.is_infinite())
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn infinite_multiplicity(&self) -> u64 {
        self.at_infinity().map(|p| p.multiplicity).sum()
    }

    /// One `(birth, death)` entry per unit of multiplicity.
    pub fn unit_points(&self) -> Vec<(f64, Death)> {
        self.points
            .iter()
            .flat_map(|p| std::iter::repeat_n((p.birth, p.death), p.multiplicity as usize))
            .collect()
    }

    /// Applies `f` to every coordinate (∞ stays ∞) and re-normalizes.
    pub fn map_coordinates(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(
            self.degree,
            self.points.iter().map(|p| Cornerpoint {
                birth: f(p.birth),
                death: match p.death {
                    Death::Finite(d) => Death::Finite(f(d)),
                    Death::Infinity => Death::Infinity,
                },
                multiplicity: p.multiplicity,
            }),
        )
    }
}

/// Degree-`k` diagram of a filtration over `Z/p`.
pub fn diagram(f: &ScalarFiltration, k: usize, p: u32) -> Result<PersistenceDiagram> {
    let pairing = reduce(f, p)?;
    Ok(diagram_from_pairing(f, &pairing, k))
}

pub fn diagram_from_pairing(f: &ScalarFiltration, pairing: &Pairing, k: usize) -> PersistenceDiagram {
    let proper = pairing
        .pairs
        .iter()
        .filter(|&&(b, _)| f.simplex(b).dimension() == k)
        .filter(|&&(b, d)| f.value(b) < f.value(d))
        .map(|&(b, d)| Cornerpoint { birth: f.value(b), death: Death::Finite(f.value(d)), multiplicity: 1 });
    let essential = pairing
        .unpaired
        .iter()
        .filter(|&&i| f.simplex(i).dimension() == k)
        .map(|&i| Cornerpoint { birth: f.value(i), death: Death::Infinity, multiplicity: 1 });
    PersistenceDiagram::new(k, proper.chain(essential))
}

/// Diagram of a scalar complex.
pub fn complex_diagram(c: &MultiFilteredComplex, k: usize, p: u32) -> Result<PersistenceDiagram> {
    diagram(&ScalarFiltration::from_complex(c)?, k, p)
}

/// Discrete cone: one apex vertex with value `height` joined to every simplex.
///
/// Original simplices keep their values; every coned simplex gets `height`.
pub fn cone(c: &MultiFilteredComplex, height: f64) -> Result<MultiFilteredComplex> {
    let values = c.scalar_values()?;
    let max = c.component_range(0).map_or(f64::NEG_INFINITY, |r| r.1);
    if !(height > max) || !height.is_finite() {
        return Err(Error::ConeTooLow { height, max });
    }
    let apex = c.num_vertices();
    let mut rows: Vec<Vec<f64>> = values.iter().map(|&x| vec![x]).collect();
    rows.push(vec![height]);
    let mut generators = vec![Simplex::vertex(apex)];
    for s in c.simplices() {
        generators.push(s.join(apex)?);
    }
    build_complex(1, &rows, &generators)
}

/// `3 · (max|φ| + max|ψ|) + 1`. An empty function contributes 0.
pub fn cone_constant(phi: &[f64], psi: &[f64]) -> f64 {
    let m = |xs: &[f64]| xs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    3.0 * (m(phi) + m(psi)) + 1.0
}

/// A quarter of the smallest positive gap between consecutive sorted
/// `values`, capped at 0.25 (also the answer for fewer than two distinct
/// values).
///
/// With this `ε`, every `u ± ε` stays inside the cells next to `u`, so the
/// cornerpoint multiplicity formulas are already at their minimum, and
/// `u + ε < v − ε` holds for any two distinct values.
pub fn stable_epsilon(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min).min(1.0) / 4.0
}
