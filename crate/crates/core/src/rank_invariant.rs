//! The rank invariant `ρ_k(u, v) = rank H_k(X⟨φ⪯u⟩) → H_k(X⟨φ⪯v⟩)`.
//!
//! [`rho_multi`] evaluates it directly with the homology oracle for any
//! number of components. For scalar functions [`rho_from_diagram`] reads the
//! same value off a persistence diagram, and [`multiplicity`] /
//! [`multiplicity_at_infinity`] recover diagram multiplicities from `ρ`.

use crate::complex::{MultiFilteredComplex, Simplex};
use crate::error::{Error, Result};
use crate::homology::persistent_rank_oracle;
use crate::par::{self, Execution};
use crate::persistence::PersistenceDiagram;

/// A point `(u, v)` with `u ≺ v` in every component.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPlusPoint {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl DeltaPlusPoint {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
        }
        if u.is_empty() || !u.iter().zip(&v).all(|(a, b)| a < b) {
            return Err(Error::NotInDeltaPlus);
        }
        Ok(DeltaPlusPoint { u, v })
    }

    pub fn scalar(u: f64, v: f64) -> Result<Self> {
        Self::new(vec![u], vec![v])
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }
}

/// `ρ_k(u, v)` by brute force over `Z/p`.
pub fn rho_multi(c: &MultiFilteredComplex, k: usize, pt: &DeltaPlusPoint, p: u32) -> Result<usize> {
    let small = c.sublevel_complex(pt.u())?;
    let large = c.sublevel_complex(pt.v())?;
    persistent_rank_oracle(&small, &large, k, p)
}

/// Scalar shorthand for [`rho_multi`].
pub fn rho(c: &MultiFilteredComplex, k: usize, u: f64, v: f64, p: u32) -> Result<usize> {
    rho_multi(c, k, &DeltaPlusPoint::scalar(u, v)?, p)
}

/// `Σ μ(a, b)` over cornerpoints with `a ≤ u` and `b > v`.
pub fn rho_from_diagram(d: &PersistenceDiagram, u: f64, v: f64) -> Result<u64> {
    if !(u < v) {
        return Err(Error::NotInDeltaPlus);
    }
    Ok(d.points()
        .iter()
        .filter(|p| p.birth <= u && p.death.exceeds(v))
        .map(|p| p.multiplicity)
        .sum())
}

/// The four-term expression
/// `ρ(u+ε, v−ε) − ρ(u−ε, v−ε) − ρ(u+ε, v+ε) + ρ(u−ε, v+ε)` at the given `ε`.
pub fn multiplicity(c: &MultiFilteredComplex, k: usize, u: f64, v: f64, eps: f64, p: u32) -> Result<i64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon { eps, reason: "must be positive" });
    }
    if !(u + eps < v - eps) {
        return Err(Error::InvalidEpsilon { eps, reason: "needs u + eps < v - eps" });
    }
    let r = |a: f64, b: f64| rho(c, k, a, b, p).map(|x| x as i64);
    Ok(r(u + eps, v - eps)? - r(u - eps, v - eps)? - r(u + eps, v + eps)? + r(u - eps, v + eps)?)
}

/// `ρ(u+ε, 1/ε) − ρ(u−ε, 1/ε)`; requires `1/ε` above the function's maximum,
/// where `ρ(·, v)` no longer depends on `v`.
pub fn multiplicity_at_infinity(c: &MultiFilteredComplex, k: usize, u: f64, eps: f64, p: u32) -> Result<i64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon { eps, reason: "must be positive" });
    }
    let far = 1.0 / eps;
    if !(u + eps < far) {
        return Err(Error::InvalidEpsilon { eps, reason: "needs u + eps < 1/eps" });
    }
    let max = c.scalar_values()?.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(far > max) {
        return Err(Error::InvalidEpsilon { eps, reason: "needs 1/eps above the maximum value" });
    }
    let r = |a: f64| rho(c, k, a, far, p).map(|x| x as i64);
    Ok(r(u + eps)? - r(u - eps)?)
}

/// Sampled values `ρ_k(axis[i], axis[j])` for every `axis[i] < axis[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankGrid {
    degree: usize,
    axis: Vec<f64>,
    table: Vec<Option<usize>>,
}

impl RankGrid {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// `ρ(axis[i], axis[j])`, or `None` when `axis[i] ≥ axis[j]`.
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.table[i * self.axis.len() + j]
    }

    /// Index of an axis value, if it is on the grid.
    pub fn position(&self, x: f64) -> Option<usize> {
        self.axis.iter().position(|&a| a == x)
    }

    /// All `(u, v, ρ)` triples in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        let n = self.axis.len();
        (0..n).flat_map(move |i| (0..n).filter_map(move |j| self.get(i, j).map(|r| (self.axis[i], self.axis[j], r))))
    }
}

/// Axis made of every attained value, midpoints between consecutive ones,
/// and `resolution` evenly spaced points over `[min − 1, max + 1]`.
pub fn default_axis(c: &MultiFilteredComplex, resolution: usize) -> Result<Vec<f64>> {
    let values = c.scalar_values().map(|_| c.attained_values(0))?;
    let (lo, hi) = match (values.first(), values.last()) {
        (Some(&a), Some(&b)) => (a - 1.0, b + 1.0),
        _ => (-1.0, 1.0),
    };
    let mut axis = values.clone();
    axis.extend(values.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let steps = resolution.max(2) - 1;
    axis.extend((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64));
    axis.sort_by(f64::total_cmp);
    axis.dedup();
    Ok(axis)
}

/// Rank grid of a scalar complex on [`default_axis`].
pub fn rank_grid(c: &MultiFilteredComplex, k: usize, resolution: usize, p: u32) -> Result<RankGrid> {
    if resolution < 2 {
        return Err(Error::InvalidArgument("grid resolution must be at least 2".into()));
    }
    rank_grid_on_axis(c, k, &default_axis(c, resolution)?, p, Execution::default())
}

/// Rank grid of a scalar complex on an explicit axis; rows are filled as
/// independent jobs.
pub fn rank_grid_on_axis(
    c: &MultiFilteredComplex,
    k: usize,
    axis: &[f64],
    p: u32,
    exec: Execution,
) -> Result<RankGrid> {
    c.scalar_values()?;
    let mut axis = axis.to_vec();
    axis.sort_by(f64::total_cmp);
    axis.dedup();
    let sublevels: Vec<Vec<Simplex>> =
        axis.iter().map(|&x| c.sublevel_complex(&[x])).collect::<Result<_>>()?;
    let n = axis.len();
    let rows = par::map_range(exec, n, |i| {
        (0..n)
            .map(|j| {
                if axis[i] < axis[j] {
                    persistent_rank_oracle(&sublevels[i], &sublevels[j], k, p).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut table = Vec::with_capacity(n * n);
    for row in rows {
        table.extend(row?);
    }
    Ok(RankGrid { degree: k, axis, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::homology::fixtures::s;
    use crate::persistence::{Cornerpoint, PersistenceDiagram};

    fn path() -> MultiFilteredComplex {
        build_complex(1, &[vec![0.0], vec![1.0], vec![2.0]], &[s(&[0, 2]), s(&[1, 2])]).unwrap()
    }

    fn hollow() -> MultiFilteredComplex {
        build_complex(1, &vec![vec![0.0]; 3], &[s(&[0, 1]), s(&[0, 2]), s(&[1, 2])]).unwrap()
    }

    fn path_diagram() -> PersistenceDiagram {
        PersistenceDiagram::new(
            0,
            [Cornerpoint::at_infinity(0.0, 1).unwrap(), Cornerpoint::proper(1.0, 2.0, 1).unwrap()],
        )
    }

    #[test]
    fn delta_plus_is_strict() {
        assert!(DeltaPlusPoint::new(vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(DeltaPlusPoint::new(vec![0.0, 1.0], vec![2.0, 3.0]).is_ok());
        assert!(DeltaPlusPoint::new(vec![0.0], vec![2.0, 3.0]).is_err());
    }

    #[test]
    fn rho_multi_examples() {
        let v = build_complex(2, &[vec![1.0, 3.0]], &[s(&[0])]).unwrap();
        let pt = DeltaPlusPoint::new(vec![1.0, 3.0], vec![2.0, 4.0]).unwrap();
        assert_eq!(rho_multi(&v, 0, &pt, 2).unwrap(), 1);
        let below = DeltaPlusPoint::new(vec![0.5, 3.0], vec![2.0, 4.0]).unwrap();
        assert_eq!(rho_multi(&v, 0, &below, 2).unwrap(), 0);

        assert_eq!(rho(&path(), 0, 1.5, 1.8, 2).unwrap(), 2);
        assert_eq!(rho(&path(), 0, 1.5, 2.5, 2).unwrap(), 1);
        assert_eq!(rho(&path(), 0, -0.5, 2.5, 2).unwrap(), 0);
    }

    #[test]
    fn rho_from_diagram_examples() {
        assert_eq!(rho_from_diagram(&PersistenceDiagram::empty(0), 0.0, 1.0).unwrap(), 0);
        assert_eq!(rho_from_diagram(&path_diagram(), 1.5, 1.8).unwrap(), 2);
        assert_eq!(rho_from_diagram(&path_diagram(), 0.5, 3.0).unwrap(), 1);
        assert_eq!(rho_from_diagram(&path_diagram(), 1.0, 1.0).unwrap_err(), Error::NotInDeltaPlus);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(&path(), 0, 1.0, 2.0, 0.25, 2).unwrap(), 1);
        assert_eq!(multiplicity(&path(), 0, 5.0, 9.0, 0.25, 2).unwrap(), 0);
        assert_eq!(multiplicity(&path(), 0, 0.5, 2.0, 0.25, 2).unwrap(), 0);
        assert!(matches!(multiplicity(&path(), 0, 1.0, 2.0, 0.5, 2), Err(Error::InvalidEpsilon { .. })));
    }

    #[test]
    fn multiplicity_at_infinity_examples() {
        assert_eq!(multiplicity_at_infinity(&path(), 0, 0.0, 0.25, 2).unwrap(), 1);
        assert_eq!(multiplicity_at_infinity(&path(), 0, 1.0, 0.25, 2).unwrap(), 0);
        assert_eq!(multiplicity_at_infinity(&hollow(), 1, 0.0, 0.25, 2).unwrap(), 1);
        // 1/eps = 1 is below max = 2
        assert!(matches!(
            multiplicity_at_infinity(&path(), 0, 0.0, 1.0, 2),
            Err(Error::InvalidEpsilon { .. })
        ));
    }

    #[test]
    fn grid_examples() {
        let g = rank_grid_on_axis(&path(), 0, &[-1.0, 0.5, 1.5, 2.5], 2, Execution::Sequential).unwrap();
        assert_eq!((0..4).filter_map(|j| g.get(0, j)).collect::<Vec<_>>(), vec![0, 0, 0]);
        // column v = 2.5 is past the maximum: number of essential classes born by u
        assert_eq!(g.get(1, 3), Some(1));
        assert_eq!(g.get(2, 3), Some(1));
        assert_eq!(g.get(1, 2), Some(1));
        assert_eq!(g.get(2, 1), None);

        let v = build_complex(1, &[vec![1.0]], &[s(&[0])]).unwrap();
        let g = rank_grid(&v, 0, 5, 2).unwrap();
        for (u, _, r) in g.entries() {
            assert_eq!(r, usize::from(u >= 1.0));
        }
        assert!(g.position(1.0).is_some());
    }

    #[test]
    fn grid_is_identical_across_execution_modes() {
        let a = rank_grid_on_axis(&path(), 0, &default_axis(&path(), 7).unwrap(), 2, Execution::Sequential).unwrap();
        let b = rank_grid_on_axis(&path(), 0, &default_axis(&path(), 7).unwrap(), 2, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
