//! Matching distance between persistence diagrams.
//!
//! Points are compared with
//! `min{ max(|u−u'|, |v−v'|), max((v−u)/2, (v'−u')/2) }` under the usual
//! conventions for `∞` (`∞ − y = ∞`, `∞ − ∞ = 0`, `min{c, ∞} = c`, ...). A
//! point at infinity can therefore only be matched at finite cost to another
//! point at infinity.
//!
//! [`bottleneck`] searches the finite set of candidate costs, deciding each
//! threshold with a Hopcroft–Karp perfect matching test.
//! [`brute_force_bottleneck`] enumerates every assignment and is used as the
//! reference on small inputs.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use crate::complex::MultiFilteredComplex;
use crate::error::{Error, Result};
use crate::foliation::{leaf_diagram, AdmissiblePair};
use crate::par::{self, Execution};
use crate::persistence::{complex_diagram, Death, PersistenceDiagram};

/// A non-negative cost, possibly `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedCost {
    Finite(f64),
    Infinite,
}

impl ExtendedCost {
    pub const ZERO: ExtendedCost = ExtendedCost::Finite(0.0);

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedCost::Finite(x) => Some(x),
            ExtendedCost::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedCost::Infinite)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    /// `|a − b|` with `∞ − y = ∞` and `∞ − ∞ = 0`.
    fn abs_diff(a: Death, b: Death) -> Self {
        match (a, b) {
            (Death::Finite(x), Death::Finite(y)) => ExtendedCost::Finite((x - y).abs()),
            (Death::Infinity, Death::Infinity) => ExtendedCost::ZERO,
            _ => ExtendedCost::Infinite,
        }
    }

    /// Scaling by a positive finite factor; `∞` stays `∞`.
    pub fn scale(self, factor: f64) -> Self {
        match self {
            ExtendedCost::Finite(x) => ExtendedCost::Finite(x * factor),
            ExtendedCost::Infinite => ExtendedCost::Infinite,
        }
    }

    /// `self ≤ bound + tol`; an infinite cost never satisfies a finite bound.
    pub fn within(self, bound: f64, tol: f64) -> bool {
        self.finite().is_some_and(|x| x <= bound + tol)
    }
}

impl Eq for ExtendedCost {}

impl Ord for ExtendedCost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedCost::Finite(a), ExtendedCost::Finite(b)) => a.total_cmp(b),
            (ExtendedCost::Finite(_), ExtendedCost::Infinite) => Ordering::Less,
            (ExtendedCost::Infinite, ExtendedCost::Finite(_)) => Ordering::Greater,
            (ExtendedCost::Infinite, ExtendedCost::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtendedCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedCost {
    /// `inf`, or the value with 12 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedCost::Finite(x) => f.write_str(&format_significant(*x, 12)),
            ExtendedCost::Infinite => f.write_str("inf"),
        }
    }
}

/// `%.{digits}g`-style formatting: fixed or scientific, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    }
}

/// A diagram point or the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagramPoint {
    Point { birth: f64, death: Death },
    Diagonal,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: Death) -> Self {
        DiagramPoint::Point { birth, death }
    }

    /// Half the persistence; the cost of sending the point to the diagonal.
    pub fn half_persistence(self) -> ExtendedCost {
        match self {
            DiagramPoint::Point { birth, death } => match death {
                Death::Finite(d) => ExtendedCost::Finite((d - birth) / 2.0),
                Death::Infinity => ExtendedCost::Infinite,
            },
            DiagramPoint::Diagonal => ExtendedCost::ZERO,
        }
    }
}

/// `min{ max(|u−u'|, |v−v'|), max((v−u)/2, (v'−u')/2) }`; the diagonal has
/// persistence 0.
pub fn pseudo_distance(a: DiagramPoint, b: DiagramPoint) -> ExtendedCost {
    let diagonal = a.half_persistence().max(b.half_persistence());
    match (a, b) {
        (DiagramPoint::Point { birth: u, death: v }, DiagramPoint::Point { birth: u2, death: v2 }) => {
            let shift = ExtendedCost::Finite((u - u2).abs()).max(ExtendedCost::abs_diff(v, v2));
            shift.min(diagonal)
        }
        _ => diagonal,
    }
}

/// One unit of matching: `left` from the first diagram (or the diagonal) is
/// sent to `right` in the second (or the diagonal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    pub left: DiagramPoint,
    pub right: DiagramPoint,
    pub cost: ExtendedCost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingResult {
    pub distance: ExtendedCost,
    pub matching: Vec<Assignment>,
}

impl MatchingResult {
    /// Checks that every unit point of `d1` and `d2` appears exactly once and
    /// that the largest assignment cost equals the distance.
    pub fn is_valid_for(&self, d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> bool {
        let take = |pts: Vec<(f64, Death)>, side: &dyn Fn(&Assignment) -> DiagramPoint| {
            let mut remaining: Vec<(f64, Death)> = pts;
            for a in &self.matching {
                if let DiagramPoint::Point { birth, death } = side(a) {
                    match remaining.iter().position(|&(b, d)| b == birth && d == death) {
                        Some(i) => {
                            remaining.swap_remove(i);
                        }
                        None => return false,
                    }
                }
            }
            remaining.is_empty()
        };
        let costs_ok = self.matching.iter().all(|a| a.cost == pseudo_distance(a.left, a.right));
        let max = self.matching.iter().map(|a| a.cost).fold(ExtendedCost::ZERO, ExtendedCost::max);
        costs_ok
            && max == self.distance
            && take(d1.unit_points(), &|a| a.left)
            && take(d2.unit_points(), &|a| a.right)
    }
}

fn unit_points(d: &PersistenceDiagram) -> Vec<DiagramPoint> {
    d.unit_points().into_iter().map(|(b, dth)| DiagramPoint::new(b, dth)).collect()
}

/// Bipartite graph on `left + right` vertices, with Hopcroft–Karp.
struct Bipartite {
    adj: Vec<Vec<usize>>,
    right: usize,
}

impl Bipartite {
    /// Returns `mate[left] = right` when a perfect matching exists.
    fn perfect_matching(&self) -> Option<Vec<usize>> {
        const NIL: usize = usize::MAX;
        let n = self.adj.len();
        let mut mate_l = vec![NIL; n];
        let mut mate_r = vec![NIL; self.right];
        let mut dist = vec![0usize; n];
        let mut matched = 0;
        loop {
            // BFS layering from free left vertices
            let mut queue = VecDeque::new();
            for l in 0..n {
                if mate_l[l] == NIL {
                    dist[l] = 0;
                    queue.push_back(l);
                } else {
                    dist[l] = usize::MAX;
                }
            }
            let mut found = false;
            while let Some(l) = queue.pop_front() {
                for &r in &self.adj[l] {
                    let m = mate_r[r];
                    if m == NIL {
                        found = true;
                    } else if dist[m] == usize::MAX {
                        dist[m] = dist[l] + 1;
                        queue.push_back(m);
                    }
                }
            }
            if !found {
                break;
            }
            let mut next = vec![0usize; n];
            for l in 0..n {
                if mate_l[l] == NIL && self.augment(l, &mut mate_l, &mut mate_r, &mut dist, &mut next) {
                    matched += 1;
                }
            }
        }
        (matched == n && n == self.right).then_some(mate_l)
    }

    fn augment(
        &self,
        l: usize,
        mate_l: &mut [usize],
        mate_r: &mut [usize],
        dist: &mut [usize],
        next: &mut [usize],
    ) -> bool {
        while next[l] < self.adj[l].len() {
            let r = self.adj[l][next[l]];
            next[l] += 1;
            let m = mate_r[r];
            let ok = m == usize::MAX
                || (dist[m] == dist[l] + 1 && self.augment(m, mate_l, mate_r, dist, next));
            if ok {
                mate_l[l] = r;
                mate_r[r] = l;
                return true;
            }
        }
        dist[l] = usize::MAX;
        false
    }
}

/// Threshold structure shared by the feasibility tests.
///
/// Left vertices: the `m` points of `A`, then `n` diagonal copies (one per
/// point of `B`). Right vertices: the `n` points of `B`, then `m` diagonal
/// copies (one per point of `A`).
struct Instance {
    a: Vec<DiagramPoint>,
    b: Vec<DiagramPoint>,
}

impl Instance {
    fn graph(&self, threshold: ExtendedCost) -> Bipartite {
        let (m, n) = (self.a.len(), self.b.len());
        let mut adj = vec![Vec::new(); m + n];
        for (i, &p) in self.a.iter().enumerate() {
            for (j, &q) in self.b.iter().enumerate() {
                if pseudo_distance(p, q) <= threshold {
                    adj[i].push(j);
                }
            }
            if p.half_persistence() <= threshold {
                adj[i].push(n + i);
            }
        }
        for (j, &q) in self.b.iter().enumerate() {
            if q.half_persistence() <= threshold {
                adj[m + j].push(j);
            }
            adj[m + j].extend(n..n + m);
        }
        Bipartite { adj, right: n + m }
    }

    fn assignments(&self, mate: &[usize]) -> Vec<Assignment> {
        let (m, n) = (self.a.len(), self.b.len());
        mate.iter()
            .enumerate()
            .filter_map(|(l, &r)| {
                let left = if l < m { self.a[l] } else { DiagramPoint::Diagonal };
                let right = if r < n { self.b[r] } else { DiagramPoint::Diagonal };
                (left != DiagramPoint::Diagonal || right != DiagramPoint::Diagonal)
                    .then(|| Assignment { left, right, cost: pseudo_distance(left, right) })
            })
            .collect()
    }
}

/// Matching distance between two diagrams of the same degree, with an
/// optimal matching.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<MatchingResult> {
    if d1.degree() != d2.degree() {
        return Err(Error::DegreeMismatch { left: d1.degree(), right: d2.degree() });
    }
    let inst = Instance { a: unit_points(d1), b: unit_points(d2) };

    let mut candidates = vec![ExtendedCost::ZERO];
    for &p in &inst.a {
        candidates.push(p.half_persistence());
        candidates.extend(inst.b.iter().map(|&q| pseudo_distance(p, q)));
    }
    candidates.extend(inst.b.iter().map(|q| q.half_persistence()));
    candidates.push(ExtendedCost::Infinite);
    candidates.sort();
    candidates.dedup();

    // the largest candidate (∞) admits every edge, so it is always feasible
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut best = inst.graph(candidates[hi]).perfect_matching().expect("complete graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match inst.graph(candidates[mid]).perfect_matching() {
            Some(mate) => {
                best = mate;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let matching = inst.assignments(&best);
    let distance = matching.iter().map(|a| a.cost).fold(ExtendedCost::ZERO, ExtendedCost::max);
    debug_assert_eq!(distance, candidates[hi]);
    Ok(MatchingResult { distance, matching })
}

pub const BRUTE_FORCE_LIMIT: usize = 7;

/// Exhaustive minimum over all partial injections `A → B`, with unmatched
/// points sent to the diagonal.
pub fn brute_force_bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<ExtendedCost> {
    if d1.degree() != d2.degree() {
        return Err(Error::DegreeMismatch { left: d1.degree(), right: d2.degree() });
    }
    let a = unit_points(d1);
    let b = unit_points(d2);
    if a.len() + b.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooManyPoints { points: a.len() + b.len(), limit: BRUTE_FORCE_LIMIT });
    }

    fn search(i: usize, a: &[DiagramPoint], b: &[DiagramPoint], used: &mut [bool], acc: ExtendedCost, best: &mut ExtendedCost) {
        if i == a.len() {
            let rest = b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(q, _)| q.half_persistence())
                .fold(acc, ExtendedCost::max);
            *best = (*best).min(rest);
            return;
        }
        search(i + 1, a, b, used, acc.max(a[i].half_persistence()), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                search(i + 1, a, b, used, acc.max(pseudo_distance(a[i], b[j])), best);
                used[j] = false;
            }
        }
    }

    let mut best = ExtendedCost::Infinite;
    search(0, &a, &b, &mut vec![false; b.len()], ExtendedCost::ZERO, &mut best);
    Ok(best)
}

/// Matching distance between the degree-`k` diagrams of two scalar functions
/// on the same complex.
pub fn dmatch_1d(phi: &MultiFilteredComplex, psi: &MultiFilteredComplex, k: usize, p: u32) -> Result<ExtendedCost> {
    if !phi.same_structure(psi) {
        return Err(Error::StructureMismatch);
    }
    let d1 = complex_diagram(phi, k, p)?;
    let d2 = complex_diagram(psi, k, p)?;
    Ok(bottleneck(&d1, &d2)?.distance)
}

/// Contribution of one admissible pair to the multidimensional estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafReport {
    pub pair: AdmissiblePair,
    pub min_l: f64,
    pub leaf_distance: ExtendedCost,
    pub weighted: ExtendedCost,
}

/// `max` over the sampled pairs of `min_i l_i · d_match` of the two leaf
/// diagrams. This is a lower bound for the supremum over all admissible pairs.
pub fn dmatch_multi_estimate(
    phi: &MultiFilteredComplex,
    psi: &MultiFilteredComplex,
    k: usize,
    p: u32,
    samples: &[AdmissiblePair],
    exec: Execution,
) -> Result<(ExtendedCost, Vec<LeafReport>)> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if !phi.same_structure(psi) {
        return Err(Error::StructureMismatch);
    }
    if phi.n() != psi.n() {
        return Err(Error::DimensionMismatch { expected: phi.n(), found: psi.n() });
    }
    let reports = par::try_map(exec, samples, |pair| -> Result<LeafReport> {
        let d1 = leaf_diagram(phi, pair, k, p)?;
        let d2 = leaf_diagram(psi, pair, k, p)?;
        let leaf_distance = bottleneck(&d1, &d2)?.distance;
        let min_l = pair.min_l();
        Ok(LeafReport { pair: pair.clone(), min_l, leaf_distance, weighted: leaf_distance.scale(min_l) })
    })?;
    let estimate = reports.iter().map(|r| r.weighted).fold(ExtendedCost::ZERO, ExtendedCost::max);
    Ok((estimate, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::foliation::make_admissible;
    use crate::homology::fixtures::s;
    use crate::persistence::Cornerpoint;
    use proptest::prelude::*;

    fn pt(b: f64, d: f64) -> DiagramPoint {
        DiagramPoint::new(b, Death::Finite(d))
    }

    fn inf_pt(b: f64) -> DiagramPoint {
        DiagramPoint::new(b, Death::Infinity)
    }

    fn dgm(points: &[(f64, Option<f64>)]) -> PersistenceDiagram {
        PersistenceDiagram::new(
            0,
            points.iter().map(|&(b, d)| match d {
                Some(d) => Cornerpoint::proper(b, d, 1).unwrap(),
                None => Cornerpoint::at_infinity(b, 1).unwrap(),
            }),
        )
    }

    #[test]
    fn pseudo_distance_examples() {
        assert_eq!(pseudo_distance(pt(0.0, 4.0), pt(0.0, 4.0)), ExtendedCost::ZERO);
        assert_eq!(pseudo_distance(pt(0.0, 4.0), DiagramPoint::Diagonal), ExtendedCost::Finite(2.0));
        assert_eq!(pseudo_distance(pt(0.0, 4.0), pt(1.0, 5.0)), ExtendedCost::Finite(1.0));
        assert_eq!(pseudo_distance(inf_pt(0.0), pt(1.0, 3.0)), ExtendedCost::Infinite);
        assert_eq!(pseudo_distance(inf_pt(0.0), inf_pt(1.5)), ExtendedCost::Finite(1.5));
        assert_eq!(pseudo_distance(inf_pt(0.0), DiagramPoint::Diagonal), ExtendedCost::Infinite);
        assert_eq!(pseudo_distance(DiagramPoint::Diagonal, DiagramPoint::Diagonal), ExtendedCost::ZERO);
    }

    #[test]
    fn bottleneck_examples() {
        let d = dgm(&[(0.0, None), (1.0, Some(2.0))]);
        let r = bottleneck(&d, &d).unwrap();
        assert_eq!(r.distance, ExtendedCost::ZERO);
        assert!(r.is_valid_for(&d, &d));

        let single = dgm(&[(0.0, Some(2.0))]);
        let empty = PersistenceDiagram::empty(0);
        assert_eq!(bottleneck(&single, &empty).unwrap().distance, ExtendedCost::Finite(1.0));

        let shifted = dgm(&[(0.3, None), (1.0, Some(2.0))]);
        let r = bottleneck(&d, &shifted).unwrap();
        assert_eq!(r.distance, ExtendedCost::Finite(0.3));
        assert!(r.is_valid_for(&d, &shifted));

        let r = bottleneck(&dgm(&[(0.0, None)]), &empty).unwrap();
        assert_eq!(r.distance, ExtendedCost::Infinite);
        assert!(r.is_valid_for(&dgm(&[(0.0, None)]), &empty));

        assert!(matches!(
            bottleneck(&d, &PersistenceDiagram::empty(1)),
            Err(Error::DegreeMismatch { left: 0, right: 1 })
        ));
    }

    #[test]
    fn brute_force_examples() {
        let d = dgm(&[(0.0, None), (1.0, Some(2.0))]);
        assert_eq!(brute_force_bottleneck(&d, &d).unwrap(), ExtendedCost::ZERO);
        let shifted = dgm(&[(0.3, None), (1.0, Some(2.0))]);
        assert_eq!(brute_force_bottleneck(&d, &shifted).unwrap(), ExtendedCost::Finite(0.3));
        assert_eq!(
            brute_force_bottleneck(&dgm(&[(0.0, Some(4.0))]), &dgm(&[(1.0, Some(5.0))])).unwrap(),
            ExtendedCost::Finite(1.0)
        );
        assert_eq!(
            brute_force_bottleneck(&dgm(&[(0.0, Some(4.0))]), &dgm(&[(3.0, Some(3.5))])).unwrap(),
            ExtendedCost::Finite(2.0)
        );
        let big = dgm(&[(0.0, Some(1.0)), (0.0, Some(2.0)), (0.0, Some(3.0)), (0.0, Some(4.0))]);
        assert!(matches!(brute_force_bottleneck(&big, &big), Err(Error::TooManyPoints { .. })));
    }

    #[test]
    fn format_twelve_digits() {
        assert_eq!(ExtendedCost::Finite(0.3).to_string(), "0.3");
        assert_eq!(ExtendedCost::Finite(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(ExtendedCost::Finite(2.0).to_string(), "2");
        assert_eq!(ExtendedCost::Finite(1234567.0).to_string(), "1234567");
        assert_eq!(ExtendedCost::Finite(1e-7).to_string(), "1e-7");
        assert_eq!(ExtendedCost::Finite(2.5e13).to_string(), "2.5e13");
        assert_eq!(ExtendedCost::Infinite.to_string(), "inf");
    }

    fn path(values: [f64; 3]) -> MultiFilteredComplex {
        let rows: Vec<Vec<f64>> = values.iter().map(|&x| vec![x]).collect();
        build_complex(1, &rows, &[s(&[0, 2]), s(&[1, 2])]).unwrap()
    }

    #[test]
    fn dmatch_1d_examples() {
        let phi = path([0.0, 1.0, 2.0]);
        assert_eq!(dmatch_1d(&phi, &phi, 0, 2).unwrap(), ExtendedCost::ZERO);
        let psi = phi.with_scalar_values(&[0.25, 1.25, 2.25]).unwrap();
        assert_eq!(dmatch_1d(&phi, &psi, 0, 2).unwrap(), ExtendedCost::Finite(0.25));
        let other = build_complex(1, &[vec![0.0]], &[s(&[0])]).unwrap();
        assert_eq!(dmatch_1d(&phi, &other, 0, 2).unwrap_err(), Error::StructureMismatch);
    }

    #[test]
    fn dmatch_multi_examples() {
        let eps = 0.125;
        let phi = build_complex(2, &[vec![0.0, 0.0]], &[s(&[0])]).unwrap();
        let psi = phi.with_values(&[vec![eps, eps]]).unwrap();
        let sym = vec![make_admissible(&[1.0, 1.0], &[0.0, 0.0]).unwrap()];
        let (est, report) = dmatch_multi_estimate(&phi, &psi, 0, 2, &sym, Execution::Sequential).unwrap();
        assert!((est.finite().unwrap() - eps).abs() < 1e-9);
        assert_eq!(report.len(), 1);

        let (same, _) = dmatch_multi_estimate(&phi, &phi, 0, 2, &sym, Execution::Parallel).unwrap();
        assert_eq!(same, ExtendedCost::ZERO);
        assert_eq!(
            dmatch_multi_estimate(&phi, &psi, 0, 2, &[], Execution::Sequential).unwrap_err(),
            Error::EmptySample
        );
    }

    fn arb_diagram(max: usize) -> impl Strategy<Value = PersistenceDiagram> {
        proptest::collection::vec((0i32..8, prop::option::weighted(0.8, 1i32..6)), 0..=max).prop_map(|pts| {
            PersistenceDiagram::new(
                0,
                pts.into_iter().map(|(b, d)| {
                    let b = f64::from(b) / 2.0;
                    match d {
                        Some(d) => Cornerpoint::proper(b, b + f64::from(d) / 2.0, 1).unwrap(),
                        None => Cornerpoint::at_infinity(b, 1).unwrap(),
                    }
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn bottleneck_matches_brute_force(a in arb_diagram(4), b in arb_diagram(3)) {
            let r = bottleneck(&a, &b).unwrap();
            prop_assert!(r.is_valid_for(&a, &b));
            prop_assert_eq!(r.distance, brute_force_bottleneck(&a, &b).unwrap());
        }

        #[test]
        fn bottleneck_is_symmetric(a in arb_diagram(5), b in arb_diagram(5)) {
            prop_assert_eq!(bottleneck(&a, &b).unwrap().distance, bottleneck(&b, &a).unwrap().distance);
        }
    }
}
