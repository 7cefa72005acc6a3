//! Finite simplicial complexes with vector-valued vertex functions.
//!
//! Values are extended from vertices to simplices by the componentwise
//! maximum (the lower-star rule), so every sublevel set
//! `{σ : value(σ) ⪯ u}` is a subcomplex.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A simplex given by its strictly increasing vertex ids.
///
/// Ordering is canonical: by dimension first, then lexicographic on the
/// vertex list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Simplex(Box<[usize]>);

impl Simplex {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(Simplex(vertices.into_boxed_slice()))
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v].into_boxed_slice())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces, in the order obtained by dropping vertex
    /// `0, 1, 2, ...`. The i-th facet carries the boundary sign `(-1)^i`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let len = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..len).map(move |skip| {
            let vs: Vec<usize> = self
                .0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            Simplex(vs.into_boxed_slice())
        })
    }

    /// All non-empty faces including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| {
                let vs: Vec<usize> =
                    (0..k).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect();
                Simplex(vs.into_boxed_slice())
            })
            .collect()
    }

    /// The join of this simplex with a vertex not already in it.
    pub fn join(&self, apex: usize) -> Result<Simplex> {
        let mut vs = self.0.to_vec();
        vs.push(apex);
        Simplex::new(vs)
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Checks that every facet of every simplex is listed.
pub fn check_face_closed(simplices: &[Simplex]) -> Result<()> {
    let set: std::collections::HashSet<&Simplex> = simplices.iter().collect();
    for s in simplices {
        for f in s.facets() {
            if !set.contains(&f) {
                return Err(Error::NotFaceClosed(f.to_string()));
            }
        }
    }
    Ok(())
}

#[derive(Debug)]
struct Structure {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

/// A finite simplicial complex with an `n`-component function on vertices.
///
/// Immutable after construction. [`MultiFilteredComplex::with_values`] makes
/// a sibling complex that shares the simplices but carries another function.
#[derive(Debug, Clone)]
pub struct MultiFilteredComplex {
    n: usize,
    vertex_values: Vec<f64>,
    simplex_values: Vec<f64>,
    structure: Arc<Structure>,
}

/// Face closure of `generators` with `vertex_values[v]` attached to vertex `v`.
pub fn build_complex(
    n: usize,
    vertex_values: &[Vec<f64>],
    generators: &[Simplex],
) -> Result<MultiFilteredComplex> {
    let mut closure = BTreeSet::new();
    for g in generators {
        if let Some(&v) = g.vertices().iter().find(|&&v| v >= vertex_values.len()) {
            return Err(Error::DanglingVertex { vertex: v, count: vertex_values.len() });
        }
        if !closure.contains(g) {
            closure.extend(g.faces());
        }
    }
    let simplices: Vec<Simplex> = closure.into_iter().collect();
    let index = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let structure = Arc::new(Structure { simplices, index });
    MultiFilteredComplex::from_structure(n, vertex_values, structure)
}

impl MultiFilteredComplex {
    fn from_structure(
        n: usize,
        vertex_values: &[Vec<f64>],
        structure: Arc<Structure>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoComponents);
        }
        let mut flat = Vec::with_capacity(vertex_values.len() * n);
        for (v, row) in vertex_values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteValue { vertex: v });
            }
            flat.extend_from_slice(row);
        }
        let mut simplex_values = Vec::with_capacity(structure.simplices.len() * n);
        for s in &structure.simplices {
            for i in 0..n {
                let m = s
                    .vertices()
                    .iter()
                    .map(|&v| flat[v * n + i])
                    .fold(f64::NEG_INFINITY, f64::max);
                simplex_values.push(m);
            }
        }
        Ok(MultiFilteredComplex { n, vertex_values: flat, simplex_values, structure })
    }

    /// Same simplices, different vertex function (possibly with another `n`).
    pub fn with_values(&self, vertex_values: &[Vec<f64>]) -> Result<Self> {
        let n = vertex_values.first().map_or(self.n, Vec::len);
        if vertex_values.len() != self.num_vertices() {
            return Err(Error::InvalidArgument(format!(
                "expected values for {} vertices, got {}",
                self.num_vertices(),
                vertex_values.len()
            )));
        }
        Self::from_structure(n, vertex_values, Arc::clone(&self.structure))
    }

    /// Scalar sibling built from a per-vertex value list.
    pub fn with_scalar_values(&self, values: &[f64]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = values.iter().map(|&x| vec![x]).collect();
        self.with_values(&rows)
    }

    /// Number of function components.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vertex value rows (vertex ids are `0..num_vertices`).
    pub fn num_vertices(&self) -> usize {
        self.vertex_values.len() / self.n
    }

    pub fn len(&self) -> usize {
        self.structure.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structure.simplices.is_empty()
    }

    /// Simplices in canonical order.
    pub fn simplices(&self) -> &[Simplex] {
        &self.structure.simplices
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.structure.index.contains_key(s)
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.structure.index.get(s).copied()
    }

    /// `true` when both complexes have exactly the same simplices.
    pub fn same_structure(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.structure, &other.structure)
            || (self.num_vertices() == other.num_vertices()
                && self.structure.simplices == other.structure.simplices)
    }

    pub fn vertex_value(&self, v: usize) -> &[f64] {
        &self.vertex_values[v * self.n..(v + 1) * self.n]
    }

    /// Per-vertex rows, including vertices that no simplex uses.
    pub fn vertex_rows(&self) -> Vec<Vec<f64>> {
        self.vertex_values.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Value of the simplex at canonical position `idx`.
    pub fn value_at(&self, idx: usize) -> &[f64] {
        &self.simplex_values[idx * self.n..(idx + 1) * self.n]
    }

    /// Componentwise maximum of the vertex values of `s`.
    pub fn simplex_value(&self, s: &Simplex) -> Result<Vec<f64>> {
        let idx = self.index_of(s).ok_or_else(|| Error::SimplexNotInComplex(s.to_string()))?;
        Ok(self.value_at(idx).to_vec())
    }

    /// Canonical positions of simplices whose value is `⪯ u`.
    pub fn sublevel_indices(&self, u: &[f64]) -> Result<Vec<usize>> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: u.len() });
        }
        Ok((0..self.len())
            .filter(|&i| self.value_at(i).iter().zip(u).all(|(a, b)| a <= b))
            .collect())
    }

    /// The sublevel subcomplex `{σ : value(σ) ⪯ u}` in canonical order.
    pub fn sublevel_complex(&self, u: &[f64]) -> Result<Vec<Simplex>> {
        Ok(self
            .sublevel_indices(u)?
            .into_iter()
            .map(|i| self.structure.simplices[i].clone())
            .collect())
    }

    /// Values of component `i` on the vertices that belong to the complex.
    pub fn component_on_vertices(&self, i: usize) -> Vec<f64> {
        self.vertex_simplices().map(|v| self.vertex_value(v)[i]).collect()
    }

    /// Vertex ids that appear as 0-simplices.
    pub fn vertex_simplices(&self) -> impl Iterator<Item = usize> + '_ {
        self.structure
            .simplices
            .iter()
            .take_while(|s| s.dimension() == 0)
            .map(|s| s.vertices()[0])
    }

    /// The per-vertex values when `n == 1`.
    pub fn scalar_values(&self) -> Result<&[f64]> {
        if self.n != 1 {
            return Err(Error::NotScalar(self.n));
        }
        Ok(&self.vertex_values)
    }

    /// Sorted distinct values of component `i` attained on the complex.
    pub fn attained_values(&self, i: usize) -> Vec<f64> {
        let mut vals = self.component_on_vertices(i);
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals
    }

    /// Minimum and maximum of component `i` over the complex.
    pub fn component_range(&self, i: usize) -> Option<(f64, f64)> {
        let vals = self.attained_values(i);
        Some((*vals.first()?, *vals.last()?))
    }

    /// `max |φ_i(x)|` over vertices of the complex and all components.
    pub fn max_abs(&self) -> f64 {
        self.vertex_simplices()
            .flat_map(|v| self.vertex_value(v).iter().map(|x| x.abs()))
            .fold(0.0, f64::max)
    }

    /// `max_x ‖φ(x) − ψ(x)‖∞` over vertices of the complex.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if !self.same_structure(other) {
            return Err(Error::StructureMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(self
            .vertex_simplices()
            .flat_map(|v| {
                self.vertex_value(v)
                    .iter()
                    .zip(other.vertex_value(v))
                    .map(|(a, b)| (a - b).abs())
            })
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(vs: &[usize]) -> Simplex {
        Simplex::new(vs.to_vec()).unwrap()
    }

    fn edge() -> MultiFilteredComplex {
        build_complex(1, &[vec![0.0], vec![1.0]], &[s(&[0, 1])]).unwrap()
    }

    #[test]
    fn face_closure_of_one_edge() {
        let c = edge();
        assert_eq!(c.simplices(), &[s(&[0]), s(&[1]), s(&[0, 1])]);
    }

    #[test]
    fn single_vertex_complex() {
        let c = build_complex(2, &[vec![1.0, 3.0]], &[s(&[0])]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.simplex_value(&s(&[0])).unwrap(), vec![1.0, 3.0]);
    }

    #[test]
    fn path_graph_closure() {
        let c = build_complex(1, &[vec![0.0], vec![1.0], vec![2.0]], &[s(&[0, 2]), s(&[1, 2])])
            .unwrap();
        assert_eq!(c.simplices(), &[s(&[0]), s(&[1]), s(&[2]), s(&[0, 2]), s(&[1, 2])]);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            build_complex(2, &[vec![0.0]], &[s(&[0])]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, found: 1 }
        );
        assert_eq!(
            build_complex(1, &[vec![0.0]], &[s(&[0, 1])]).unwrap_err(),
            Error::DanglingVertex { vertex: 1, count: 1 }
        );
        assert_eq!(Simplex::new(vec![2, 1, 2]).unwrap_err(), Error::DuplicateVertex(2));
        assert_eq!(Simplex::new(vec![]).unwrap_err(), Error::EmptySimplex);
        assert!(matches!(
            build_complex(1, &[vec![f64::NAN]], &[s(&[0])]),
            Err(Error::NonFiniteValue { vertex: 0 })
        ));
    }

    #[test]
    fn simplex_values_are_componentwise_max() {
        assert_eq!(edge().simplex_value(&s(&[0, 1])).unwrap(), vec![1.0]);
        let tri = build_complex(1, &[vec![2.0], vec![0.0], vec![5.0]], &[s(&[0, 1, 2])]).unwrap();
        assert_eq!(tri.simplex_value(&s(&[0, 1, 2])).unwrap(), vec![5.0]);
        let two = build_complex(2, &[vec![0.0, 4.0], vec![3.0, 1.0]], &[s(&[0, 1])]).unwrap();
        assert_eq!(two.simplex_value(&s(&[0, 1])).unwrap(), vec![3.0, 4.0]);
        assert!(matches!(edge().simplex_value(&s(&[0, 2])), Err(Error::SimplexNotInComplex(_))));
    }

    #[test]
    fn sublevel_examples() {
        let c = edge();
        assert_eq!(c.sublevel_complex(&[0.5]).unwrap(), vec![s(&[0])]);
        assert_eq!(c.sublevel_complex(&[1.0]).unwrap(), c.simplices().to_vec());
        assert!(c.sublevel_complex(&[-1.0]).unwrap().is_empty());
        assert_eq!(
            c.sublevel_complex(&[1.0, 2.0]).unwrap_err(),
            Error::DimensionMismatch { expected: 1, found: 2 }
        );
    }

    #[test]
    fn facets_carry_alternating_positions() {
        let f: Vec<Simplex> = s(&[0, 1, 2]).facets().collect();
        assert_eq!(f, vec![s(&[1, 2]), s(&[0, 2]), s(&[0, 1])]);
        assert_eq!(s(&[3]).facets().count(), 0);
    }

    fn arb_complex() -> impl Strategy<Value = (MultiFilteredComplex, Vec<f64>, Vec<f64>)> {
        (2usize..7).prop_flat_map(|nv| {
            (
                proptest::collection::vec(proptest::collection::vec(-4i32..4, 2), nv),
                proptest::collection::vec(proptest::collection::btree_set(0..nv, 1..4), 1..8),
                proptest::collection::vec(-5i32..5, 2),
                proptest::collection::vec(0i32..4, 2),
            )
                .prop_map(|(vals, gens, u, du)| {
                    let values: Vec<Vec<f64>> = vals
                        .iter()
                        .map(|r| r.iter().map(|&x| f64::from(x) / 2.0).collect())
                        .collect();
                    let gens: Vec<Simplex> = gens
                        .into_iter()
                        .map(|g| Simplex::new(g.into_iter().collect()).unwrap())
                        .collect();
                    let c = build_complex(2, &values, &gens).unwrap();
                    let u: Vec<f64> = u.iter().map(|&x| f64::from(x) / 2.0).collect();
                    let v: Vec<f64> = u.iter().zip(&du).map(|(a, &d)| a + f64::from(d)).collect();
                    (c, u, v)
                })
        })
    }

    proptest! {
        #[test]
        fn sublevels_are_nested_and_face_closed((c, u, v) in arb_complex()) {
            let small = c.sublevel_complex(&u).unwrap();
            let large = c.sublevel_complex(&v).unwrap();
            prop_assert!(check_face_closed(&small).is_ok());
            prop_assert!(check_face_closed(&large).is_ok());
            prop_assert!(small.iter().all(|s| large.contains(s)));
        }

        #[test]
        fn sublevel_depends_only_on_attained_values((c, u, _v) in arb_complex()) {
            // snap each threshold down to the largest attained value below it
            let snapped: Vec<f64> = (0..2)
                .map(|i| {
                    c.attained_values(i)
                        .into_iter()
                        .filter(|&x| x <= u[i])
                        .fold(u[i] - 1000.0, f64::max)
                })
                .collect();
            prop_assert_eq!(c.sublevel_complex(&u).unwrap(), c.sublevel_complex(&snapped).unwrap());
        }
    }
}
