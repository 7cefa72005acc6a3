//! Random complexes, functions and diagrams for experiments and tests.

use rand::Rng;

use crate::complex::{build_complex, MultiFilteredComplex, Simplex};
use crate::persistence::{Cornerpoint, PersistenceDiagram};

/// How vertex values are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueModel {
    /// Uniform on `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    /// `m / denom` with `m` uniform in `lo..=hi`. Ties are frequent and sums
    /// of a few values are exact in binary floating point.
    Dyadic { lo: i32, hi: i32, denom: u32 },
}

impl ValueModel {
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            ValueModel::Uniform { lo, hi } => rng.gen_range(lo..hi),
            ValueModel::Dyadic { lo, hi, denom } => f64::from(rng.gen_range(lo..=hi)) / f64::from(denom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParams {
    pub n: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Hard cap on the number of simplices, vertices included.
    pub max_simplices: usize,
    pub edge_probability: f64,
    pub triangle_probability: f64,
    pub tetrahedron_probability: f64,
    pub values: ValueModel,
}

impl Default for ComplexParams {
    fn default() -> Self {
        ComplexParams {
            n: 1,
            min_vertices: 2,
            max_vertices: 8,
            max_simplices: 40,
            edge_probability: 0.5,
            triangle_probability: 0.4,
            tetrahedron_probability: 0.3,
            values: ValueModel::Dyadic { lo: -16, hi: 16, denom: 4 },
        }
    }
}

/// A random flag-like complex: random edges, then triangles and tetrahedra
/// on top of present faces, stopping at `max_simplices`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, params: &ComplexParams) -> MultiFilteredComplex {
    assert!(params.min_vertices >= 1 && params.min_vertices <= params.max_vertices);
    let nv = rng.gen_range(params.min_vertices..=params.max_vertices.min(params.max_simplices));
    let mut budget = params.max_simplices - nv;
    let mut edges = std::collections::BTreeSet::new();
    let mut generators: Vec<Simplex> = (0..nv).map(Simplex::vertex).collect();

    for a in 0..nv {
        for b in a + 1..nv {
            if budget > 0 && rng.gen_bool(params.edge_probability) {
                edges.insert((a, b));
                generators.push(Simplex::new(vec![a, b]).expect("distinct vertices"));
                budget -= 1;
            }
        }
    }
    let has = |e: &std::collections::BTreeSet<(usize, usize)>, a, b| e.contains(&(a, b));
    let mut triangles = std::collections::BTreeSet::new();
    for a in 0..nv {
        for b in a + 1..nv {
            for c in b + 1..nv {
                if budget > 0
                    && has(&edges, a, b)
                    && has(&edges, a, c)
                    && has(&edges, b, c)
                    && rng.gen_bool(params.triangle_probability)
                {
                    triangles.insert((a, b, c));
                    generators.push(Simplex::new(vec![a, b, c]).expect("distinct vertices"));
                    budget -= 1;
                }
            }
        }
    }
    for &(a, b, c) in &triangles {
        for d in c + 1..nv {
            if budget > 0
                && triangles.contains(&(a, b, d))
                && triangles.contains(&(a, c, d))
                && triangles.contains(&(b, c, d))
                && rng.gen_bool(params.tetrahedron_probability)
            {
                generators.push(Simplex::new(vec![a, b, c, d]).expect("distinct vertices"));
                budget -= 1;
            }
        }
    }

    let values: Vec<Vec<f64>> =
        (0..nv).map(|_| (0..params.n).map(|_| params.values.sample(rng)).collect()).collect();
    build_complex(params.n, &values, &generators).expect("generated complex is valid")
}

/// Adds independent uniform noise from `[−delta, delta]` to every vertex
/// value component.
pub fn perturb_uniform<R: Rng + ?Sized>(rng: &mut R, c: &MultiFilteredComplex, delta: f64) -> MultiFilteredComplex {
    let rows: Vec<Vec<f64>> = c
        .vertex_rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| if delta > 0.0 { x + rng.gen_range(-delta..=delta) } else { x })
                .collect()
        })
        .collect();
    c.with_values(&rows).expect("same shape")
}

/// Adds `shift` to every vertex value component.
pub fn shift_values(c: &MultiFilteredComplex, shift: f64) -> MultiFilteredComplex {
    let rows: Vec<Vec<f64>> =
        c.vertex_rows().into_iter().map(|row| row.into_iter().map(|x| x + shift).collect()).collect();
    c.with_values(&rows).expect("same shape")
}

/// A random diagram with at most `max_points` unit points on a half-integer
/// lattice; each point is at infinity with probability `infinity_probability`.
pub fn random_diagram<R: Rng + ?Sized>(
    rng: &mut R,
    degree: usize,
    max_points: usize,
    infinity_probability: f64,
) -> PersistenceDiagram {
    let count = rng.gen_range(0..=max_points);
    PersistenceDiagram::new(
        degree,
        (0..count).map(|_| {
            let birth = f64::from(rng.gen_range(-8..=8)) / 2.0;
            if rng.gen_bool(infinity_probability) {
                Cornerpoint::at_infinity(birth, 1).expect("finite birth")
            } else {
                let life = f64::from(rng.gen_range(1..=8)) / 2.0;
                Cornerpoint::proper(birth, birth + life, 1).expect("positive life")
            }
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::check_face_closed;
    use rand::SeedableRng;

    #[test]
    fn generated_complexes_respect_limits() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let params = ComplexParams { n: 2, max_simplices: 30, max_vertices: 10, ..Default::default() };
        for _ in 0..50 {
            let c = random_complex(&mut rng, &params);
            assert!(c.len() <= 30);
            assert_eq!(c.n(), 2);
            check_face_closed(c.simplices()).unwrap();
        }
    }

    #[test]
    fn perturbation_is_bounded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let c = random_complex(&mut rng, &ComplexParams::default());
        let d = perturb_uniform(&mut rng, &c, 0.1);
        assert!(c.sup_distance(&d).unwrap() <= 0.1);
        assert_eq!(c.sup_distance(&shift_values(&c, 0.5)).unwrap(), 0.5);
    }
}
