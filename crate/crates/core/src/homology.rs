//! Simplicial homology over `Z/p` and the brute-force persistent rank.
//!
//! Everything here is correctness-first: ranks come from exact elimination of
//! full boundary matrices, with no reduction tricks. [`persistent_rank_oracle`]
//! is the reference the faster code in [`crate::persistence`] is checked
//! against.

use std::collections::{HashMap, HashSet};

use crate::complex::{check_face_closed, Simplex};
use crate::error::{Error, Result};
use crate::field::{FieldMatrix, PrimeField, SparseColumn};

fn of_dimension(simplices: &[Simplex], k: usize) -> Vec<&Simplex> {
    simplices.iter().filter(|s| s.dimension() == k).collect()
}

/// Boundary map `∂_k` with rows indexed by `rows` and columns by `cols`.
fn boundary_between(field: PrimeField, rows: &[&Simplex], cols: &[&Simplex]) -> Result<FieldMatrix> {
    let row_index: HashMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let columns = cols
        .iter()
        .map(|s| {
            s.facets()
                .enumerate()
                .map(|(i, facet)| {
                    let r = *row_index
                        .get(&facet)
                        .ok_or_else(|| Error::NotFaceClosed(facet.to_string()))?;
                    let sign = if i % 2 == 0 { 1 } else { field.neg(1) };
                    Ok((r, sign))
                })
                .collect::<Result<SparseColumn>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldMatrix::from_columns(field, rows.len(), columns))
}

/// Matrix of `∂_k` from the k-simplices to the (k−1)-simplices of
/// `simplices`, both taken in the given order. `∂_0` is the `0 × #vertices`
/// zero map.
pub fn boundary_matrix(simplices: &[Simplex], k: usize, p: u32) -> Result<FieldMatrix> {
    let field = PrimeField::new(p)?;
    check_face_closed(simplices)?;
    let cols = of_dimension(simplices, k);
    let rows = if k == 0 { Vec::new() } else { of_dimension(simplices, k - 1) };
    boundary_between(field, &rows, &cols)
}

/// `dim H_k(sub; Z/p) = dim ker ∂_k − rank ∂_{k+1}`.
pub fn betti(sub: &[Simplex], k: usize, p: u32) -> Result<usize> {
    let dk = boundary_matrix(sub, k, p)?;
    let dk1 = boundary_matrix(sub, k + 1, p)?;
    Ok(dk.cols() - dk.rank() - dk1.rank())
}

/// Rank of `H_k(small) → H_k(large)` induced by inclusion, over `Z/p`.
///
/// Computed as `dim Z_k(small) − dim(Z_k(small) ∩ B_k(large))`, with the
/// intersection dimension taken from `dim U + dim W − dim(U + W)`.
pub fn persistent_rank_oracle(small: &[Simplex], large: &[Simplex], k: usize, p: u32) -> Result<usize> {
    let field = PrimeField::new(p)?;
    check_face_closed(small)?;
    check_face_closed(large)?;
    let large_set: HashSet<&Simplex> = large.iter().collect();
    if let Some(s) = small.iter().find(|s| !large_set.contains(s)) {
        return Err(Error::NotASubcomplex(s.to_string()));
    }

    let small_k = of_dimension(small, k);
    if small_k.is_empty() {
        return Ok(0);
    }
    let small_km1 = if k == 0 { Vec::new() } else { of_dimension(small, k - 1) };
    let cycles = boundary_between(field, &small_km1, &small_k)?.kernel_basis();
    if cycles.is_empty() {
        return Ok(0);
    }

    let large_k = of_dimension(large, k);
    let large_index: HashMap<&Simplex, usize> =
        large_k.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let embed: Vec<usize> = small_k.iter().map(|s| large_index[s]).collect();
    let embedded: Vec<SparseColumn> = cycles
        .iter()
        .map(|z| z.iter().map(|&(i, v)| (embed[i], v)).collect())
        .collect();
    let z = FieldMatrix::from_columns(field, large_k.len(), embedded);

    let large_kp1 = of_dimension(large, k + 1);
    let b = boundary_between(field, &large_k, &large_kp1)?;

    let dim_z = cycles.len();
    let dim_b = b.rank();
    let dim_sum = z.hstack(&b).rank();
    let dim_cap = dim_z + dim_b - dim_sum;
    Ok(dim_z - dim_cap)
}
