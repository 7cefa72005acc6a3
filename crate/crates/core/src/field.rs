//! Exact linear algebra over `Z/p`.
//!
//! Matrices are stored as sparse columns. Rank and kernel use dense
//! Gauss–Jordan elimination up to [`DENSE_COLUMN_LIMIT`] columns and sparse
//! column reduction beyond it.

use crate::error::{Error, Result};

pub const DENSE_COLUMN_LIMIT: usize = 512;

/// Arithmetic in the prime field `Z/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.p)) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(self.p) - u64::from(b)) % u64::from(self.p)) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.p)) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse by Fermat's little theorem. `a` must be non-zero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p));
        let mut base = u64::from(a % self.p);
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        let m = u64::from(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.p)) as u32
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = u64::from(p);
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A sparse column over `Z/p`: `(row, value)` pairs, rows strictly increasing,
/// values non-zero.
pub type SparseColumn = Vec<(usize, u32)>;

/// `target ← target + factor · source`, dropping zero entries.
pub fn axpy(field: PrimeField, target: &SparseColumn, factor: u32, source: &SparseColumn) -> SparseColumn {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let take_t = j >= source.len() || (i < target.len() && target[i].0 < source[j].0);
        let take_s = i >= target.len() || (j < source.len() && source[j].0 < target[i].0);
        if take_t {
            out.push(target[i]);
            i += 1;
        } else if take_s {
            let v = field.mul(factor, source[j].1);
            if v != 0 {
                out.push((source[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(target[i].1, field.mul(factor, source[j].1));
            if v != 0 {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A `rows × cols` matrix over `Z/p` stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    columns: Vec<SparseColumn>,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, columns: vec![Vec::new(); cols] }
    }

    /// Builds from row-major integer entries, reducing each mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = FieldMatrix::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            for (c, &x) in row.iter().enumerate() {
                let v = field.from_i64(x);
                if v != 0 {
                    m.columns[c].push((r, v));
                }
            }
        }
        Ok(m)
    }

    /// Builds from sparse columns. Entries are reduced mod `p`; rows are sorted.
    pub fn from_columns(field: PrimeField, rows: usize, columns: Vec<SparseColumn>) -> Self {
        let columns = columns
            .into_iter()
            .map(|mut col| {
                col.sort_unstable_by_key(|e| e.0);
                col.into_iter()
                    .map(|(r, v)| {
                        debug_assert!(r < rows);
                        (r, v % field.p)
                    })
                    .filter(|e| e.1 != 0)
                    .collect()
            })
            .collect();
        FieldMatrix { field, rows, columns }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &SparseColumn {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.columns[c].iter().find(|e| e.0 == r).map_or(0, |e| e.1)
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; self.cols()]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                out[r][c] = v;
            }
        }
        out
    }

    /// Appends the columns of `other` (same row count and field).
    pub fn hstack(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        FieldMatrix { field: self.field, rows: self.rows, columns }
    }

    pub fn rank(&self) -> usize {
        if self.cols() <= DENSE_COLUMN_LIMIT {
            self.rank_dense()
        } else {
            self.rank_sparse()
        }
    }

    /// Basis of the right kernel `{x : A x = 0}` as sparse vectors of length `cols`.
    pub fn kernel_basis(&self) -> Vec<SparseColumn> {
        if self.cols() <= DENSE_COLUMN_LIMIT {
            self.kernel_dense()
        } else {
            self.kernel_sparse()
        }
    }

    /// Gauss–Jordan elimination on a dense copy; returns the pivot columns
    /// and the reduced row echelon form.
    fn rref(&self) -> (Vec<usize>, Vec<Vec<u32>>) {
        let f = self.field;
        let mut a = self.to_dense_rows();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols() {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(row, pr);
            let inv = f.inv(a[row][col]);
            for x in a[row].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = a[row].clone();
            for (r, other) in a.iter_mut().enumerate() {
                if r != row && other[col] != 0 {
                    let factor = other[col];
                    for (x, &p) in other.iter_mut().zip(&pivot_row) {
                        if p != 0 {
                            *x = f.sub(*x, f.mul(factor, p));
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, a)
    }

    pub fn rank_dense(&self) -> usize {
        self.rref().0.len()
    }

    pub fn kernel_dense(&self) -> Vec<SparseColumn> {
        let f = self.field;
        let (pivots, a) = self.rref();
        let mut is_pivot = vec![false; self.cols()];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols())
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v: SparseColumn = pivots
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| a[r][free] != 0)
                    .map(|(r, &pc)| (pc, f.neg(a[r][free])))
                    .collect();
                v.push((free, 1));
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect()
    }

    /// Left-to-right column reduction `R = A V`; returns the reduced columns
    /// and the transformation columns.
    fn column_reduce(&self) -> (Vec<SparseColumn>, Vec<SparseColumn>) {
        let f = self.field;
        let mut reduced = self.columns.clone();
        let mut transform: Vec<SparseColumn> = (0..self.cols()).map(|c| vec![(c, 1)]).collect();
        let mut owner: Vec<Option<usize>> = vec![None; self.rows];
        for j in 0..self.cols() {
            while let Some(&(low, val)) = reduced[j].last() {
                let Some(i) = owner[low] else {
                    owner[low] = Some(j);
                    break;
                };
                let piv = reduced[i].last().expect("owner column is non-zero").1;
                let factor = f.neg(f.mul(val, f.inv(piv)));
                reduced[j] = axpy(f, &reduced[j], factor, &reduced[i]);
                transform[j] = axpy(f, &transform[j], factor, &transform[i]);
            }
        }
        (reduced, transform)
    }

    pub fn rank_sparse(&self) -> usize {
        self.column_reduce().0.iter().filter(|c| !c.is_empty()).count()
    }

    pub fn kernel_sparse(&self) -> Vec<SparseColumn> {
        let (reduced, transform) = self.column_reduce();
        reduced
            .iter()
            .zip(transform)
            .filter(|(r, _)| r.is_empty())
            .map(|(_, v)| v)
            .collect()
    }

    /// `A x` for a sparse vector `x`.
    pub fn apply(&self, x: &SparseColumn) -> SparseColumn {
        let mut acc: SparseColumn = Vec::new();
        for &(c, v) in x {
            acc = axpy(self.field, &acc, v, &self.columns[c]);
        }
        acc
    }
}

/// Rank of `m` over `Z/p`.
pub fn rank_mod_p(m: &FieldMatrix) -> usize {
    m.rank()
}
