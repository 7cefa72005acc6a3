//! Rank invariants of multi-filtered simplicial complexes.
//!
//! A [`MultiFilteredComplex`] carries a finite simplicial complex together
//! with an `n`-component function on its vertices, extended to simplices by
//! the componentwise maximum. From it the crate computes:
//!
//! * the rank invariant `ρ(u, v)` of the inclusion of sublevel sets, by exact
//!   linear algebra over `Z/p` ([`rank_invariant`], [`homology`]);
//! * one-dimensional persistence diagrams via column reduction
//!   ([`persistence`]);
//! * restrictions of the multidimensional invariant to the half-planes of
//!   the admissible-pair foliation ([`foliation`]);
//! * the matching (bottleneck) distance between diagrams and the sampled
//!   multidimensional matching distance ([`matching`]).
//!
//! Batch workloads (rank grids, leaves, random trials) run on rayon when the
//! `parallel` feature is on, and sequentially otherwise. See [`Execution`].
//!
//! ```
//! use mdrank::{complex::{build_complex, Simplex}, persistence};
//!
//! let path = build_complex(
//!     1,
//!     &[vec![0.0], vec![1.0], vec![2.0]],
//!     &[Simplex::new(vec![0, 2]).unwrap(), Simplex::new(vec![1, 2]).unwrap()],
//! )
//! .unwrap();
//! let filtration = persistence::ScalarFiltration::from_complex(&path).unwrap();
//! let d0 = persistence::diagram(&filtration, 0, 2).unwrap();
//! assert_eq!(d0.total_multiplicity(), 2);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod error;
pub mod field;
pub mod foliation;
pub mod homology;
pub mod io;
pub mod matching;
pub mod par;
pub mod persistence;
pub mod random;
pub mod rank_invariant;

pub use complex::{MultiFilteredComplex, Simplex};
pub use error::{Error, Result};
pub use foliation::AdmissiblePair;
pub use matching::{ExtendedCost, MatchingResult};
pub use par::Execution;
pub use persistence::{Cornerpoint, Death, PersistenceDiagram};
pub use rank_invariant::{DeltaPlusPoint, RankGrid};

/// Default coefficient field `Z/2`.
pub const DEFAULT_PRIME: u32 = 2;
