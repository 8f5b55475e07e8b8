//! Exact analysis of tilings of `Z^d` by cosets of full-rank sublattices.
//!
//! * [`lattice`]: Hermite and Smith forms, index, intersection, exponent.
//! * [`coset`]: canonical cosets, membership, intersection, translate test.
//! * [`cyclotomic`]: exact sums of roots of unity with an exact zero test.
//! * [`fourier`]: dual sets, indicator coefficients, translate-pair
//!   extraction for Cartesian tilings.
//! * [`tiling`]: torus and Fourier tiling verifiers, the four-coset
//!   construction in `Z^d` for `d >= 3`, random Cartesian tilings.
//! * [`search`]: exact-cover search for tilings with distinct lattices.
//!
//! No floating point is used in any decision; floats appear only in
//! [`CyclotomicSum::to_complex`] for cross-checking.
//!
//! Data-parallel sweeps run on rayon when the `parallel` feature (default) is
//! enabled; every entry point also accepts [`Execution::Sequential`].

pub mod coset;
pub mod cyclotomic;
pub mod error;
pub mod exec;
pub mod fourier;
pub mod lattice;
pub mod matrix;
pub mod search;
pub mod tiling;

pub use coset::{coset_contains, coset_intersection, is_translate_pair, make_coset, Coset};
pub use cyclotomic::{cyclotomic_polynomial, sum_is_zero, CyclotomicSum};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fourier::{
    coefficient_by_averaging, coset_coefficient, dual_set, mirsky_newman_witness, DualVector,
    Witness,
};
pub use lattice::{
    exponent, hnf, lattice_intersection, lattice_sum, smith_invariants, CartesianLattice, Lattice,
};
pub use matrix::IntMatrix;
pub use search::{
    canonicalize_solution, enumerate_candidate_cosets, search_exotic_tilings, SearchConfig,
    SearchResult,
};
pub use tiling::{
    corrupt_tiling, paper_counterexample, random_cartesian_tiling, verify_tiling,
    verify_tiling_fourier, verify_tiling_torus, CoverageReport, Overlap, TilingInstance,
    TorusOptions,
};
