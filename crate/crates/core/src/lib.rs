//! Exact and Monte Carlo computation of the glow of Hadamard matrices.
//!
//! The glow of `H ∈ M_N(T)` is the law of `Ω = Σ_{ij} a_i b_j H_{ij}` with
//! `a, b` uniform on `T^N` (or on `{±1}^N` for binary matrices). This crate
//! computes its moments exactly through the partition-lattice moment formula,
//! counts the Fourier-matrix integrals `I(π)` exactly, and estimates the same
//! quantities by seeded Monte Carlo.

pub mod binary;
pub mod combinatorics;
pub mod cyclotomic;
pub mod error;
pub mod fourier;
pub mod group;
pub mod matrix;
pub mod mc;
pub mod moments;
pub mod partition;
pub mod polyfit;
pub mod verify;
pub mod walsh;

pub use error::{GlowError, Result};
pub use group::{parse_group, GroupElement, GroupSpec};
pub use matrix::{
    fourier_matrix, load_binary_matrix, sylvester_hadamard, walsh_matrix, BinaryHadamard,
    ComplexMatrix, FourierMatrix,
};
pub use partition::{EvenPartitionSet, KCoefficient, SetPartition};
