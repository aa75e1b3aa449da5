//! Linear-entropy (Tsallis-2) inequalities for bipartite quantum states.
//!
//! The crate measures the entropy point `(S_L(ρ_A), S_L(ρ_B), S_L(ρ_AB))` of a dense density
//! matrix and evaluates the dimension-dependent bounds on it: subadditivity and Araki–Lieb,
//! inhomogeneous subadditivity (ISA), dimensionally sharp subadditivity (DSSA), their sharp
//! combination, its Rényi-2 and purity forms, and the lower bounds obtained by purification.
//! Extremal state families attain the sharp bound, and the [`verify`] module checks all of it
//! on random states.

pub mod bloch;
pub mod bounds;
pub mod cli;
pub mod density;
pub mod eigen;
pub mod error;
pub mod extremal;
pub mod matrix;
pub mod report;
pub mod schmidt;
pub mod state_io;
pub mod verify;

pub use bloch::{
    adapted_basis, bloch_vector, check_operator_bound, correlation_tensor, gellmann_basis,
    purity_from_bloch, tensor_qnorms, BlochVector, CorrelationTensor, OperatorBasis,
    OperatorBoundVerdict,
};
pub use bounds::{Branch, DimPair};
pub use density::{validate_density, DensityMatrix, Tolerances, ValidationReport};
pub use eigen::{eig_hermitian, SpectralDecomposition};
pub use error::{Error, Result};
pub use extremal::{boundary_state_for, dssa_family, isa_family, mix_with_maximally_mixed, Family};
pub use matrix::{ComplexMatrix, C64};
pub use report::{evaluate_all, evaluate_point, BoundRecord, BoundReport, EntropyPoint};
pub use schmidt::{schmidt_decompose, SchmidtDecomposition};
