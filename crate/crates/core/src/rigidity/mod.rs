//! Rigidity of matrices and functions, with decompositions and certificates
//! as witnesses.

pub mod census;
pub mod certificate;
pub mod depth2;
pub mod function;
pub mod matrix;
pub mod verdict;

pub use census::{rigidity_census, CensusMode, CensusReport};
pub use certificate::{amplify_nonrigidity, NonRigidityCertificate};
pub use depth2::{depth2_from_decomposition, nonrigidity_from_depth2, rank_factor, Depth2Certificate, Depth2Circuit, OutputGate};
pub use function::{tensor_lift, BooleanFunction, TensorLift, ViewFamily};
pub use matrix::{is_block_rigid_matrix, is_matrix_rigid, MatrixDecomposition, RigidityReport, SearchBudget};
pub use verdict::{is_block_rigid_function, is_function_rigid, FunctionBudget, FunctionRigidityReport};
