//! Structured backward errors for purely imaginary eigenvalues of even pencils
//! L(z) = M + zN arising from port-Hamiltonian descriptor systems.

pub mod backward;
pub mod linalg;
pub mod mappings;
pub mod model;
pub mod oracle;
pub mod scope;

pub use backward::{
    certify_eigenvalue, eta, eta_block, eta_block_eigenvalue, eta_block_real, eta_even, eta_eigenvalue, eta_symmetry,
    eta_symmetry_eigenvalue, eta_symmetry_real, eta_unstructured, finiteness_check, reconstruct_minimizer,
    residual_closure, BackwardError, BackwardErrorReport, Condition, EigenvalueBackwardError, EigenvalueCertificate,
    ReportValue,
};
pub use mappings::{real_two_sided_minimal_map, skew_hermitian_minimal_map, two_sided_minimal_map, MappingError};
pub use model::{admissible_query, random_pencil, random_pencil_with, EigenPairQuery, GeneratorOptions, ModelError, PerturbationBlocks, StructuredPencil};
pub use oracle::{least_norm_feasible, random_feasible_perturbation, OracleConfig, OracleOutcome};
pub use scope::{Block, BlockSet, Field, PerturbationScope, StructureClass};
