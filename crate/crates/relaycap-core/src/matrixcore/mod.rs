//! Small dense linear algebra: log-scaled determinants and cofactors of the
//! structured real matrices, complex matrices for the simulator, and a
//! Jacobi Hermitian eigensolver.

mod complex;
mod eigen;
mod exact;
mod real;

pub use complex::ComplexMatrix;
pub use eigen::{hermitian_eigen, hermitian_eigenvalues};
pub use exact::RationalMatrix;
pub use num_complex::Complex64;
pub use real::{cofactor_scaled, det_scaled, vandermonde_product, RealMatrix, ScaledMatrix};
