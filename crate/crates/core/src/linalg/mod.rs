//! Dense numerical kernels shared by every selection algorithm.

mod eigen;
mod matrix;
mod power;
mod projection;

pub use eigen::{
    eigen_sym, eigenvalues_sym, largest_eigenvalue, symmetric_sqrt, Cholesky, SymmetricEigen,
    MAX_DENSE_EIGEN_DIM, NEGATIVE_EIGEN_TOL, SYMMETRY_TOL,
};
pub use matrix::{axpy, dot, norm_sq, DenseMatrix};
pub use power::{
    apply_normal_operator, dense_power_method, gaussian_unit_vector, power_method,
    principal_right_singular_vector, principal_right_singular_vector_from, EigenPair, PowerMethod,
    DEFAULT_POWER_ITERATIONS, EARLY_STOP_RTOL,
};
pub use projection::{
    project_out_own_row, project_out_row, project_out_row_in_place, DEGENERATE_NORM_SQ,
};
