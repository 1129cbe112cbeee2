//! Numerical building blocks: division algebras, exact signed-permutation
//! matrices, dense linear algebra and seeded sampling.

mod dense;
mod octonion;
mod quaternion;
mod sampling;
mod signed_perm;

pub use dense::{
    angle_between, dot, jacobi_svd, modified_gram_schmidt, norm, normalize, orthonormal_column_basis,
    singular_values, DenseMatrix, Svd,
};
pub use octonion::{left_mult_matrix, left_mult_signed_perm, oct_mul, Octonion};
pub use quaternion::{quat_left_mult_signed_perm, quat_mul, Quaternion};
pub use sampling::{derive_seed, Sampler};
pub use signed_perm::SignedPermMatrix;
