//! Exact linear algebra over the integers and rationals.

pub mod matrix;
pub mod normal_form;
pub mod poly;
pub mod symplectic;

pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use normal_form::{integer_kernel, smith_normal_form, IntegerKernel, SmithForm};
pub use poly::{IntPolynomial, Polynomial, RatPolynomial};
pub use symplectic::{standard_form, standard_symplectic, symplectic_normalize, SymplecticNormalForm};
