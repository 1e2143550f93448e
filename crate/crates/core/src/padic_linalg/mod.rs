//! Exact linear algebra over `Z/p^N`: canonical (Howell) forms, kernels and
//! the subquotients that compute cohomology of complexes of free modules.

mod divisors;
mod howell;
mod matrix;
mod zpn;

pub use divisors::{cokernel_divisors, complex_cohomology, smith_valuations, subquotient, subquotient_with, ElementaryDivisors};
pub use howell::{howell_form, howell_form_with, kernel, kernel_with, solve_left, HowellBasis, LinalgConfig};
pub use matrix::Matrix;
pub use zpn::{binomial, factorial_valuation, is_prime, Zpn};
