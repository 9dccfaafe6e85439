//! Quadratic characters and their L-functions.
//!
//! Exact values at non-positive integers come from generalized Bernoulli
//! numbers; values and derivatives at real arguments come from the Hurwitz zeta
//! function, with the functional equation available as an independent route.

mod bernoulli;
mod kronecker;
mod lfunc;
mod special;

pub use bernoulli::{bernoulli, bernoulli_poly, gen_bernoulli, l_exact, zeta_exact};
pub use kronecker::{fundamental_decomposition, is_discriminant, is_fundamental, kronecker, Discriminant};
pub use lfunc::{
    l_deriv, l_functional_equation, l_logderiv, l_logderiv_f, l_numeric, l_with_deriv, zeta_logderiv,
};
pub use special::{
    digamma, euler_gamma, float, float_q, format_float, gamma, hurwitz_zeta, hurwitz_zeta_ds,
    hurwitz_zeta_with_deriv, pi, powf, working_bits, HpReal, DEFAULT_DIGITS, MIN_DIGITS,
};
