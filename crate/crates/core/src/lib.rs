//! Eisenstein series coefficients, Heegner divisor degrees and Green's function
//! integrals for even lattices of signature (2,p).
//!
//! The crate is layered bottom-up:
//!
//! * [`lattice`]: even lattices, discriminant groups `L'/L` and built-in examples.
//! * [`repnum`]: representation numbers modulo prime powers and local polynomials.
//! * [`dirichlet`]: Kronecker characters, Bernoulli numbers, exact and numeric L-values.
//! * [`eisenstein`]: generalized divisor sums, coefficients, degrees, weights and integrals.
//! * [`weilrep`]: the Weil representation and Kloosterman sums, used as an independent check.
//! * [`verify`]: compiled-in identity suites for the built-in lattices.

pub mod arith;
pub mod error;
pub mod dirichlet;
pub mod eisenstein;
pub mod lattice;
pub mod repnum;
pub mod verify;
pub mod weilrep;

pub use eisenstein::{DivisorTerm, EisensteinOptions, EisensteinSeries, HeegnerIndex, SigmaValue, SymbolicValue};
pub use error::{Error, Result};
pub use lattice::{builtin_lattice, hyperbolic_sum, BuiltinLattice, DiscElement, DiscGroup, EvenLattice};
