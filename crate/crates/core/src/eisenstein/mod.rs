//! The Eisenstein series `E_0(tau, s)` attached to an even lattice, and the
//! quantities read off from its coefficients at `s = 0`: Heegner divisor degrees,
//! weights of Borcherds products and integrals of Green's functions.
//!
//! The weight is `kappa = 2 + (b- - b+)/2`, which is `1 + p/2` in signature
//! `(2,p)` and is unchanged under adding hyperbolic planes. Weight `3/2` is the
//! formal case and must be enabled explicitly; weight 2 needs the Witt-index
//! acknowledgment before any geometric quantity is produced.

mod coeff;
mod integral;
mod sigma;
mod symbolic;

use std::fmt;

use rug::{Integer, Rational};

use crate::arith::format_rational;
use crate::dirichlet::{fundamental_decomposition, Discriminant};
use crate::error::{Error, Result};
use crate::lattice::{DiscElement, DiscGroup, EvenLattice};
use crate::repnum::{CountOptions, RepIndex};

pub use coeff::QexpEntry;
pub use sigma::{LocalFactor, SigmaValue};
pub use symbolic::{ConstantName, SymbolicValue, Term, TermJson, ValueReport};

#[derive(Debug, Clone, Copy, Default)]
pub struct EisensteinOptions {
    /// Accept weight `3/2`.
    pub formal: bool,
    /// Assert that the rational quadratic space has Witt index 1 (needed at weight 2).
    pub assume_witt: bool,
    pub count: CountOptions,
}

/// A lattice prepared for Eisenstein-series computations.
#[derive(Debug, Clone)]
pub struct EisensteinSeries {
    group: DiscGroup,
    kappa: Rational,
    opts: EisensteinOptions,
}

/// `(beta, m)` with `m < 0` and `m - q(beta)` integral, naming `H(beta, m)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HeegnerIndex {
    beta: DiscElement,
    m: Rational,
}

impl HeegnerIndex {
    pub fn new(beta: DiscElement, m: Rational) -> Result<Self> {
        if m >= 0 {
            return Err(Error::NonNegativeHeegner(format_rational(&m)));
        }
        if *Rational::from(&m - beta.q()).denom() != 1 {
            return Err(Error::IndexMismatch { n: format_rational(&m), q: format_rational(beta.q()) });
        }
        Ok(HeegnerIndex { beta, m })
    }

    pub fn beta(&self) -> &DiscElement {
        &self.beta
    }

    pub fn m(&self) -> &Rational {
        &self.m
    }

    /// The coefficient index `n = -m > 0`.
    pub fn rep_index(&self) -> RepIndex {
        RepIndex::new(self.beta.clone(), Rational::from(-&self.m)).expect("m - q(beta) is integral")
    }
}

impl fmt::Display for HeegnerIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({}, {})", self.beta, format_rational(&self.m))
    }
}

/// One summand `a(beta, m) H(beta, m)` of a divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTerm {
    pub index: HeegnerIndex,
    pub a: Rational,
}

impl EisensteinSeries {
    pub fn new(lattice: &EvenLattice, opts: EisensteinOptions) -> Result<Self> {
        let (bp, bm) = lattice.signature();
        let kappa = Rational::from((4 + bm as i64 - bp as i64, 2));
        if kappa < Rational::from((3, 2)) {
            return Err(Error::UnsupportedSignature {
                b_plus: bp,
                b_minus: bm,
                reason: format!("weight {} is below 3/2", format_rational(&kappa)),
            });
        }
        if kappa == Rational::from((3, 2)) && !opts.formal {
            return Err(Error::FormalModeRequired);
        }
        Ok(EisensteinSeries { group: lattice.discriminant_group(), kappa, opts })
    }

    pub fn group(&self) -> &DiscGroup {
        &self.group
    }

    pub fn lattice(&self) -> &EvenLattice {
        self.group.lattice()
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn options(&self) -> &EisensteinOptions {
        &self.opts
    }

    pub fn is_formal(&self) -> bool {
        self.kappa == Rational::from((3, 2))
    }

    fn rank(&self) -> usize {
        self.lattice().rank()
    }

    fn check_geometric(&self) -> Result<()> {
        if self.kappa == 2 && !self.opts.assume_witt {
            return Err(Error::WittAssumptionRequired);
        }
        Ok(())
    }

    /// `b+ - b- mod 4`.
    fn signature_class(&self) -> i64 {
        let (bp, bm) = self.lattice().signature();
        (bp as i64 - bm as i64).rem_euclid(4)
    }

    /// The discriminant `D = D0 f^2` attached to `(gamma, n)`, with the sign of
    /// `D0` checked against the signature table.
    pub fn disc_data(&self, idx: &RepIndex) -> Result<Discriminant> {
        let n = idx.n();
        if *n == 0 {
            return Err(Error::ZeroIndex);
        }
        let r = self.rank();
        let det = self.lattice().det();
        let d = if r % 2 == 0 {
            let sign = if (r / 2) % 2 == 0 { 1 } else { -1 };
            Rational::from(det * Integer::from(sign))
        } else {
            let sign = if ((r + 1) / 2) % 2 == 0 { 2 } else { -2 };
            let level = Integer::from(idx.gamma().level());
            Rational::from(n * Integer::from(&level * &level)) * det * Integer::from(sign)
        };
        if *d.denom() != 1 {
            return Err(Error::NotDiscriminant(format_rational(&d)));
        }
        let d = d
            .numer()
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument(format!("discriminant {d} does not fit in 64 bits")))?;
        let disc = fundamental_decomposition(d)?;
        let positive = match (self.signature_class(), *n > 0) {
            (0, _) => true,
            (2, _) => false,
            (1, pos) => !pos,
            (_, pos) => pos,
        };
        if (disc.d0 > 0) != positive {
            return Err(Error::Inconsistent(format!(
                "D0 = {} has the wrong sign for b+ - b- = {} mod 4 and n = {}",
                disc.d0,
                self.signature_class(),
                format_rational(n)
            )));
        }
        Ok(disc)
    }

    /// The Heegner index `(beta, m)` from canonical coordinates.
    pub fn heegner_index(&self, coords: &[u64], m: Rational) -> Result<HeegnerIndex> {
        HeegnerIndex::new(self.group.element(coords)?, m)
    }

    pub fn rep_index(&self, coords: &[u64], n: Rational) -> Result<RepIndex> {
        RepIndex::new(self.group.element(coords)?, n)
    }
}
