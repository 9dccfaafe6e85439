//! Named example lattices.

use std::fmt;
use std::str::FromStr;

use super::EvenLattice;
use crate::arith::is_prime;
use crate::error::{Error, Result};

/// A named lattice, selectable as `name` or `name:param`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinLattice {
    /// `Z(2) + II_{1,1}`, signature (2,1).
    Sl2,
    /// `Z^5` with `q(x) = x1 x2 + x3 x4 - x5^2`, signature (2,3).
    Siegel,
    /// Trace-form lattice of 2x2 matrices over a real quadratic field of prime discriminant.
    Hilbert(u64),
    /// `L + U` with `U` the hyperbolic plane.
    HyperbolicSum(Box<BuiltinLattice>),
}

impl BuiltinLattice {
    pub fn lattice(&self) -> EvenLattice {
        let gram = match self {
            BuiltinLattice::Sl2 => vec![vec![2, 0, 0], vec![0, 0, 1], vec![0, 1, 0]],
            BuiltinLattice::Siegel => vec![
                vec![0, 1, 0, 0, 0],
                vec![1, 0, 0, 0, 0],
                vec![0, 0, 0, 1, 0],
                vec![0, 0, 1, 0, 0],
                vec![0, 0, 0, 0, -2],
            ],
            BuiltinLattice::Hilbert(d) => {
                let d = *d as i64;
                vec![
                    vec![0, -1, 0, 0],
                    vec![-1, 0, 0, 0],
                    vec![0, 0, 2, d],
                    vec![0, 0, d, (d * d - d) / 2],
                ]
            }
            BuiltinLattice::HyperbolicSum(inner) => return hyperbolic_sum(&inner.lattice()),
        };
        EvenLattice::with_name(Some(self.to_string()), gram).expect("built-in Gram matrix is valid")
    }

    /// Whether the rational quadratic space is known to have Witt index 1,
    /// which is what the weight-2 case needs.
    pub fn witt_index_one(&self) -> bool {
        matches!(self, BuiltinLattice::Hilbert(_))
    }

    /// Whether this is the signature (2,1) example that only runs in formal mode.
    pub fn is_sl2(&self) -> bool {
        matches!(self, BuiltinLattice::Sl2)
    }
}

impl fmt::Display for BuiltinLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinLattice::Sl2 => write!(f, "sl2"),
            BuiltinLattice::Siegel => write!(f, "siegel"),
            BuiltinLattice::Hilbert(d) => write!(f, "hilbert:{d}"),
            BuiltinLattice::HyperbolicSum(inner) => write!(f, "hyperbolic_sum:{inner}"),
        }
    }
}

impl FromStr for BuiltinLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (s.trim(), None),
        };
        match (name, param) {
            ("sl2", None) => Ok(BuiltinLattice::Sl2),
            ("siegel", None) => Ok(BuiltinLattice::Siegel),
            ("hilbert", Some(p)) => {
                let d: u64 = p
                    .parse()
                    .map_err(|_| Error::Builtin(format!("hilbert needs a positive integer D, got '{p}'")))?;
                if !is_prime(d) || d % 4 != 1 {
                    return Err(Error::Builtin(format!(
                        "hilbert:{d}: D must be a prime fundamental discriminant (a prime D = 1 mod 4)"
                    )));
                }
                Ok(BuiltinLattice::Hilbert(d))
            }
            ("hilbert", None) => Err(Error::Builtin("hilbert needs a parameter, e.g. hilbert:5".into())),
            ("hyperbolic_sum", Some(inner)) => {
                Ok(BuiltinLattice::HyperbolicSum(Box::new(inner.parse()?)))
            }
            ("hyperbolic_sum", None) => Err(Error::Builtin(
                "hyperbolic_sum needs an inner lattice, e.g. hyperbolic_sum:siegel".into(),
            )),
            _ => Err(Error::Builtin(s.to_string())),
        }
    }
}

/// Parse and construct a built-in lattice from `name[:param]`.
pub fn builtin_lattice(spec: &str) -> Result<EvenLattice> {
    Ok(spec.parse::<BuiltinLattice>()?.lattice())
}

/// `L + U` where `U` has Gram matrix `[[0,1],[1,0]]`.
pub fn hyperbolic_sum(l: &EvenLattice) -> EvenLattice {
    let r = l.rank();
    let mut gram = vec![vec![0i64; r + 2]; r + 2];
    for (i, row) in l.gram().iter().enumerate() {
        gram[i][..r].copy_from_slice(row);
    }
    gram[r][r + 1] = 1;
    gram[r + 1][r] = 1;
    let name = l.name().map(|n| format!("{n}+U"));
    EvenLattice::with_name(name, gram).expect("orthogonal sum with U is valid")
}
