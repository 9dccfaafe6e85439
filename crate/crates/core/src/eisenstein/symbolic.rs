use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize_integer, format_rational, parse_rational};
use crate::dirichlet::{euler_gamma, format_float, l_logderiv_f, pi, working_bits, HpReal};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstantName {
    EulerGamma,
    LogPi,
}

impl ConstantName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantName::EulerGamma => "euler_gamma",
            ConstantName::LogPi => "log_pi",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "euler_gamma" => Some(ConstantName::EulerGamma),
            "log_pi" => Some(ConstantName::LogPi),
            _ => None,
        }
    }
}

/// The transcendental part of a term; the coefficient lives beside it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Basis {
    One,
    /// `log p` for a prime `p`.
    Log(u64),
    /// `zeta'/zeta(arg)`.
    ZetaLogDeriv(Rational),
    /// `L'/L(chi_{D0}, arg)` with `D0 != 1`.
    LLogDeriv(i64, Rational),
    Constant(ConstantName),
}

/// A term `coeff * basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Rational(Rational),
    LogInt { coeff: Rational, m: u64 },
    ZetaLogDeriv { coeff: Rational, arg: Rational },
    LLogDeriv { coeff: Rational, d0: i64, arg: Rational },
    Constant { coeff: Rational, name: ConstantName },
}

/// A finite rational combination of `1`, `log p`, `zeta'/zeta(s)`,
/// `L'/L(chi_{D0}, s)`, Euler's constant and `log pi`, kept in normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolicValue {
    terms: BTreeMap<Basis, Rational>,
}

impl SymbolicValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: Rational) -> Self {
        let mut v = Self::zero();
        v.push(Basis::One, q);
        v
    }

    /// `coeff * log(x)` for a positive rational `x`, split over primes.
    pub fn log(coeff: &Rational, x: &Rational) -> Self {
        assert!(*x > 0, "log of a non-positive number");
        let mut v = Self::zero();
        for (p, e) in factorize_integer(x.numer()) {
            v.push(Basis::Log(p.to_u64().expect("prime fits")), Rational::from(coeff * e));
        }
        for (p, e) in factorize_integer(x.denom()) {
            v.push(Basis::Log(p.to_u64().expect("prime fits")), -Rational::from(coeff * e));
        }
        v
    }

    pub fn zeta_logderiv(coeff: Rational, arg: Rational) -> Self {
        let mut v = Self::zero();
        v.push(Basis::ZetaLogDeriv(arg), coeff);
        v
    }

    /// `coeff * L'/L(chi_{D0}, arg)`; `D0 = 1` is the zeta function.
    pub fn l_logderiv(coeff: Rational, d0: i64, arg: Rational) -> Self {
        if d0 == 1 {
            return Self::zeta_logderiv(coeff, arg);
        }
        let mut v = Self::zero();
        v.push(Basis::LLogDeriv(d0, arg), coeff);
        v
    }

    pub fn constant(coeff: Rational, name: ConstantName) -> Self {
        let mut v = Self::zero();
        v.push(Basis::Constant(name), coeff);
        v
    }

    /// `log(4 pi) - Gamma'(1) = 2 log 2 + log pi + euler_gamma`.
    pub fn log_four_pi_minus_digamma_one() -> Self {
        Self::log(&Rational::from(2), &Rational::from(2))
            + Self::constant(Rational::from(1), ConstantName::LogPi)
            + Self::constant(Rational::from(1), ConstantName::EulerGamma)
    }

    fn push(&mut self, b: Basis, q: Rational) {
        if q == 0 {
            return;
        }
        let entry = self.terms.entry(b.clone()).or_default();
        *entry += q;
        if *entry == 0 {
            self.terms.remove(&b);
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut v = Self::zero();
        for (b, c) in &self.terms {
            v.push(b.clone(), Rational::from(c * q));
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when no transcendental term is present.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Basis::One).cloned(),
            _ => None,
        }
    }

    pub fn rational_part(&self) -> Rational {
        self.terms.get(&Basis::One).cloned().unwrap_or_default()
    }

    /// Coefficient of `log p`.
    pub fn log_coeff(&self, p: u64) -> Rational {
        self.terms.get(&Basis::Log(p)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(b, c)| {
                let coeff = c.clone();
                match b {
                    Basis::One => Term::Rational(coeff),
                    Basis::Log(m) => Term::LogInt { coeff, m: *m },
                    Basis::ZetaLogDeriv(arg) => Term::ZetaLogDeriv { coeff, arg: arg.clone() },
                    Basis::LLogDeriv(d0, arg) => Term::LLogDeriv { coeff, d0: *d0, arg: arg.clone() },
                    Basis::Constant(name) => Term::Constant { coeff, name: *name },
                }
            })
            .collect()
    }

    pub fn from_terms(terms: &[Term]) -> Self {
        let mut v = Self::zero();
        for t in terms {
            v = v + match t {
                Term::Rational(q) => Self::rational(q.clone()),
                Term::LogInt { coeff, m } => Self::log(coeff, &Rational::from(*m)),
                Term::ZetaLogDeriv { coeff, arg } => Self::zeta_logderiv(coeff.clone(), arg.clone()),
                Term::LLogDeriv { coeff, d0, arg } => Self::l_logderiv(coeff.clone(), *d0, arg.clone()),
                Term::Constant { coeff, name } => Self::constant(coeff.clone(), *name),
            };
        }
        v
    }

    /// Numeric value at `digits` significant digits.
    pub fn evaluate(&self, digits: u32) -> Result<HpReal> {
        let bits = working_bits(digits);
        let mut acc = Float::with_val(bits, 0);
        for (b, c) in &self.terms {
            let x = match b {
                Basis::One => Float::with_val(bits, 1),
                Basis::Log(p) => Float::with_val(bits, *p).ln(),
                Basis::ZetaLogDeriv(arg) => l_logderiv_f(1, &Float::with_val(bits, arg))?,
                Basis::LLogDeriv(d0, arg) => l_logderiv_f(*d0, &Float::with_val(bits, arg))?,
                Basis::Constant(ConstantName::EulerGamma) => euler_gamma(bits),
                Basis::Constant(ConstantName::LogPi) => pi(bits).ln(),
            };
            acc += x * c;
        }
        Ok(HpReal::new(acc, digits))
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms().iter().map(TermJson::from).collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<Self> {
        let parsed: Result<Vec<Term>> = terms.iter().map(Term::try_from).collect();
        Ok(Self::from_terms(&parsed?))
    }
}

impl Add for SymbolicValue {
    type Output = SymbolicValue;
    fn add(mut self, rhs: SymbolicValue) -> SymbolicValue {
        for (b, c) in rhs.terms {
            self.push(b, c);
        }
        self
    }
}

impl Neg for SymbolicValue {
    type Output = SymbolicValue;
    fn neg(self) -> SymbolicValue {
        self.scale(&Rational::from(-1))
    }
}

impl Sub for SymbolicValue {
    type Output = SymbolicValue;
    fn sub(self, rhs: SymbolicValue) -> SymbolicValue {
        self + (-rhs)
    }
}

impl std::iter::Sum for SymbolicValue {
    fn sum<I: Iterator<Item = SymbolicValue>>(iter: I) -> Self {
        iter.fold(SymbolicValue::zero(), Add::add)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Rational(q) => write!(f, "{}", format_rational(q)),
            Term::LogInt { coeff, m } => write!(f, "{}*log({m})", format_rational(coeff)),
            Term::ZetaLogDeriv { coeff, arg } => write!(f, "{}*zeta'/zeta({})", format_rational(coeff), format_rational(arg)),
            Term::LLogDeriv { coeff, d0, arg } => {
                write!(f, "{}*L'/L(chi_{d0}, {})", format_rational(coeff), format_rational(arg))
            }
            Term::Constant { coeff, name } => write!(f, "{}*{}", format_rational(coeff), name.as_str()),
        }
    }
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialized form of a [`Term`]. Fields are in lexicographic order so that the
/// JSON text is stable under generic re-serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(rename = "D0", skip_serializing_if = "Option::is_none", default)]
    pub d0: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub arg: Option<String>,
    pub coeff: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
}

impl From<&Term> for TermJson {
    fn from(t: &Term) -> Self {
        let blank = |kind: &str, coeff: &Rational| TermJson {
            d0: None,
            arg: None,
            coeff: format_rational(coeff),
            kind: kind.to_string(),
            m: None,
            name: None,
        };
        match t {
            Term::Rational(q) => blank("rational", q),
            Term::LogInt { coeff, m } => TermJson { m: Some(*m), ..blank("log_int", coeff) },
            Term::ZetaLogDeriv { coeff, arg } => {
                TermJson { arg: Some(format_rational(arg)), ..blank("zeta_logderiv", coeff) }
            }
            Term::LLogDeriv { coeff, d0, arg } => {
                TermJson { d0: Some(*d0), arg: Some(format_rational(arg)), ..blank("l_logderiv", coeff) }
            }
            Term::Constant { coeff, name } => {
                TermJson { name: Some(name.as_str().to_string()), ..blank("constant", coeff) }
            }
        }
    }
}

impl TryFrom<&TermJson> for Term {
    type Error = Error;
    fn try_from(t: &TermJson) -> Result<Term> {
        let bad = |what: &str| Error::InvalidArgument(format!("term {}: {what}", t.kind));
        let q = |s: &str| parse_rational(s).ok_or_else(|| bad(&format!("malformed rational {s:?}")));
        let coeff = q(&t.coeff)?;
        let arg = || t.arg.as_deref().ok_or_else(|| bad("missing arg")).and_then(q);
        Ok(match t.kind.as_str() {
            "rational" => Term::Rational(coeff),
            "log_int" => Term::LogInt { coeff, m: t.m.filter(|&m| m > 0).ok_or_else(|| bad("missing m"))? },
            "zeta_logderiv" => Term::ZetaLogDeriv { coeff, arg: arg()? },
            "l_logderiv" => Term::LLogDeriv { coeff, d0: t.d0.ok_or_else(|| bad("missing D0"))?, arg: arg()? },
            "constant" => Term::Constant {
                coeff,
                name: t.name.as_deref().and_then(ConstantName::parse).ok_or_else(|| bad("unknown name"))?,
            },
            _ => return Err(bad("unknown kind")),
        })
    }
}

/// Output record for a computed value. Fields are in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueReport {
    pub exact: Option<String>,
    pub formal_mode: bool,
    pub numeric: String,
    pub precision_digits: u32,
    pub symbolic: Vec<TermJson>,
}

impl ValueReport {
    pub fn from_symbolic(v: &SymbolicValue, digits: u32, formal_mode: bool) -> Result<Self> {
        Ok(ValueReport {
            exact: v.as_rational().map(|q| format_rational(&q)),
            formal_mode,
            numeric: v.evaluate(digits)?.to_decimal(),
            precision_digits: digits,
            symbolic: v.to_json_terms(),
        })
    }

    pub fn from_rational(q: &Rational, digits: u32, formal_mode: bool) -> Self {
        let bits = working_bits(digits);
        ValueReport {
            exact: Some(format_rational(q)),
            formal_mode,
            numeric: format_float(&Float::with_val(bits, q), digits),
            precision_digits: digits,
            symbolic: SymbolicValue::rational(q.clone()).to_json_terms(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    fn sample() -> SymbolicValue {
        SymbolicValue::zeta_logderiv(q(4, 1), q(-1, 1))
            + SymbolicValue::l_logderiv(q(-2, 1), -3, q(0, 1))
            + SymbolicValue::rational(q(2, 1))
            + SymbolicValue::log(&q(1, 1), &q(1, 3))
            + SymbolicValue::log_four_pi_minus_digamma_one()
    }

    #[test]
    fn normal_form() {
        let v = SymbolicValue::log(&q(1, 1), &q(12, 5)) + SymbolicValue::log(&q(-1, 1), &q(4, 1));
        assert_eq!(v.log_coeff(2), 0);
        assert_eq!(v.log_coeff(3), 1);
        assert_eq!(v.log_coeff(5), -1);
        assert_eq!(v.terms().len(), 2);
        let w = SymbolicValue::l_logderiv(q(1, 1), 1, q(-1, 1));
        assert_eq!(w, SymbolicValue::zeta_logderiv(q(1, 1), q(-1, 1)));
        assert!((sample() - sample()).is_zero());
        assert_eq!(SymbolicValue::rational(q(3, 2)).as_rational(), Some(q(3, 2)));
        assert_eq!(sample().as_rational(), None);
    }

    #[test]
    fn json_round_trip() {
        let v = sample();
        let report = ValueReport::from_symbolic(&v, 50, true).unwrap();
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: ValueReport = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
        let generic: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&generic).unwrap(), text);
        assert_eq!(SymbolicValue::from_json_terms(&back.symbolic).unwrap(), v);
    }

    #[test]
    fn evaluation_is_precision_stable() {
        let v = sample();
        let a = v.evaluate(50).unwrap();
        let b = v.evaluate(80).unwrap();
        let bits = working_bits(80);
        let diff = Float::with_val(bits, &a.value - &b.value).abs();
        assert!(diff < Float::with_val(bits, 1e-45) * Float::with_val(bits, b.value.abs_ref()));
    }

    #[test]
    fn bad_terms_rejected() {
        let t = TermJson { d0: None, arg: None, coeff: "1".into(), kind: "l_logderiv".into(), m: None, name: None };
        assert!(Term::try_from(&t).is_err());
        let t = TermJson { kind: "nonsense".into(), ..t };
        assert!(Term::try_from(&t).is_err());
    }
}
