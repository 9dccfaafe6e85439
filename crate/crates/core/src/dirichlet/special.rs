//! Arbitrary-precision real special functions: Gamma, digamma, Euler's constant
//! and the Hurwitz zeta function with its `s`-derivative.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::bernoulli::bernoulli;
use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 50;
pub const MIN_DIGITS: u32 = 30;

/// Working precision in bits for a target number of decimal digits, with guard bits.
pub fn working_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

/// A real number together with the decimal precision it was computed at.
#[derive(Debug, Clone, PartialEq)]
pub struct HpReal {
    pub value: Float,
    pub digits: u32,
}

impl HpReal {
    pub fn new(value: Float, digits: u32) -> Self {
        HpReal { value, digits }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self) -> String {
        format_float(&self.value, self.digits)
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

/// Scientific-notation string with `digits` significant digits.
pub fn format_float(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits as usize))
}

pub fn float(bits: u32, x: impl Into<f64>) -> Float {
    Float::with_val(bits, x.into())
}

pub fn float_q(bits: u32, x: &Rational) -> Float {
    Float::with_val(bits, x)
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

fn is_nonpositive_integer(x: &Float) -> bool {
    x.is_integer() && *x <= 0
}

/// `B_{2k} / (2k)!` as floats, `k = 1..=count`.
fn bernoulli_over_factorial(count: usize, bits: u32) -> Vec<Float> {
    let mut out = Vec::with_capacity(count);
    let mut fact = Integer::from(1);
    for k in 1..=count {
        fact *= (2 * k - 1) as u64;
        fact *= (2 * k) as u64;
        out.push(Float::with_val(bits, &(bernoulli(2 * k) / &fact)));
    }
    out
}

/// Shift so that Stirling-type asymptotics reach `bits` of accuracy.
fn asymptotic_threshold(bits: u32) -> f64 {
    bits as f64 * 0.12 + 10.0
}

/// `Gamma(x)` for real `x`, by Stirling's series with an upward shift and reflection.
pub fn gamma(x: &Float) -> Result<Float> {
    let bits = x.prec();
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("Gamma at {}", x.to_f64())));
    }
    if *x < 0.5 {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let one_minus = Float::with_val(bits, 1 - x);
        let s = Float::with_val(bits, pi(bits) * x).sin();
        return Ok(pi(bits) / (s * gamma(&one_minus)?));
    }
    let target = asymptotic_threshold(bits);
    let mut y = x.clone();
    let mut prod = Float::with_val(bits, 1);
    while y < target {
        prod *= &y;
        y += 1;
    }
    Ok(ln_gamma_asymptotic(&y).exp() / prod)
}

fn ln_gamma_asymptotic(y: &Float) -> Float {
    let bits = y.prec();
    let ln_y = Float::with_val(bits, y.ln_ref());
    let two_pi = Float::with_val(bits, pi(bits) * 2);
    let mut acc = Float::with_val(bits, y - 0.5) * &ln_y - y + two_pi.ln() / 2;
    let y2 = Float::with_val(bits, y * y);
    let mut ypow = y.clone();
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    for k in 1..bits as usize {
        let b = Float::with_val(bits, &bernoulli(2 * k));
        let term = b / (Float::with_val(bits, (2 * k) * (2 * k - 1)) * &ypow);
        acc += &term;
        if term.abs() < eps {
            break;
        }
        ypow *= &y2;
    }
    acc
}

/// Digamma `psi(x) = Gamma'(x)/Gamma(x)`.
pub fn digamma(x: &Float) -> Result<Float> {
    let bits = x.prec();
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("digamma at {}", x.to_f64())));
    }
    if *x < 0.5 {
        // psi(1-x) - psi(x) = pi cot(pi x)
        let one_minus = Float::with_val(bits, 1 - x);
        let c = Float::with_val(bits, pi(bits) * x).cot();
        return Ok(digamma(&one_minus)? - pi(bits) * c);
    }
    let target = asymptotic_threshold(bits);
    let mut y = x.clone();
    let mut shift = Float::with_val(bits, 0);
    while y < target {
        shift += Float::with_val(bits, y.recip_ref());
        y += 1;
    }
    let mut acc = Float::with_val(bits, y.ln_ref()) - Float::with_val(bits, y.recip_ref()) / 2;
    let y2 = Float::with_val(bits, &y * &y);
    let mut ypow = y2.clone();
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    for k in 1..bits as usize {
        let b = Float::with_val(bits, &bernoulli(2 * k));
        let term = b / (Float::with_val(bits, 2 * k) * &ypow);
        acc -= &term;
        if term.abs() < eps {
            break;
        }
        ypow *= &y2;
    }
    Ok(acc - shift)
}

/// Euler's constant as `-psi(1)`.
pub fn euler_gamma(bits: u32) -> Float {
    -digamma(&Float::with_val(bits, 1)).expect("psi(1) is finite")
}

/// `zeta(s, x)` and `d/ds zeta(s, x)` for real `s != 1` and `x > 0`.
///
/// Euler-Maclaurin summation: the first `N` terms directly, the tail by the
/// integral, the half term and Bernoulli corrections, each differentiated in `s`
/// analytically.
pub fn hurwitz_zeta_with_deriv(s: &Float, x: &Float) -> Result<(Float, Float)> {
    let bits = s.prec().max(x.prec());
    if *s == 1 {
        return Err(Error::Pole("Hurwitz zeta at s = 1".into()));
    }
    if *x <= 0 {
        return Err(Error::InvalidArgument("Hurwitz zeta needs x > 0".into()));
    }
    let digits = (bits as f64 / std::f64::consts::LOG2_10) as f64;
    let sf = s.to_f64();
    let n_shift = 15f64.max(2.0 * sf.abs()).max(digits).ceil() as u64;
    let mut val = Float::with_val(bits, 0);
    let mut der = Float::with_val(bits, 0);
    let neg_s = Float::with_val(bits, -s);
    for k in 0..n_shift {
        let a = Float::with_val(bits, x + k);
        let la = a.ln();
        let t = Float::with_val(bits, &neg_s * &la).exp();
        der -= Float::with_val(bits, &la * &t);
        val += t;
    }
    let a = Float::with_val(bits, x + n_shift);
    let la = Float::with_val(bits, a.ln_ref());
    let t = Float::with_val(bits, &neg_s * &la).exp();
    let s_minus_1 = Float::with_val(bits, s - 1);
    let tail = Float::with_val(bits, &t * &a) / &s_minus_1;
    der -= Float::with_val(bits, &la * &tail) + Float::with_val(bits, &tail / &s_minus_1);
    val += &tail;
    val += Float::with_val(bits, &t / 2);
    der -= Float::with_val(bits, &la * &t) / 2;

    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    let a2 = Float::with_val(bits, &a * &a);
    let mut w = Float::with_val(bits, &t / &a);
    let mut poly = s.clone();
    let mut dpoly = Float::with_val(bits, 1);
    let max_terms = (bits as usize).max(40);
    let coeffs = bernoulli_over_factorial(max_terms, bits);
    for (j, c) in coeffs.iter().enumerate() {
        let cw = Float::with_val(bits, c * &w);
        let term = Float::with_val(bits, &cw * &poly);
        let dterm = Float::with_val(bits, &cw * &dpoly) - Float::with_val(bits, &la * &term);
        val += &term;
        der += &dterm;
        if j > 1 && term.abs() < eps && dterm.abs() < eps {
            break;
        }
        // (s)_{2j+1} from (s)_{2j-1}: multiply by (s + 2j - 1)(s + 2j)
        let m = 2 * (j as u64 + 1);
        let f1 = Float::with_val(bits, s + (m - 1));
        let f2 = Float::with_val(bits, s + m);
        let f = Float::with_val(bits, &f1 * &f2);
        let df = f1 + f2;
        dpoly = Float::with_val(bits, &dpoly * &f) + Float::with_val(bits, &poly * &df);
        poly *= f;
        w /= &a2;
    }
    Ok((val, der))
}

pub fn hurwitz_zeta(s: &Float, x: &Float) -> Result<Float> {
    Ok(hurwitz_zeta_with_deriv(s, x)?.0)
}

pub fn hurwitz_zeta_ds(s: &Float, x: &Float) -> Result<Float> {
    Ok(hurwitz_zeta_with_deriv(s, x)?.1)
}

/// `x^y` for positive rational-valued float `x` and real `y`.
pub fn powf(x: &Float, y: &Float) -> Float {
    Float::with_val(x.prec().max(y.prec()), x.pow(y))
}
