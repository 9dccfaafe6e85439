//! Small integer helpers: primality, factorization, valuations, divisor sums.

use rug::ops::Pow;
use rug::{Integer, Rational};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization of an arbitrary-size nonzero integer (absolute value).
pub fn factorize_integer(n: &Integer) -> Vec<(Integer, u32)> {
    let mut n = Integer::from(n.abs_ref());
    let mut out = Vec::new();
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= n {
        if n.is_divisible(&p) {
            let e = n.remove_factor_mut(&p);
            out.push((p.clone(), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let mut sign = 1;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &Integer, p: u64) -> u32 {
    assert!(*n != 0, "valuation of zero");
    let mut n = Integer::from(n.abs_ref());
    n.remove_factor_mut(&Integer::from(p))
}

/// p-adic valuation extended to nonzero rationals: v(a/b) = v(a) - v(b).
pub fn valuation_q(x: &Rational, p: u64) -> i64 {
    valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn prime_support(x: &Rational) -> Vec<u64> {
    let mut ps: Vec<u64> = factorize_integer(x.numer())
        .into_iter()
        .chain(factorize_integer(x.denom()))
        .map(|(p, _)| p.to_u64().expect("prime does not fit in u64"))
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// `p^e` for an integer exponent of either sign, as an exact rational.
pub fn rational_pow(p: u64, e: i64) -> Rational {
    let base = Integer::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from(base)
    } else {
        Rational::from((Integer::from(1), base))
    }
}

/// `x^e` for a rational base and integer exponent.
pub fn rational_powi(x: &Rational, e: i64) -> Rational {
    let mut r = Rational::from(1);
    let mut b = x.clone();
    if e < 0 {
        b = b.recip();
    }
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            r *= &b;
        }
        b = Rational::from(&b * &b);
        k >>= 1;
    }
    r
}

/// Divisor power sum `sum_{d | n} d^k` for an integer exponent of either sign.
pub fn divisor_sigma(n: u64, k: i64) -> Rational {
    divisors(n).into_iter().map(|d| rational_pow(d, k)).sum()
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if *x < 0 {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    let fl = x.clone().floor();
    Rational::from(x - fl)
}

pub fn is_integer(x: &Rational) -> bool {
    *x.denom() == 1
}

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: Integer = num.parse().ok()?;
    let den: Integer = den.parse().ok()?;
    if den == 0 {
        return None;
    }
    Some(Rational::from((num, den)))
}

/// Format as "p/q", or "p" when the denominator is 1.
pub fn format_rational(x: &Rational) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Inverse of a modulo m (m >= 1), assuming gcd(a, m) = 1.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}
