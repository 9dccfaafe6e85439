use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};

use super::kronecker::kronecker;
use crate::arith::rational_pow;
use crate::error::{Error, Result};

fn cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

/// Bernoulli number `B_k` with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Rational {
    if let Some(b) = cache().read().expect("bernoulli cache").get(k) {
        return b.clone();
    }
    let mut table = cache().write().expect("bernoulli cache");
    while table.len() <= k {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let m = table.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in table.iter().enumerate() {
            if *b != 0 {
                acc += Rational::from(b * &binom);
            }
            binom = binom * (m + 1 - j) as u64 / (j + 1) as u64;
        }
        table.push(-acc / (m as u64 + 1));
    }
    table[k].clone()
}

/// `B_k(x) = sum_j C(k, j) B_j x^{k-j}`.
pub fn bernoulli_poly(k: usize, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    let mut binom = Integer::from(1);
    let mut xp: Vec<Rational> = Vec::with_capacity(k + 1);
    let mut p = Rational::from(1);
    for _ in 0..=k {
        xp.push(p.clone());
        p *= x;
    }
    for j in 0..=k {
        let b = bernoulli(j);
        if b != 0 {
            acc += b * &binom * &xp[k - j];
        }
        binom = binom * (k - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// `B_{k,chi} = |D|^{k-1} sum_{a=1}^{|D|} chi_D(a) B_k(a/|D|)`.
pub fn gen_bernoulli(d: i64, k: usize) -> Rational {
    let m = d.unsigned_abs();
    let mut acc = Rational::new();
    for a in 1..=m {
        let c = kronecker(d, a as i64);
        if c != 0 {
            let b = bernoulli_poly(k, &Rational::from((a, m)));
            if c > 0 {
                acc += b;
            } else {
                acc -= b;
            }
        }
    }
    acc * rational_pow(m, k as i64 - 1)
}

/// `L(chi_D, s)` at a non-positive integer `s = 1 - k`: `-B_{k,chi}/k`.
pub fn l_exact(d: i64, s: i64) -> Result<Rational> {
    if s > 0 {
        return Err(Error::InvalidArgument(format!(
            "exact L-values are only available at non-positive integers, got s = {s}"
        )));
    }
    let k = (1 - s) as usize;
    Ok(-gen_bernoulli(d, k) / k as u64)
}

/// `zeta(s)` at a non-positive integer.
pub fn zeta_exact(s: i64) -> Result<Rational> {
    l_exact(1, s)
}
