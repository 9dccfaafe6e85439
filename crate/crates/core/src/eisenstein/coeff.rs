use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Float, Rational};

use super::{DivisorTerm, EisensteinSeries, HeegnerIndex};
use crate::arith::{format_rational, frac, rational_powi, rational_sqrt};
use crate::dirichlet::{gamma, l_exact, l_with_deriv, pi, zeta_exact};
use crate::error::{Error, Result};
use crate::lattice::DiscElement;
use crate::repnum::RepIndex;

/// One coefficient of `E_0(tau, 0)`: the entry at `e_gamma q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QexpEntry {
    pub gamma: DiscElement,
    pub n: Rational,
    pub coeff: Rational,
}

fn sign_from_exponent(e: &Rational) -> Result<i32> {
    if *e.denom() != 1 {
        return Err(Error::NonRational(format!("sign exponent {}", format_rational(e))));
    }
    Ok(if e.numer().is_even() { 1 } else { -1 })
}

fn exact_sqrt(x: Rational, what: &str) -> Result<Rational> {
    rational_sqrt(&x).ok_or_else(|| Error::NonRational(format!("sqrt({}) in {what}", format_rational(&x))))
}

fn int_of(x: &Rational) -> i64 {
    debug_assert!(*x.denom() == 1);
    x.numer().to_i64().expect("small integer")
}

impl EisensteinSeries {
    /// `deg H(gamma, -n) / B` for `n > 0`, from the sign-resolved closed forms.
    fn ratio_for(&self, idx: &RepIndex) -> Result<Rational> {
        let n = idx.n();
        debug_assert!(*n > 0);
        let disc = self.disc_data(idx)?;
        let sigma = self.sigma(idx)?.value_at_kappa;
        let kappa = self.kappa();
        let delta = Rational::from(disc.delta());
        let abs_d0 = Rational::from(disc.d0.unsigned_abs());
        let order = Rational::from(self.group().order());
        let e = int_of(&Rational::from(kappa * 2u32)) - 2;
        if self.rank() % 2 == 0 {
            // (-1)^{kappa/2 - delta/2} 2 n^{kappa-1} |D0|^{kappa-1/2} / sqrt|L'/L| sigma(kappa) / L(chi, 1 - kappa)
            let sign = sign_from_exponent(&Rational::from(Rational::from(kappa - &delta) / 2u32))?;
            let sq = rational_powi(n, e) * rational_powi(&abs_d0, e + 1) * 4u32 / &order;
            let mag = exact_sqrt(sq, "degree (even rank)")?;
            let l = l_exact(disc.d0, int_of(&Rational::from(1 - kappa)))?;
            if l == 0 {
                return Err(Error::ZeroDenominator(format!("L(chi_{}, {})", disc.d0, format_rational(&Rational::from(1 - kappa)))));
            }
            Ok(mag * sigma / l * sign)
        } else {
            // (-1)^{kappa/2 - 1/4 + delta/2} 2^{2kappa-3/2} n^{kappa-1} |D0|^{1-kappa} / sqrt|L'/L|
            //   * L(chi, 3/2 - kappa) / zeta(2 - 2kappa) * sigma(kappa)
            let ex = Rational::from(kappa / 2u32) - Rational::from((1, 4)) + Rational::from(&delta / 2u32);
            let sign = sign_from_exponent(&ex)?;
            let two = Rational::from(2);
            let sq = rational_powi(&two, 2 * e + 1) * rational_powi(n, e) * rational_powi(&abs_d0, -e) / &order;
            let mag = exact_sqrt(sq, "degree (odd rank)")?;
            let l = l_exact(disc.d0, int_of(&Rational::from(Rational::from((3, 2)) - kappa)))?;
            let z = zeta_exact(-e)?;
            Ok(mag * l / z * sigma * sign)
        }
    }

    /// `C(gamma, n, 0)`: zero for `n < 0`, `-2 deg H(gamma, -n) / B` for `n > 0`.
    pub fn coeff_c0(&self, idx: &RepIndex) -> Result<Rational> {
        match idx.n().cmp0() {
            std::cmp::Ordering::Less => Ok(Rational::new()),
            std::cmp::Ordering::Equal => Err(Error::ZeroIndex),
            std::cmp::Ordering::Greater => Ok(self.ratio_for(idx)? * -2i32),
        }
    }

    /// `deg H(beta, m) / B` where `B` is the volume of the modular variety.
    pub fn degree_ratio(&self, h: &HeegnerIndex) -> Result<Rational> {
        self.check_geometric()?;
        self.ratio_for(&h.rep_index())
    }

    /// `C(gamma, n, s)` at a real `s`, with every factor evaluated numerically.
    pub fn coeff_c_numeric(&self, idx: &RepIndex, s: &Float) -> Result<Float> {
        let bits = s.prec();
        let n = idx.n();
        if *n == 0 {
            return Err(Error::ZeroIndex);
        }
        let positive = *n > 0;
        if !positive && s.is_zero() {
            return Ok(Float::with_val(bits, 0));
        }
        let disc = self.disc_data(idx)?;
        let sigma = self.sigma(idx)?;
        let (bp, bm) = self.lattice().signature();
        let kappa = Float::with_val(bits, self.kappa());
        let delta = Float::with_val(bits, disc.delta());
        let pi = pi(bits);
        let f = |x: f64| Float::with_val(bits, x);
        let ln = |x: u64| Float::with_val(bits, x).ln();
        let pow_u = |b: u64, e: &Float| Float::with_val(bits, e * ln(b)).exp();

        let t = Float::with_val(bits, s * 2u32) + &kappa;
        let abs_n = Float::with_val(bits, n).abs();
        let n_pow = Float::with_val(bits, Float::with_val(bits, &kappa + s) - 1u32);
        let n_pow = Float::with_val(bits, n_pow * abs_n.ln()).exp();
        let pi_pow = Float::with_val(bits, -Float::with_val(bits, s * pi.clone().ln())).exp();
        let sqrt_order = Float::with_val(bits, self.group().order()).sqrt();
        let gamma_den = if positive { gamma(&Float::with_val(bits, s + &kappa))? } else { gamma(s)? };
        let gamma_t = gamma(&t)?;
        let d0 = disc.d0.unsigned_abs();
        let sig = sigma.eval(&t);
        let bmp = f(bm as f64 - bp as f64);

        let value = if self.rank() % 2 == 0 {
            let two = pow_u(2, &Float::with_val(bits, 2 - Float::with_val(bits, s * 2u32)));
            let angle = Float::with_val(bits, s - Float::with_val(bits, &delta / 2u32)) + Float::with_val(bits, &bmp / 4u32);
            let cos = Float::with_val(bits, angle * &pi).cos();
            let dpow = pow_u(d0, &Float::with_val(bits, &t - f(0.5)));
            let (l, _) = l_with_deriv(disc.d0, &Float::with_val(bits, 1 - Float::with_val(bits, &t)))?;
            two * pi_pow * n_pow * cos * dpow * gamma_t / (sqrt_order * gamma_den) * sig / l
        } else {
            let two = pow_u(2, &Float::with_val(bits, Float::with_val(bits, s * 2u32) + Float::with_val(bits, &kappa * 2u32) - f(0.5)));
            let sin = Float::with_val(bits, Float::with_val(bits, &t * &pi).sin());
            let angle = Float::with_val(bits, s - Float::with_val(bits, &delta / 2u32))
                + Float::with_val(bits, Float::with_val(bits, &bmp - 1u32) / 4u32);
            let cos = Float::with_val(bits, angle * &pi).cos();
            let dpow = pow_u(d0, &Float::with_val(bits, 1 - Float::with_val(bits, &t)));
            let (l, _) = l_with_deriv(disc.d0, &Float::with_val(bits, f(1.5) - &t))?;
            let (z, _) = l_with_deriv(1, &Float::with_val(bits, 2 - Float::with_val(bits, &t * 2u32)))?;
            if cos.is_zero() || z.is_zero() {
                return Err(Error::ZeroDenominator("odd-rank coefficient".into()));
            }
            two * pi_pow * n_pow * sin * dpow * gamma_t / (cos * sqrt_order * gamma_den) * l / z * sig
        };
        Ok(value)
    }

    /// Coefficients of `E_0(tau, 0)` for `0 <= n <= max_n`, ordered by `(gamma, n)`.
    pub fn qexp_e0(&self, max_n: &Rational) -> Result<Vec<QexpEntry>> {
        if self.kappa() == &2 && !self.opts.assume_witt {
            return Err(Error::WittAssumptionRequired);
        }
        if self.kappa() == &2 {
            log::warn!("weight 2: the q-expansion may miss a non-holomorphic y^-1 term");
        }
        let mut jobs = Vec::new();
        for g in self.group().elements() {
            let mut n = frac(&Rational::from(-g.q()));
            while n <= *max_n {
                jobs.push((g.clone(), n.clone()));
                n += 1;
            }
        }
        jobs.into_par_iter()
            .map(|(g, n)| {
                let coeff = if n == 0 {
                    Rational::from(if g.is_zero() { 2 } else { 0 })
                } else {
                    self.coeff_c0(&RepIndex::new(g.clone(), n.clone())?)?
                };
                Ok(QexpEntry { gamma: g, n, coeff })
            })
            .collect()
    }

    /// Make a divisor invariant under `beta -> -beta`: missing partners get the
    /// same multiplicity, conflicting pairs are averaged. Returns the warnings issued.
    pub fn symmetrize(&self, divisor: &[DivisorTerm]) -> (Vec<DivisorTerm>, Vec<String>) {
        let mut map: BTreeMap<HeegnerIndex, Rational> = BTreeMap::new();
        for t in divisor {
            *map.entry(t.index.clone()).or_default() += &t.a;
        }
        let mut warnings = Vec::new();
        let mut out: BTreeMap<HeegnerIndex, Rational> = BTreeMap::new();
        for (h, a) in &map {
            let neg = HeegnerIndex { beta: self.group().neg(h.beta()), m: h.m().clone() };
            let a = match map.get(&neg) {
                Some(b) if b == a => a.clone(),
                Some(b) => {
                    let avg = Rational::from(a + b) / 2u32;
                    if h < &neg {
                        warnings.push(format!(
                            "{h} and {neg} have multiplicities {} and {}; both set to {}",
                            format_rational(a),
                            format_rational(b),
                            format_rational(&avg)
                        ));
                    }
                    avg
                }
                None => {
                    warnings.push(format!("added {neg} with multiplicity {} to match {h}", format_rational(a)));
                    out.insert(neg, a.clone());
                    a.clone()
                }
            };
            out.insert(h.clone(), a);
        }
        for w in &warnings {
            log::warn!("{w}");
        }
        let terms = out.into_iter().filter(|(_, a)| *a != 0).map(|(index, a)| DivisorTerm { index, a }).collect();
        (terms, warnings)
    }

    /// Weight `-1/4 sum a(beta, m) C(beta, -m, 0)` of the Borcherds product with the given divisor.
    pub fn weight_of_divisor(&self, divisor: &[DivisorTerm]) -> Result<Rational> {
        self.check_geometric()?;
        let (terms, _) = self.symmetrize(divisor);
        let mut k = Rational::new();
        for t in &terms {
            k += self.coeff_c0(&t.index.rep_index())? * &t.a;
        }
        Ok(k / -4i32)
    }
}
