use std::collections::BTreeMap;

use rug::{Float, Rational};

use super::EisensteinSeries;
use crate::arith::{factorize_integer, is_prime, rational_pow};
use crate::dirichlet::kronecker;
use crate::error::{Error, Result};
use crate::repnum::{local_poly, LocalPolynomial, RepIndex};

/// The factor of `sigma_{gamma,n}` at one prime, evaluated at `s = kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactor {
    pub poly: LocalPolynomial,
    pub chi: i32,
    pub value: Rational,
    /// Coefficient of `log p` in the logarithmic derivative; `None` when the factor vanishes.
    pub alpha: Option<Rational>,
}

/// `sigma_{gamma,n}(s)` at `s = kappa`, with its logarithmic derivative as `sum alpha_p log p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaValue {
    pub value_at_kappa: Rational,
    /// Nonzero `(p, alpha_p)`; `None` when `sigma(kappa) = 0`.
    pub logderiv_at_kappa: Option<Vec<(u64, Rational)>>,
    pub local_factors: BTreeMap<u64, LocalFactor>,
    rank: usize,
}

impl SigmaValue {
    /// `sigma(t)` at a real argument.
    pub fn eval(&self, t: &Float) -> Float {
        let bits = t.prec();
        let mut acc = Float::with_val(bits, 1);
        let half_r = Rational::from((self.rank as i64, 2));
        for (&p, f) in &self.local_factors {
            let lnp = Float::with_val(bits, p).ln();
            let pow = |e: Float| (e * &lnp).exp();
            let x = pow(Float::with_val(bits, 1 - Float::with_val(bits, &half_r)) - t);
            let mut l = Float::with_val(bits, 0);
            for c in f.poly.coeffs.iter().rev() {
                l *= &x;
                l += c;
            }
            let chi = f.chi;
            if self.rank % 2 == 0 {
                let den = 1 - chi * pow(Float::with_val(bits, -t));
                acc *= l / den;
            } else {
                let num = 1 - chi * pow(Float::with_val(bits, 0.5 - Float::with_val(bits, t)));
                let den = 1 - pow(Float::with_val(bits, 1 - Float::with_val(bits, t * 2u32)));
                acc *= l * num / den;
            }
        }
        acc
    }
}

impl EisensteinSeries {
    /// Primes dividing `2 d_gamma^2 n det(L)`.
    pub fn sigma_primes(&self, idx: &RepIndex) -> Vec<u64> {
        let level = idx.gamma().level();
        let x = Rational::from(idx.n() * (2 * level * level)) * self.lattice().det();
        debug_assert!(*x.denom() == 1);
        factorize_integer(x.numer())
            .into_iter()
            .map(|(p, _)| p.to_u64().expect("prime fits in u64"))
            .collect()
    }

    pub fn sigma(&self, idx: &RepIndex) -> Result<SigmaValue> {
        self.sigma_with_primes(idx, &[])
    }

    /// `sigma` with the product taken over additional primes as well.
    pub fn sigma_with_primes(&self, idx: &RepIndex, extra: &[u64]) -> Result<SigmaValue> {
        let disc = self.disc_data(idx)?;
        let mut primes = self.sigma_primes(idx);
        for &p in extra {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            primes.push(p);
        }
        primes.sort_unstable();
        primes.dedup();

        let r = self.rank() as i64;
        let kappa = self.kappa();
        // X = p^{1 - r/2 - kappa}; the exponent is an integer
        let ex = Rational::from(1 - Rational::from((r, 2)) - kappa);
        if *ex.denom() != 1 {
            return Err(Error::NonRational(format!("exponent {ex} of the local variable")));
        }
        let ex = ex.numer().to_i64().expect("small exponent");

        let mut factors = BTreeMap::new();
        let mut value = Rational::from(1);
        for p in primes {
            let poly = local_poly(self.group(), idx, p, self.opts.count)?;
            let chi = kronecker(disc.d0, p as i64);
            let x = rational_pow(p, ex);
            let l = poly.eval(&x);
            let (extra_value, extra_alpha) = if r % 2 == 0 {
                // 1 / (1 - chi p^{-kappa})
                let k = kappa.numer().to_i64().expect("integral weight");
                let t = rational_pow(p, -k) * chi;
                let den = Rational::from(1 - &t);
                (den.clone().recip(), -(t / den))
            } else {
                // (1 - chi p^{1/2 - s}) / (1 - p^{1 - 2s})
                let h = Rational::from(Rational::from((1, 2)) - kappa).numer().to_i64().expect("half weight");
                let u = rational_pow(p, h) * chi;
                let v = rational_pow(p, 2 * h);
                let num = Rational::from(1 - &u);
                let den = Rational::from(1 - &v);
                let alpha = Rational::from(&u / &num) - Rational::from(&v / &den) * 2u32;
                (num / den, alpha)
            };
            let alpha = (l != 0).then(|| extra_alpha - poly.eval_x_deriv(&x) / &l);
            let fv = l * extra_value;
            value *= &fv;
            factors.insert(p, LocalFactor { poly, chi, value: fv, alpha });
        }
        let logderiv_at_kappa = (value != 0).then(|| {
            factors
                .iter()
                .filter_map(|(&p, f)| {
                    let a = f.alpha.clone().expect("nonvanishing factor");
                    (a != 0).then_some((p, a))
                })
                .collect()
        });
        Ok(SigmaValue { value_at_kappa: value, logderiv_at_kappa, local_factors: factors, rank: self.rank() })
    }
}
