use rug::Rational;

use super::{DivisorTerm, EisensteinSeries, HeegnerIndex, SymbolicValue};
use crate::dirichlet::{l_exact, zeta_exact};
use crate::error::{Error, Result};

impl EisensteinSeries {
    /// `(2 / deg H(beta, m)) * integral of G_{beta,m}`, which equals
    /// `C'/C(beta, -m, 0) + log(4 pi) - Gamma'(1)`.
    pub fn green_integral(&self, h: &HeegnerIndex) -> Result<SymbolicValue> {
        self.check_geometric()?;
        let idx = h.rep_index();
        let disc = self.disc_data(&idx)?;
        let sigma = self.sigma(&idx)?;
        let alphas = sigma
            .logderiv_at_kappa
            .ok_or_else(|| Error::ZeroDenominator(format!("sigma vanishes at kappa for {h}")))?;
        let kappa = self.kappa();
        let d0 = disc.d0;
        let d0_sq = Rational::from(d0 * d0);
        let abs_m = Rational::from(h.m().abs_ref());
        let one = Rational::from(1);

        let mut v: SymbolicValue =
            alphas.iter().map(|(p, a)| SymbolicValue::log(&Rational::from(a * 2u32), &Rational::from(*p))).sum();
        if self.rank() % 2 == 0 {
            let arg = Rational::from(1 - kappa);
            if l_exact(d0, arg.numer().to_i64().expect("small"))? == 0 {
                return Err(Error::ZeroDenominator(format!("L(chi_{d0}, {arg})")));
            }
            let harmonic: Rational = (1..kappa.numer().to_u32().expect("small")).map(|j| Rational::from((1, j))).sum();
            v = v
                + SymbolicValue::l_logderiv(Rational::from(2), d0, arg)
                + SymbolicValue::log(&one, &(abs_m * d0_sq))
                + SymbolicValue::rational(harmonic);
        } else {
            let zarg = Rational::from(2 - Rational::from(kappa * 2u32));
            let larg = Rational::from(Rational::from((3, 2)) - kappa);
            if l_exact(d0, larg.numer().to_i64().expect("small"))? == 0 {
                return Err(Error::ZeroDenominator(format!("L(chi_{d0}, {larg})")));
            }
            if zeta_exact(zarg.numer().to_i64().expect("small"))? == 0 {
                return Err(Error::ZeroDenominator(format!("zeta({zarg})")));
            }
            let top = Rational::from(kappa - Rational::from((1, 2))).numer().to_u32().expect("small");
            let odd_harmonic: Rational = (1..=top).map(|j| Rational::from((2, 2 * j - 1))).sum();
            v = v
                + SymbolicValue::zeta_logderiv(Rational::from(4), zarg)
                + SymbolicValue::l_logderiv(Rational::from(-2), d0, larg)
                + SymbolicValue::log(&one, &(abs_m * 4u32 / d0_sq))
                + SymbolicValue::rational(odd_harmonic);
        }
        Ok(v)
    }

    /// `C'/C(beta, -m, 0)`.
    pub fn coeff_logderiv(&self, h: &HeegnerIndex) -> Result<SymbolicValue> {
        Ok(self.green_integral(h)? - SymbolicValue::log_four_pi_minus_digamma_one())
    }

    /// `(1/B) * integral of log ||F||^2` for the Borcherds product `F` with the given divisor:
    /// `k (log(4 pi) - Gamma'(1)) - 1/4 sum a(beta, m) C'(beta, -m, 0)`.
    pub fn borcherds_integral(&self, divisor: &[DivisorTerm]) -> Result<SymbolicValue> {
        self.check_geometric()?;
        let (terms, _) = self.symmetrize(divisor);
        let k = self.weight_of_divisor(&terms)?;
        let mut v = SymbolicValue::log_four_pi_minus_digamma_one().scale(&k);
        for t in &terms {
            let c = self.coeff_c0(&t.index.rep_index())?;
            if c == 0 {
                return Err(Error::DerivativeUnavailable(t.index.to_string()));
            }
            let c_prime = self.coeff_logderiv(&t.index)?.scale(&c);
            v = v - c_prime.scale(&(Rational::from(&t.a) / 4u32));
        }
        Ok(v)
    }
}
