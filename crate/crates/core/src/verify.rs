//! Identity suites for the built-in lattices, compiled into the library so they
//! run offline. Each check is evaluated independently; an error inside a check
//! is reported as a failure of that check.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Rational};

use crate::arith::{divisor_sigma, divisors, factorize, format_rational, mobius};
use crate::dirichlet::{kronecker, l_exact, l_logderiv, working_bits, zeta_exact, zeta_logderiv};
use crate::eisenstein::{DivisorTerm, EisensteinOptions, EisensteinSeries, HeegnerIndex, SymbolicValue};
use crate::error::{Error, Result};
use crate::lattice::{BuiltinLattice, EvenLattice};
use crate::repnum::CountOptions;
use crate::weilrep::WeilRep;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub lattice: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

fn check(out: &mut Vec<Check>, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    out.push(Check { name: name.into(), passed, detail });
}

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn series(l: &EvenLattice, count: CountOptions) -> Result<EisensteinSeries> {
    EisensteinSeries::new(l, EisensteinOptions { formal: true, assume_witt: true, count })
}

/// Run the suite for a built-in lattice.
pub fn run_suite(builtin: &BuiltinLattice, digits: u32, count: CountOptions) -> Result<SuiteReport> {
    let lattice = builtin.lattice();
    let e = series(&lattice, count)?;
    let checks = match builtin {
        BuiltinLattice::Sl2 => sl2_suite(&e, digits),
        BuiltinLattice::Siegel => siegel_suite(&e),
        BuiltinLattice::Hilbert(d) => hilbert_suite(&e, *d),
        BuiltinLattice::HyperbolicSum(inner) => genus_suite(&series(&inner.lattice(), count)?, &e),
    };
    Ok(SuiteReport { lattice: builtin.to_string(), checks })
}

fn weil_checks(out: &mut Vec<Check>, l: &EvenLattice, digits: u32) {
    check(out, "weil relations", || {
        let w = WeilRep::new(l, digits)?;
        let s = w.rho_s();
        let st = s.mul(&w.rho_t());
        let z = w.rho_z();
        let d1 = s.mul(&s).max_diff(&z);
        let d2 = st.mul(&st).mul(&st).max_diff(&z);
        let u = s.unitarity_defect().max(w.rho_t().unitarity_defect());
        let worst = d1.max(d2).max(u);
        Ok((worst < 1e-20, format!("S^2 = (ST)^3 = Z and unitarity, max defect {worst:.3e}")))
    });
}

fn kloosterman_checks(out: &mut Vec<Check>, l: &EvenLattice, digits: u32, count: CountOptions) {
    check(out, "kloosterman oracle", || {
        let w = WeilRep::new(l, digits)?;
        let zero = w.group().zero();
        let mut worst = 0f64;
        let mut cases = 0;
        for g in w.elements() {
            let n = Rational::from(crate::arith::frac(&Rational::from(-g.q())) + 1u32);
            let idx = crate::repnum::RepIndex::new(g.clone(), n.clone())?;
            for c in (-8i64..=8).filter(|&c| c != 0) {
                let bf = w.kloosterman_bruteforce(&zero, &Rational::new(), g, &n, c)?;
                let cl = w.kloosterman_closed(&idx, c, count)?;
                let d = (bf - crate::weilrep::Complex::real(cl)).norm().to_f64();
                worst = worst.max(d);
                cases += 1;
            }
        }
        Ok((worst < 1e-20, format!("{cases} sums with |c| <= 8, max difference {worst:.3e}")))
    });
}

fn sl2_suite(e: &EisensteinSeries, digits: u32) -> Vec<Check> {
    let mut out = Vec::new();
    check(&mut out, "degree H(1,-3/4)", || {
        let h = e.heegner_index(&[1], q(-3, 4))?;
        let ratio = e.degree_ratio(&h)?;
        let c = e.coeff_c0(&h.rep_index())?;
        Ok((ratio == 4 && c == -8, format!("deg/B = {}, C = {}", format_rational(&ratio), format_rational(&c))))
    });
    check(&mut out, "integral terms", || {
        let v = e.green_integral(&e.heegner_index(&[1], q(-3, 4))?)?;
        let want = SymbolicValue::zeta_logderiv(q(4, 1), q(-1, 1))
            + SymbolicValue::l_logderiv(q(-2, 1), -3, q(0, 1))
            + SymbolicValue::rational(q(2, 1))
            + SymbolicValue::log(&q(1, 1), &q(1, 3));
        Ok((v == want, v.to_string()))
    });
    check(&mut out, "integral identity", || {
        let v = e.green_integral(&e.heegner_index(&[1], q(-3, 4))?)?;
        let got = v.evaluate(digits)?.value;
        let bits = working_bits(digits);
        let zeta = Float::with_val(bits, &zeta_logderiv(&q(-1, 1), digits)?.value);
        let l = Float::with_val(bits, &l_logderiv(-3, &q(0, 1), digits)?.value);
        let want = (zeta * 2u32 + 1u32 - l - Float::with_val(bits, 3).ln() / 2u32) * 2u32;
        let rel = Float::with_val(bits, &got - &want).abs() / want.abs();
        let rel = rel.to_f64();
        Ok((rel <= 1e-30, format!("relative difference {rel:.3e} at {digits} digits")))
    });
    weil_checks(&mut out, e.lattice(), digits);
    kloosterman_checks(&mut out, e.lattice(), digits, e.options().count);
    out
}

/// `sum_{d | f} mu(d) chi_{D0}(d) d^{1/2 - s} sigma_{2-2s}(f/d)` at `s = 5/2`.
fn siegel_sigma_closed(d0: i64, f: u64) -> Rational {
    divisors(f)
        .into_iter()
        .map(|d| {
            let inner = divisor_sigma(f / d, -3);
            Rational::from((mobius(d) * kronecker(d0, d as i64) as i64, d * d)) * inner
        })
        .sum()
}

/// Cohen's `H(2, N) = L(chi_{D0}, -1) sum_{d | f} mu(d) chi_{D0}(d) d sigma_3(f/d)`.
fn cohen(n: i64) -> Result<Rational> {
    let disc = crate::dirichlet::fundamental_decomposition(n)?;
    let f = disc.f as u64;
    let sum: Rational = divisors(f)
        .into_iter()
        .map(|d| divisor_sigma(f / d, 3) * (mobius(d) * kronecker(disc.d0, d as i64) as i64 * d as i64))
        .sum();
    Ok(l_exact(disc.d0, -1)? * sum)
}

fn siegel_suite(e: &EisensteinSeries) -> Vec<Check> {
    let mut out = Vec::new();
    let coords = |d: i64| if d % 4 == 0 { [0u64] } else { [1u64] };
    let b = || -> Result<Rational> { Ok(-(zeta_exact(-1)? * zeta_exact(-3)?)) };
    for d in [5i64, 8, 13] {
        check(&mut out, format!("integral D={d}"), || {
            let v = e.green_integral(&e.heegner_index(&coords(d), q(-d, 4))?)?;
            let want = SymbolicValue::zeta_logderiv(q(4, 1), q(-3, 1))
                + SymbolicValue::l_logderiv(q(-2, 1), d, q(-1, 1))
                + SymbolicValue::rational(q(8, 3))
                + SymbolicValue::log(&q(-1, 1), &q(d, 1));
            Ok((v == want, v.to_string()))
        });
        check(&mut out, format!("sigma D={d}"), || {
            let s = e.sigma(&e.rep_index(&coords(d), q(d, 4))?)?;
            let ok = s.value_at_kappa == 1 && s.logderiv_at_kappa == Some(vec![]);
            Ok((ok, format!("sigma(5/2) = {}", format_rational(&s.value_at_kappa))))
        });
        check(&mut out, format!("humbert degree D={d}"), || {
            // the Humbert surface H(D) is half of H(beta, -D/4)
            let ratio = e.degree_ratio(&e.heegner_index(&coords(d), q(-d, 4))?)?;
            let deg = ratio * b()? / 2u32;
            let want = zeta_exact(-1)? * l_exact(d, -1)? / 2u32;
            let ok = deg == want && (d != 5 || deg == q(1, 60));
            Ok((ok, format!("deg H({d}) = {}", format_rational(&deg))))
        });
    }
    check(&mut out, "sigma D=45", || {
        let s = e.sigma(&e.rep_index(&[1], q(45, 4))?)?;
        let want = siegel_sigma_closed(5, 3);
        Ok((s.value_at_kappa == want, format!("sigma(5/2) = {}", format_rational(&s.value_at_kappa))))
    });
    check(&mut out, "cohen coefficients", || {
        let mut bad = Vec::new();
        for n in (1..=16i64).filter(|n| n % 4 == 0 || n % 4 == 1) {
            let c = e.coeff_c0(&e.rep_index(&coords(n), q(n, 4))?)?;
            if c / 2u32 != cohen(n)? / zeta_exact(-3)? {
                bad.push(n);
            }
        }
        Ok((bad.is_empty(), format!("C/2 = H(2,N)/zeta(-3) for N <= 16, mismatches {bad:?}")))
    });
    check(&mut out, "plus space", || {
        let table = e.qexp_e0(&q(6, 1))?;
        let ok = table.iter().all(|t| {
            let four_n = Rational::from(&t.n * 4u32);
            let r = four_n.numer().mod_u(4);
            four_n.denom() == &1 && (t.n == 0 || ((r == 0 || r == 1) && t.coeff < 0))
        });
        Ok((ok, format!("{} coefficients with 4n = 0,1 mod 4 and C < 0 for n > 0", table.len())))
    });
    weil_checks(&mut out, e.lattice(), 30);
    out
}

/// `S(M)`: 1 if `D | M`, else 1/2.
pub fn hilbert_s(d: u64, m: u64) -> Rational {
    if m % d == 0 {
        q(1, 1)
    } else {
        q(1, 2)
    }
}

/// The Heegner index `(beta, -M/D)` underlying `T(M)`, or `None` if no `beta` fits.
pub fn hilbert_index(e: &EisensteinSeries, d: u64, m: u64) -> Result<Option<HeegnerIndex>> {
    let mm = q(-(m as i64), d as i64);
    for g in e.group().elements() {
        if Rational::from(&mm - g.q()).denom() == &1 {
            return HeegnerIndex::new(g, mm).map(Some);
        }
    }
    Ok(None)
}

/// `deg T(M) = deg H(beta, -M/D) / (2 S(M))` with `B = zeta(-1) L(chi_D, -1)`.
pub fn hilbert_t_degree(e: &EisensteinSeries, d: u64, m: u64) -> Result<Rational> {
    let b = zeta_exact(-1)? * l_exact(d as i64, -1)?;
    match hilbert_index(e, d, m)? {
        Some(h) => Ok(e.degree_ratio(&h)? * b / (hilbert_s(d, m) * 2u32)),
        None => Ok(Rational::new()),
    }
}

fn hz_weights(d: u64, m: u64) -> Vec<(u64, Rational)> {
    divisors(m)
        .into_iter()
        .map(|k| {
            let c = kronecker(d as i64, k as i64) + kronecker(d as i64, (m / k) as i64);
            (k, Rational::from(c))
        })
        .collect()
}

/// `-zeta(-1) sum_{k | M} (chi(k) + chi(M/k)) k`.
fn hz_degree(d: u64, m: u64) -> Result<Rational> {
    let s: Rational = hz_weights(d, m).into_iter().map(|(k, c)| c * k).sum();
    Ok(-zeta_exact(-1)? * s)
}

/// Value and logarithmic derivative at `s = 2` of `S(M) sum_{k | M} (chi(k) + chi(M/k)) k^{1-s}`.
fn hz_sigma(d: u64, m: u64) -> (Rational, Option<Vec<(u64, Rational)>>) {
    let w = hz_weights(d, m);
    let total: Rational = w.iter().map(|(k, c)| Rational::from(c / *k)).sum();
    let value = Rational::from(&total * hilbert_s(d, m));
    if total == 0 {
        return (value, None);
    }
    let mut alpha: BTreeMap<u64, Rational> = BTreeMap::new();
    for (k, c) in &w {
        for (p, v) in factorize(*k) {
            *alpha.entry(p).or_default() -= Rational::from(c / *k) * v / &total;
        }
    }
    (value, Some(alpha.into_iter().filter(|(_, a)| *a != 0).collect()))
}

fn hilbert_suite(e: &EisensteinSeries, d: u64) -> Vec<Check> {
    let mut out = Vec::new();
    check(&mut out, "volume", || {
        let b = zeta_exact(-1)? * l_exact(d as i64, -1)?;
        let ok = d != 5 || b == q(1, 30);
        Ok((ok && b > 0, format!("B = zeta(-1) L(chi_{d}, -1) = {}", format_rational(&b))))
    });
    check(&mut out, "degree T(1)", || {
        let deg = hilbert_t_degree(e, d, 1)?;
        Ok((deg == q(1, 6), format!("deg T(1) = {}", format_rational(&deg))))
    });
    check(&mut out, "degrees T(M), M <= 10", || {
        let mut bad = Vec::new();
        for m in 1..=10 {
            if hilbert_t_degree(e, d, m)? != hz_degree(d, m)? {
                bad.push(m);
            }
        }
        Ok((bad.is_empty(), format!("mismatches {bad:?}")))
    });
    check(&mut out, "sigma closed form, M <= 20", || {
        let mut bad = Vec::new();
        let mut tested = 0;
        for m in 1..=20 {
            let Some(h) = hilbert_index(e, d, m)? else { continue };
            tested += 1;
            let s = e.sigma(&h.rep_index())?;
            let (value, alpha) = hz_sigma(d, m);
            if s.value_at_kappa != value || s.logderiv_at_kappa != alpha {
                bad.push(m);
            }
        }
        Ok((bad.is_empty() && tested > 0, format!("{tested} compatible M, mismatches {bad:?}")))
    });
    check(&mut out, "integrals T(M), M <= 10", || {
        let mut bad = Vec::new();
        for m in 1..=10 {
            let Some(h) = hilbert_index(e, d, m)? else { continue };
            let (_, alpha) = hz_sigma(d, m);
            let Some(alpha) = alpha else { continue };
            let want = SymbolicValue::l_logderiv(q(2, 1), d as i64, q(-1, 1))
                + SymbolicValue::rational(q(1, 1))
                + SymbolicValue::log(&q(1, 1), &Rational::from(d * m))
                + alpha.iter().map(|(p, a)| SymbolicValue::log(&Rational::from(a * 2u32), &Rational::from(*p))).sum();
            if e.green_integral(&h)? != want {
                bad.push(m);
            }
        }
        Ok((bad.is_empty(), format!("mismatches {bad:?}")))
    });
    if d == 5 {
        check(&mut out, "gundlach weight", || {
            let h = hilbert_index(e, d, 1)?.ok_or_else(|| Error::Inconsistent("no index for T(1)".into()))?;
            let k = e.weight_of_divisor(&[DivisorTerm { index: h, a: q(1, 1) }])?;
            Ok((k == 5, format!("weight of the product with divisor T(1) = {}", format_rational(&k))))
        });
    }
    weil_checks(&mut out, e.lattice(), 30);
    out
}

fn genus_suite(inner: &EisensteinSeries, outer: &EisensteinSeries) -> Vec<Check> {
    let mut out = Vec::new();
    check(&mut out, "genus invariance", || {
        let mut tested = 0;
        let mut bad = Vec::new();
        for (g, h) in inner.group().elements().into_iter().zip(outer.group().elements()) {
            let mut m = Rational::from(-crate::arith::frac(&Rational::from(-g.q())));
            if m == 0 {
                m -= 1;
            }
            for _ in 0..3 {
                let a = HeegnerIndex::new(g.clone(), m.clone())?;
                let b = HeegnerIndex::new(h.clone(), m.clone())?;
                tested += 1;
                let same_c = inner.coeff_c0(&a.rep_index())? == outer.coeff_c0(&b.rep_index())?;
                let same_g = match (inner.green_integral(&a), outer.green_integral(&b)) {
                    (Ok(x), Ok(y)) => x == y,
                    (Err(x), Err(y)) => x == y,
                    _ => false,
                };
                if !(same_c && same_g) {
                    bad.push(a.to_string());
                }
                m -= 1;
            }
        }
        Ok((bad.is_empty(), format!("{tested} indices of L and L + U agree, mismatches {bad:?}")))
    });
    out
}
