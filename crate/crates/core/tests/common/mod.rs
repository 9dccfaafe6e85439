//! Exhaustive property checks shared by the `properties` and `acceptance` targets.
//! Each returns the list of violations found.

#![allow(dead_code)]

use heegner_core::arith::{frac, gcd, is_prime, rational_pow};
use heegner_core::dirichlet::kronecker;
use heegner_core::repnum::{local_poly, local_poly_padded, rep_count, rep_count_pp, w_p, CountOptions, RepIndex};
use heegner_core::weilrep::WeilRep;
use heegner_core::{builtin_lattice, hyperbolic_sum, DiscGroup, EisensteinOptions, EisensteinSeries, HeegnerIndex};
use rug::ops::Pow;
use rug::{Integer, Rational};

pub const BUILTINS: [&str; 4] = ["sl2", "siegel", "hilbert:5", "hilbert:13"];

pub type Violations = Vec<String>;

pub fn opts() -> EisensteinOptions {
    EisensteinOptions { formal: true, assume_witt: true, ..Default::default() }
}

/// All `(gamma, n)` with `n > 0` and `|2 d^2 n| <= bound`.
pub fn indices(g: &DiscGroup, bound: i64) -> Vec<RepIndex> {
    let mut out = Vec::new();
    for x in g.elements() {
        let d = x.level() as i64;
        let mut n = frac(&Rational::from(-x.q()));
        if n == 0 {
            n += 1;
        }
        while Rational::from(&n * (2 * d * d)) <= bound {
            out.push(RepIndex::new(x.clone(), n.clone()).unwrap());
            n += 1;
        }
    }
    out
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

fn heegner(idx: &RepIndex) -> HeegnerIndex {
    HeegnerIndex::new(idx.gamma().clone(), Rational::from(-idx.n())).unwrap()
}

/// `N(p^{w+1}) = p^{r-1} N(p^w)` at `w = w_p`.
pub fn stabilization_law() -> Violations {
    let mut bad = Vec::new();
    for name in BUILTINS {
        let l = builtin_lattice(name).unwrap();
        let g = l.discriminant_group();
        let r = l.rank() as u32;
        for idx in indices(&g, 20) {
            for p in primes_upto(7) {
                let a = w_p(&idx, p).unwrap();
                let lo = rep_count_pp(&g, &idx, p, a, CountOptions::default()).unwrap();
                let hi = rep_count_pp(&g, &idx, p, a + 1, CountOptions::default()).unwrap();
                if hi != lo * Integer::from(p).pow(r - 1) {
                    bad.push(format!("{name} {idx} p={p}"));
                }
            }
        }
    }
    bad
}

/// Local polynomials computed at `w_p` and `w_p + 2` agree.
pub fn padding_invariance() -> Violations {
    let mut bad = Vec::new();
    // w_p + 2 at p = 2 can exceed the default cap
    let wide = CountOptions::with_budget(1_000_000_000);
    for name in BUILTINS {
        let g = builtin_lattice(name).unwrap().discriminant_group();
        for idx in indices(&g, 20) {
            for p in primes_upto(7) {
                let a = local_poly(&g, &idx, p, wide).unwrap();
                let b = local_poly_padded(&g, &idx, p, 2, wide).unwrap();
                if a.coeffs != b.coeffs {
                    bad.push(format!("{name} {idx} p={p}"));
                }
            }
        }
    }
    bad
}

/// Direct count of `x mod a` with `q(x - gamma) + n = 0 mod a`.
pub fn direct_count(g: &DiscGroup, idx: &RepIndex, a: u64) -> u64 {
    let l = g.lattice();
    let r = l.rank();
    let rep = g.representative(idx.gamma());
    let mut count = 0;
    let mut x = vec![0u64; r];
    loop {
        let v: Vec<Rational> = x.iter().zip(&rep).map(|(&xi, ri)| Rational::from(xi) - ri).collect();
        let val = l.q(&v) + idx.n();
        if (val / a).denom() == &1 {
            count += 1;
        }
        let mut k = 0;
        while k < r {
            x[k] += 1;
            if x[k] < a {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == r {
            return count;
        }
    }
}

/// `N(ab) = N(a) N(b)` for coprime `a, b <= 30`, and composite counts against direct enumeration.
pub fn multiplicativity() -> Violations {
    let mut bad = Vec::new();
    for name in ["sl2", "siegel", "hilbert:5"] {
        let g = builtin_lattice(name).unwrap().discriminant_group();
        for idx in indices(&g, 8) {
            for a in 1..=30u64 {
                for b in (a..=30u64).filter(|&b| gcd(a, b) == 1) {
                    let ab = rep_count(&g, &idx, a * b, CountOptions::default()).unwrap();
                    let pa = rep_count(&g, &idx, a, CountOptions::default()).unwrap();
                    let pb = rep_count(&g, &idx, b, CountOptions::default()).unwrap();
                    if ab != pa * pb {
                        bad.push(format!("{name} {idx} a={a} b={b}"));
                    }
                }
            }
        }
    }
    let g = builtin_lattice("sl2").unwrap().discriminant_group();
    for idx in indices(&g, 8) {
        for a in [6u64, 10, 12, 15, 20] {
            if rep_count(&g, &idx, a, CountOptions::default()).unwrap() != direct_count(&g, &idx, a) {
                bad.push(format!("sl2 {idx} a={a} direct"));
            }
        }
    }
    bad
}

/// Local polynomials at primes not dividing `2 d^2 n |L'/L|` have the closed forms
/// `1 - chi(p) p^{r/2-1} X` (r even) and `(1 - p^{r-1} X^2) / (1 - chi(p) p^{(r-1)/2} X)` (r odd).
pub fn good_prime_closed_forms() -> Violations {
    let mut bad = Vec::new();
    for name in BUILTINS {
        let l = builtin_lattice(name).unwrap();
        let g = l.discriminant_group();
        let r = l.rank() as i64;
        let det = l.det().to_i64().unwrap();
        for idx in indices(&g, 20) {
            let d = idx.gamma().level() as i64;
            let level = Rational::from(idx.n() * (2 * d * d * g.order() as i64));
            for p in primes_upto(13) {
                if Rational::from(&level / p).denom() == &1 {
                    continue;
                }
                let poly = local_poly(&g, &idx, p, CountOptions::default()).unwrap();
                let c: Vec<Rational> = poly.coeffs.iter().map(Rational::from).collect();
                let ok = if r % 2 == 0 {
                    let dd = if (r / 2) % 2 == 0 { det } else { -det };
                    let mut want = vec![Rational::from(1), -rational_pow(p, r / 2 - 1) * kronecker(dd, p as i64)];
                    if want[1] == 0 {
                        want.pop();
                    }
                    c == want
                } else {
                    let sign = if ((r + 1) / 2) % 2 == 0 { 2 } else { -2 };
                    let dd = Rational::from(idx.n() * (sign * d * d * det));
                    let chi = kronecker(dd.numer().to_i64().unwrap(), p as i64);
                    // L(X) (1 - chi p^{(r-1)/2} X) = 1 - p^{r-1} X^2
                    let t = rational_pow(p, (r - 1) / 2) * chi;
                    let mut prod = vec![Rational::new(); c.len() + 1];
                    for (k, ck) in c.iter().enumerate() {
                        prod[k] += ck;
                        prod[k + 1] -= Rational::from(ck * &t);
                    }
                    let mut want = vec![Rational::from(1), Rational::new(), -rational_pow(p, r - 1)];
                    want.resize(prod.len().max(3), Rational::new());
                    prod.resize(want.len(), Rational::new());
                    prod == want
                };
                if !ok {
                    bad.push(format!("{name} {idx} p={p}"));
                }
            }
        }
    }
    bad
}

/// Local polynomials of `L` and `L + U` satisfy `L(p^{-r/2} X) = L~(p^{-(r+2)/2} X)`.
pub fn local_polynomials_are_genus_invariant() -> Violations {
    let mut bad = Vec::new();
    for name in ["sl2", "siegel", "hilbert:5"] {
        let l = builtin_lattice(name).unwrap();
        let big = hyperbolic_sum(&l);
        let (g, h) = (l.discriminant_group(), big.discriminant_group());
        for (a, b) in indices(&g, 12).iter().zip(indices(&h, 12)) {
            if a.n() != b.n() {
                bad.push(format!("{name} {a}: index order differs"));
                continue;
            }
            for p in primes_upto(7) {
                let pa = local_poly(&g, a, p, CountOptions::default()).unwrap();
                let pb = local_poly(&h, &b, p, CountOptions::default()).unwrap();
                let scaled: Vec<Integer> = pa
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, x)| x * Integer::from(p).pow(k as u32))
                    .collect();
                if scaled != pb.coeffs {
                    bad.push(format!("{name} {a} p={p}"));
                }
            }
        }
    }
    bad
}

/// `L` and `L + U` agree on sigma, coefficients, degrees and Green's function integrals.
pub fn genus_invariance_end_to_end() -> Violations {
    let mut bad = Vec::new();
    for name in ["sl2", "siegel", "hilbert:5"] {
        let l = builtin_lattice(name).unwrap();
        let a = EisensteinSeries::new(&l, opts()).unwrap();
        let b = EisensteinSeries::new(&hyperbolic_sum(&l), opts()).unwrap();
        for (ia, ib) in indices(a.group(), 12).iter().zip(indices(b.group(), 12)) {
            let (sa, sb) = (a.sigma(ia).unwrap(), b.sigma(&ib).unwrap());
            let (ha, hb) = (heegner(ia), heegner(&ib));
            let same_integral = match (a.green_integral(&ha), b.green_integral(&hb)) {
                (Ok(x), Ok(y)) => x == y,
                (Err(x), Err(y)) => x == y,
                _ => false,
            };
            let ok = sa.value_at_kappa == sb.value_at_kappa
                && sa.logderiv_at_kappa == sb.logderiv_at_kappa
                && a.coeff_c0(ia).unwrap() == b.coeff_c0(&ib).unwrap()
                && a.degree_ratio(&ha).unwrap() == b.degree_ratio(&hb).unwrap()
                && same_integral;
            if !ok {
                bad.push(format!("{name} {ia}"));
            }
        }
    }
    bad
}

/// Adding every subset of the primes up to 13 to the Euler product leaves sigma unchanged.
pub fn prime_set_enlargement() -> Violations {
    let mut bad = Vec::new();
    let primes = primes_upto(13);
    for name in ["siegel", "hilbert:5"] {
        let e = EisensteinSeries::new(&builtin_lattice(name).unwrap(), opts()).unwrap();
        for idx in indices(e.group(), 12) {
            let base = e.sigma(&idx).unwrap();
            for mask in 1u32..(1 << primes.len()) {
                let extra: Vec<u64> =
                    primes.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| *p).collect();
                let s = e.sigma_with_primes(&idx, &extra).unwrap();
                if s.value_at_kappa != base.value_at_kappa || s.logderiv_at_kappa != base.logderiv_at_kappa {
                    bad.push(format!("{name} {idx} {extra:?}"));
                }
            }
        }
    }
    bad
}

/// Siegel coefficients are supported on `4n = 0, 1 mod 4`, negative for `n > 0`.
pub fn plus_space_support() -> Violations {
    let e = EisensteinSeries::new(&builtin_lattice("siegel").unwrap(), opts()).unwrap();
    let table = e.qexp_e0(&Rational::from(6)).unwrap();
    let mut bad = Vec::new();
    if table.is_empty() {
        bad.push("empty table".into());
    }
    for t in &table {
        let four_n = Rational::from(&t.n * 4u32);
        let r = four_n.numer().mod_u(4);
        let ok = four_n.denom() == &1 && (t.n == 0 || ((r == 0 || r == 1) && t.coeff < 0));
        if !ok {
            bad.push(format!("{} n={}", t.gamma, t.n));
        }
    }
    bad
}

/// `S^2 = (ST)^3 = Z` and unitarity of the generators to `1e-20`.
pub fn weil_relations() -> Violations {
    let mut bad = Vec::new();
    for name in BUILTINS {
        let w = WeilRep::new(&builtin_lattice(name).unwrap(), 40).unwrap();
        let (s, t, z) = (w.rho_s(), w.rho_t(), w.rho_z());
        let st = s.mul(&t);
        let worst = [
            s.mul(&s).max_diff(&z),
            st.mul(&st).mul(&st).max_diff(&z),
            s.unitarity_defect(),
            t.unitarity_defect(),
        ]
        .into_iter()
        .fold(0f64, f64::max);
        if !(worst < 1e-20) {
            bad.push(format!("{name}: defect {worst:.3e}"));
        }
    }
    bad
}
