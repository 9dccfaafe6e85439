mod common;

use common::{indices, opts, primes_upto, BUILTINS};
use heegner_core::dirichlet::{fundamental_decomposition, is_fundamental, kronecker, l_exact, l_numeric, working_bits};
use heegner_core::eisenstein::ConstantName;
use heegner_core::weilrep::{Letter, MetaplecticElement, WeilRep};
use heegner_core::{builtin_lattice, EisensteinSeries, EvenLattice, HeegnerIndex, SymbolicValue};
use proptest::prelude::*;
use rug::{Float, Integer, Rational};

fn assert_none(v: common::Violations) {
    assert!(v.is_empty(), "{} violations: {:?}", v.len(), &v[..v.len().min(10)]);
}

// ---- lattice_core ----

fn even_gram(rank: usize, entries: &[i64]) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; rank]; rank];
    let mut it = entries.iter();
    for i in 0..rank {
        for j in i..rank {
            let v = *it.next().unwrap();
            g[i][j] = if i == j { 2 * v } else { v };
            g[j][i] = g[i][j];
        }
    }
    g
}

fn minors_sign_changes(g: &[Vec<i64>]) -> Option<usize> {
    let r = g.len();
    let mut prev = Rational::from(1);
    let mut changes = 0;
    for k in 1..=r {
        let m: Vec<Vec<Rational>> = (0..k).map(|i| (0..k).map(|j| Rational::from(g[i][j])).collect()).collect();
        let d = det(m);
        if d == 0 {
            return None;
        }
        if (d < 0) != (prev < 0) {
            changes += 1;
        }
        prev = d;
    }
    Some(changes)
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else { return Rational::new() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            let f = Rational::from(&m[r][c] / &piv);
            for k in c..n {
                let t = Rational::from(&m[c][k] * &f);
                m[r][k] -= t;
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_order_is_abs_det(rank in 1usize..=4, entries in prop::collection::vec(-3i64..=3, 10)) {
        let gram = even_gram(rank, &entries);
        if let Ok(l) = EvenLattice::new(gram.clone()) {
            let g = l.discriminant_group();
            prop_assert_eq!(Integer::from(g.order()), Integer::from(l.det().abs_ref()));
            if let Some(neg) = minors_sign_changes(&gram) {
                prop_assert_eq!(l.signature().1, neg);
            }
        }
    }

    #[test]
    fn quadratic_module_laws(rank in 1usize..=3, entries in prop::collection::vec(-3i64..=3, 6)) {
        let Ok(l) = EvenLattice::new(even_gram(rank, &entries)) else { return Ok(()) };
        let g = l.discriminant_group();
        prop_assume!(g.order() <= 50);
        let els = g.elements();
        for a in &els {
            for b in &els {
                let lhs = (g.q_value(a) + g.q_value(b)) + g.bilinear_value(a, b);
                let diff = lhs - g.q_value(&g.add(a, b));
                prop_assert_eq!(diff.denom(), &Integer::from(1));
            }
            let lv = g.level(a);
            prop_assert!(g.scale(a, lv).is_zero());
            for k in 1..lv {
                prop_assert!(!g.scale(a, k).is_zero());
            }
        }
    }
}

// ---- repnum_engine ----

#[test]
fn stabilization_law() {
    assert_none(common::stabilization_law());
}

#[test]
fn padding_invariance() {
    assert_none(common::padding_invariance());
}

#[test]
fn multiplicativity() {
    assert_none(common::multiplicativity());
}

#[test]
fn good_prime_closed_forms() {
    assert_none(common::good_prime_closed_forms());
}

#[test]
fn local_polynomials_are_genus_invariant() {
    assert_none(common::local_polynomials_are_genus_invariant());
}

// ---- dirichlet_engine ----

#[test]
fn kronecker_multiplicative_and_periodic() {
    let ds: Vec<i64> = (-60..=60).filter(|&d| is_fundamental(d)).collect();
    assert!(ds.len() > 30);
    for d in ds {
        let period = d.abs();
        for a in 1..=200i64 {
            assert_eq!(kronecker(d, a), kronecker(d, a + period), "D={d} a={a}");
            for b in 1..=200 / a {
                assert_eq!(kronecker(d, a * b), kronecker(d, a) * kronecker(d, b), "D={d} a={a} b={b}");
            }
        }
    }
}

#[test]
fn exact_and_numeric_l_values() {
    for d in [-3i64, -4, 5, 8, 12, -7] {
        for s in [0i64, -1, -2, -3] {
            let exact = l_exact(d, s).unwrap();
            let num = l_numeric(d, &Rational::from(s), 50).unwrap().value;
            let diff = Float::with_val(num.prec(), &num - &exact).abs();
            assert!(diff < 1e-45, "D={d} s={s}: {num} vs {exact}");
        }
        assert!(fundamental_decomposition(d).unwrap().f == 1);
    }
}

// ---- eisenstein_coeffs ----

#[test]
fn degree_is_minus_half_coefficient() {
    for name in BUILTINS {
        let e = EisensteinSeries::new(&builtin_lattice(name).unwrap(), opts()).unwrap();
        for idx in indices(e.group(), 20) {
            let h = HeegnerIndex::new(idx.gamma().clone(), Rational::from(-idx.n())).unwrap();
            let c = e.coeff_c0(&idx).unwrap();
            assert_eq!(e.degree_ratio(&h).unwrap(), -c / 2u32, "{name} {idx}");
        }
    }
}

#[test]
fn genus_invariance_end_to_end() {
    assert_none(common::genus_invariance_end_to_end());
}

#[test]
fn prime_set_enlargement_exhaustive() {
    assert_none(common::prime_set_enlargement());
}

#[test]
fn plus_space_support() {
    assert_none(common::plus_space_support());
}

#[test]
fn weil_relations() {
    assert_none(common::weil_relations());
}

fn symbolic_strategy() -> impl Strategy<Value = SymbolicValue> {
    let coeff = (-20i64..=20, 1i64..=6).prop_map(|(a, b)| Rational::from((a, b)));
    let term = prop_oneof![
        coeff.clone().prop_map(SymbolicValue::rational),
        (coeff.clone(), 1i64..=60, 1i64..=10).prop_map(|(c, a, b)| SymbolicValue::log(&c, &Rational::from((a, b)))),
        (coeff.clone(), prop::sample::select(vec![-1i64, -3, -5])).prop_map(|(c, s)| SymbolicValue::zeta_logderiv(c, Rational::from(s))),
        (coeff.clone(), prop::sample::select(vec![-4i64, -3, 5, 8, 13]), prop::sample::select(vec![0i64, -1, -2]))
            .prop_filter("L vanishes", |(_, d, s)| l_exact(*d, *s).map(|v| v != 0).unwrap_or(false))
            .prop_map(|(c, d, s)| SymbolicValue::l_logderiv(c, d, Rational::from(s))),
        coeff.prop_map(|c| SymbolicValue::constant(c, ConstantName::EulerGamma)),
    ];
    prop::collection::vec(term, 1..6).prop_map(|v| v.into_iter().sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prime_set_enlargement(extra in prop::collection::vec(prop::sample::select(primes_upto(50)), 0..4), which in 0usize..6) {
        let e = EisensteinSeries::new(&builtin_lattice("hilbert:5").unwrap(), opts()).unwrap();
        let all = indices(e.group(), 20);
        let idx = &all[which % all.len()];
        let a = e.sigma(idx).unwrap();
        let b = e.sigma_with_primes(idx, &extra).unwrap();
        prop_assert_eq!(a.value_at_kappa, b.value_at_kappa);
        prop_assert_eq!(a.logderiv_at_kappa, b.logderiv_at_kappa);
    }

    #[test]
    fn symbolic_evaluation_is_stable(v in symbolic_strategy()) {
        let lo = v.evaluate(50).unwrap().value;
        let hi = v.evaluate(80).unwrap().value;
        let bits = working_bits(80);
        let diff = Float::with_val(bits, &hi - &lo).abs();
        let scale = Float::with_val(bits, hi.abs_ref()).max(&Float::with_val(bits, 1));
        prop_assert!(diff <= scale * 1e-45, "{} vs {}", lo, hi);
    }
}

// ---- weilrep_oracle ----

fn word_strategy() -> impl Strategy<Value = Vec<Letter>> {
    let letter = prop_oneof![(-3i64..=3).prop_map(Letter::T), Just(Letter::S)];
    prop::collection::vec(letter, 0..7)
}

fn lift(word: &[Letter]) -> MetaplecticElement {
    word.iter()
        .fold(MetaplecticElement::principal([[1, 0], [0, 1]]), |acc, l| acc.mul(&MetaplecticElement::letter(*l)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn rho_is_a_homomorphism(w1 in word_strategy(), w2 in word_strategy(), which in 0usize..3) {
        let name = ["sl2", "siegel", "hilbert:5"][which];
        let w = WeilRep::new(&builtin_lattice(name).unwrap(), 40).unwrap();
        let (g1, g2) = (lift(&w1), lift(&w2));
        let lhs = w.rho(&g1).unwrap().mul(&w.rho(&g2).unwrap());
        let prod = w.rho(&g1.mul(&g2)).unwrap();
        prop_assert!(lhs.max_diff(&prod) < 1e-20, "{:?} {:?}", w1, w2);
        prop_assert!(prod.unitarity_defect() < 1e-20);
    }
}
