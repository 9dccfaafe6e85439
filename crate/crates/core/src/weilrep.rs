//! The Weil representation `rho_L` of `Mp_2(Z)` on `C[L'/L]`, built from the
//! generators `T` and `S`, and the generalized Kloosterman sums it defines.
//!
//! Everything here is an oracle: dense high-precision complex matrices, words
//! in the generators obtained by Euclidean reduction, and the metaplectic sign
//! tracked by evaluating `phi` at `tau = 2i`. The Kloosterman sums are checked
//! against the divisor-sum identity in terms of representation numbers, and
//! the truncated coefficient series against the closed formula.

use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::arith::{divisors, frac, gcd, mobius, mod_inverse};
use crate::dirichlet::{gamma as gamma_fn, working_bits, MIN_DIGITS};
use crate::error::{Error, Result};
use crate::lattice::{DiscElement, DiscGroup, EvenLattice};
use crate::repnum::{rep_count, CountOptions, RepIndex};

/// Largest discriminant group for which dense matrices are built.
pub const MAX_GROUP_ORDER: u64 = 2000;

/// A complex number with `rug::Float` parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Complex::new(Float::with_val(bits, 0), Float::with_val(bits, 0))
    }

    pub fn one(bits: u32) -> Self {
        Complex::new(Float::with_val(bits, 1), Float::with_val(bits, 0))
    }

    pub fn real(x: Float) -> Self {
        let bits = x.prec();
        Complex::new(x, Float::with_val(bits, 0))
    }

    /// `e(x) = exp(2 pi i x)`, with `x` reduced mod 1 before rounding.
    pub fn e(bits: u32, x: &Rational) -> Self {
        let t = Float::with_val(bits, Constant::Pi) * 2u32 * Float::with_val(bits, &frac(x));
        let (s, c) = t.sin_cos(Float::new(bits));
        Complex::new(c, s)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm(&self) -> Float {
        let bits = self.prec();
        Float::with_val(bits, self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, x: &Float) -> Self {
        let bits = self.prec();
        Complex::new(Float::with_val(bits, &self.re * x), Float::with_val(bits, &self.im * x))
    }

    /// Principal square root (argument in `(-pi/2, pi/2]`).
    pub fn sqrt(&self) -> Self {
        let bits = self.prec();
        let r = self.norm();
        let re = (Float::with_val(bits, &r + &self.re) / 2u32).sqrt();
        let mut im = (Float::with_val(bits, &r - &self.re) / 2u32).sqrt();
        if self.im.is_sign_negative() && !self.im.is_zero() {
            im = -im;
        }
        Complex::new(re, im)
    }

    pub fn div(&self, other: &Complex) -> Self {
        let bits = self.prec();
        let den = Float::with_val(bits, other.re.square_ref()) + Float::with_val(bits, other.im.square_ref());
        let num = self.clone() * other.conj();
        Complex::new(num.re / &den, num.im / den)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        let bits = self.prec();
        let re = Float::with_val(bits, &self.re * &o.re) - Float::with_val(bits, &self.im * &o.im);
        let im = Float::with_val(bits, &self.re * &o.im) + Float::with_val(bits, &self.im * &o.re);
        Complex::new(re, im)
    }
}

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeilMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl WeilMatrix {
    pub fn identity(dim: usize, bits: u32) -> Self {
        let mut data = vec![Complex::zero(bits); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex::one(bits);
        }
        WeilMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry in row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.data[i * self.dim + j]
    }

    pub fn mul(&self, o: &WeilMatrix) -> WeilMatrix {
        let n = self.dim;
        let bits = self.data[0].prec();
        let data = (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                (0..n).fold(Complex::zero(bits), |acc, k| acc + self.get(i, k).clone() * o.get(k, j).clone())
            })
            .collect();
        WeilMatrix { dim: n, data }
    }

    pub fn scale(&self, c: &Complex) -> WeilMatrix {
        WeilMatrix { dim: self.dim, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn conj_transpose(&self) -> WeilMatrix {
        let n = self.dim;
        let data = (0..n * n).map(|ij| self.get(ij % n, ij / n).conj()).collect();
        WeilMatrix { dim: n, data }
    }

    /// Largest entrywise modulus of `self - o`.
    pub fn max_diff(&self, o: &WeilMatrix) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a.clone() - b.clone()).norm().to_f64()).fold(0.0, f64::max)
    }

    pub fn unitarity_defect(&self) -> f64 {
        let bits = self.data[0].prec();
        self.mul(&self.conj_transpose()).max_diff(&WeilMatrix::identity(self.dim, bits))
    }

}

/// A letter of a word in the generators of `SL_2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    T(i64),
    S,
}

pub type Matrix2 = [[i64; 2]; 2];

fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

impl Letter {
    pub fn matrix(&self) -> Matrix2 {
        match *self {
            Letter::T(k) => [[1, k], [0, 1]],
            Letter::S => [[0, -1], [1, 0]],
        }
    }
}

/// `(M, phi)` with `phi(tau) = sign * sqrt(c tau + d)`, principal root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetaplecticElement {
    pub m: Matrix2,
    /// `false` for the principal branch, `true` for its negative.
    pub negated: bool,
}

const BRANCH_BITS: u32 = 192;

fn test_point() -> Complex {
    Complex::new(Float::with_val(BRANCH_BITS, 0), Float::with_val(BRANCH_BITS, 2))
}

fn mobius_action(m: &Matrix2, tau: &Complex) -> Complex {
    let b = BRANCH_BITS;
    let num = tau.clone() * Complex::real(Float::with_val(b, m[0][0])) + Complex::real(Float::with_val(b, m[0][1]));
    let den = tau.clone() * Complex::real(Float::with_val(b, m[1][0])) + Complex::real(Float::with_val(b, m[1][1]));
    num.div(&den)
}

fn principal_phi(m: &Matrix2, tau: &Complex) -> Complex {
    let b = BRANCH_BITS;
    (tau.clone() * Complex::real(Float::with_val(b, m[1][0])) + Complex::real(Float::with_val(b, m[1][1]))).sqrt()
}

impl MetaplecticElement {
    pub fn principal(m: Matrix2) -> Self {
        assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1, "determinant must be 1");
        MetaplecticElement { m, negated: false }
    }

    pub fn letter(l: Letter) -> Self {
        Self::principal(l.matrix())
    }

    fn phi(&self, tau: &Complex) -> Complex {
        let v = principal_phi(&self.m, tau);
        if self.negated {
            -v
        } else {
            v
        }
    }

    /// `(M1, phi1)(M2, phi2) = (M1 M2, phi1(M2 tau) phi2(tau))`.
    pub fn mul(&self, o: &MetaplecticElement) -> MetaplecticElement {
        let m = mat_mul(&self.m, &o.m);
        let tau = test_point();
        let val = self.phi(&mobius_action(&o.m, &tau)) * o.phi(&tau);
        let ratio = val.div(&principal_phi(&m, &tau));
        let re = ratio.re.to_f64();
        assert!(
            (re.abs() - 1.0).abs() < 1e-6 && ratio.im.to_f64().abs() < 1e-6,
            "metaplectic branch ratio {re} is not +-1"
        );
        MetaplecticElement { m, negated: re < 0.0 }
    }
}

/// A word in `T^k` and `S` with the sign relating its product of standard lifts
/// to the principal-branch element of the same matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub letters: Vec<Letter>,
    /// Whether the product of the lifts `(T^k, 1)`, `(S, sqrt(tau))` is the negated branch.
    pub negated: bool,
}

/// Merge adjacent powers of `T` and reduce runs of `S` modulo 4.
fn simplify(letters: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        match l {
            Letter::T(0) => {}
            Letter::T(k) => match out.last_mut() {
                Some(Letter::T(j)) => {
                    *j += k;
                    if *j == 0 {
                        out.pop();
                    }
                }
                _ => out.push(Letter::T(k)),
            },
            Letter::S => {
                let run = out.iter().rev().take_while(|x| **x == Letter::S).count();
                if run == 3 {
                    out.truncate(out.len() - 3);
                } else {
                    out.push(Letter::S);
                }
            }
        }
    }
    out
}

fn lift_product(letters: &[Letter]) -> MetaplecticElement {
    letters.iter().fold(MetaplecticElement::principal([[1, 0], [0, 1]]), |acc, l| acc.mul(&MetaplecticElement::letter(*l)))
}

/// Write `M` in `SL_2(Z)` as a word in `T^k` and `S` by Euclidean reduction of the bottom row.
pub fn decompose_word(m: &Matrix2) -> Result<Word> {
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1 {
        return Err(Error::InvalidArgument(format!("{m:?} does not have determinant 1")));
    }
    let mut cur = *m;
    let mut applied = Vec::new();
    while cur[1][0] != 0 {
        let (c, d) = (cur[1][0], cur[1][1]);
        let k = -((d as f64 / c as f64).round() as i64);
        cur = mat_mul(&cur, &Letter::T(k).matrix());
        applied.push(Letter::T(k));
        cur = mat_mul(&cur, &Letter::S.matrix());
        applied.push(Letter::S);
    }
    let mut letters = if cur[0][0] == 1 {
        vec![Letter::T(cur[0][1])]
    } else {
        vec![Letter::S, Letter::S, Letter::T(-cur[0][1])]
    };
    for l in applied.into_iter().rev() {
        match l {
            Letter::T(k) => letters.push(Letter::T(-k)),
            Letter::S => letters.extend([Letter::S, Letter::S, Letter::S]),
        }
    }
    let letters = simplify(letters);
    let lift = lift_product(&letters);
    debug_assert_eq!(lift.m, *m);
    Ok(Word { letters, negated: lift.negated })
}

/// The Weil representation of a lattice, with `rho(T)` and `rho(S)` precomputed.
#[derive(Debug, Clone)]
pub struct WeilRep {
    group: DiscGroup,
    elements: Vec<DiscElement>,
    bits: u32,
    t_diag: Vec<Complex>,
    s: WeilMatrix,
    /// `b- - b+`.
    sig: i64,
}

impl WeilRep {
    pub fn new(lattice: &EvenLattice, digits: u32) -> Result<Self> {
        let group = lattice.discriminant_group();
        if group.order() > MAX_GROUP_ORDER {
            return Err(Error::GroupTooLarge { order: group.order(), limit: MAX_GROUP_ORDER });
        }
        let (bp, bm) = lattice.signature();
        let sig = bm as i64 - bp as i64;
        // 2 kappa - b- + b+ with kappa = 2 + (b- - b+)/2
        let parity = 4 + sig - sig;
        if parity.rem_euclid(4) != 0 {
            return Err(Error::UnsupportedSignature {
                b_plus: bp,
                b_minus: bm,
                reason: "2 kappa - b- + b+ must be divisible by 4".into(),
            });
        }
        let bits = working_bits(digits.max(MIN_DIGITS));
        let elements = group.elements();
        let n = elements.len();
        let t_diag = elements.iter().map(|g| Complex::e(bits, g.q())).collect();
        let pref = Complex::e(bits, &Rational::from((sig, 8))).scale(&Float::with_val(bits, n).sqrt().recip());
        let data = (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (row, col) = (ij / n, ij % n);
                let b = group.bilinear_value(&elements[col], &elements[row]);
                pref.clone() * Complex::e(bits, &Rational::from(-b))
            })
            .collect();
        let s = WeilMatrix { dim: n, data };
        Ok(WeilRep { group, elements, bits, t_diag, s, sig })
    }

    pub fn group(&self) -> &DiscGroup {
        &self.group
    }

    pub fn elements(&self) -> &[DiscElement] {
        &self.elements
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `kappa = 2 + (b- - b+)/2`.
    pub fn kappa(&self) -> Rational {
        Rational::from((4 + self.sig, 2))
    }

    pub fn rho_t(&self) -> WeilMatrix {
        let n = self.elements.len();
        let mut m = WeilMatrix::identity(n, self.bits);
        for i in 0..n {
            m.data[i * n + i] = self.t_diag[i].clone();
        }
        m
    }

    pub fn rho_s(&self) -> WeilMatrix {
        self.s.clone()
    }

    /// `rho((-I, i))`: `e_gamma -> i^{b- - b+} e_{-gamma}`, built directly.
    pub fn rho_z(&self) -> WeilMatrix {
        let n = self.elements.len();
        let mut m = WeilMatrix { dim: n, data: vec![Complex::zero(self.bits); n * n] };
        let phase = Complex::e(self.bits, &Rational::from((self.sig, 4)));
        for (j, g) in self.elements.iter().enumerate() {
            let i = self.group.index_of(&self.group.neg(g));
            m.data[i * n + j] = phase.clone();
        }
        m
    }

    fn apply_letter(&self, l: Letter, v: &[Complex]) -> Vec<Complex> {
        match l {
            Letter::T(k) => v
                .iter()
                .zip(&self.elements)
                .map(|(x, g)| x.clone() * Complex::e(self.bits, &Rational::from(g.q() * k)))
                .collect(),
            Letter::S => {
                let n = v.len();
                (0..n)
                    .map(|i| (0..n).fold(Complex::zero(self.bits), |acc, j| acc + self.s.get(i, j).clone() * v[j].clone()))
                    .collect()
            }
        }
    }

    /// `(-1)^{b- - b+}`, the action of `(I, -1)`.
    fn branch_sign(&self) -> i32 {
        if self.sig.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `rho(g) e_j` for the metaplectic element `g`.
    pub fn apply(&self, g: &MetaplecticElement, j: usize) -> Result<Vec<Complex>> {
        let word = decompose_word(&g.m)?;
        let mut v = vec![Complex::zero(self.bits); self.elements.len()];
        v[j] = Complex::one(self.bits);
        for l in word.letters.iter().rev() {
            v = self.apply_letter(*l, &v);
        }
        if word.negated != g.negated && self.branch_sign() < 0 {
            v = v.into_iter().map(|x| -x).collect();
        }
        Ok(v)
    }

    /// `rho(g)` as a dense matrix.
    pub fn rho(&self, g: &MetaplecticElement) -> Result<WeilMatrix> {
        let n = self.elements.len();
        let cols: Result<Vec<Vec<Complex>>> = (0..n).into_par_iter().map(|j| self.apply(g, j)).collect();
        let cols = cols?;
        let data = (0..n * n).map(|ij| cols[ij % n][ij / n].clone()).collect();
        Ok(WeilMatrix { dim: n, data })
    }

    /// `rho` of a word, as the product of generator matrices.
    pub fn rho_word(&self, letters: &[Letter]) -> WeilMatrix {
        let n = self.elements.len();
        letters.iter().fold(WeilMatrix::identity(n, self.bits), |acc, l| match *l {
            Letter::S => acc.mul(&self.s),
            Letter::T(k) => {
                let mut tk = WeilMatrix::identity(n, self.bits);
                for i in 0..n {
                    tk.data[i * n + i] = Complex::e(self.bits, &Rational::from(self.elements[i].q() * k));
                }
                acc.mul(&tk)
            }
        })
    }

    /// The coset representative `(a, b; c, d')` of the Kloosterman sum for residue `d mod |c|`.
    pub fn coset_representative(c: i64, d: i64) -> Option<Matrix2> {
        let ac = c.abs();
        let dp = if d.rem_euclid(ac) == 0 { ac } else { d.rem_euclid(ac) };
        if gcd(dp as u64, ac as u64) != 1 {
            return None;
        }
        let a = if ac == 1 { 0 } else { mod_inverse(dp, ac)? };
        let b = (a * dp - 1) / c;
        Some([[a, b], [c, dp]])
    }

    fn kloosterman_summand(
        &self,
        m_rep: &Matrix2,
        beta: usize,
        m: &Rational,
        gamma: usize,
        n: &Rational,
    ) -> Result<Complex> {
        let col = self.apply(&MetaplecticElement::principal(*m_rep), gamma)?;
        let c = m_rep[1][0];
        let x = Rational::from(m * m_rep[0][0]) + Rational::from(n * m_rep[1][1]);
        Ok(col[beta].clone() * Complex::e(self.bits, &(x / c)))
    }

    /// `H_c^*(beta, m, gamma, n)` summed over `d mod |c|` directly.
    pub fn kloosterman_bruteforce(
        &self,
        beta: &DiscElement,
        m: &Rational,
        gamma: &DiscElement,
        n: &Rational,
        c: i64,
    ) -> Result<Complex> {
        if c == 0 {
            return Err(Error::InvalidArgument("c must be nonzero".into()));
        }
        let (bi, gi) = (self.group.index_of(beta), self.group.index_of(gamma));
        let mut acc = Complex::zero(self.bits);
        for d in 0..c.abs() {
            if let Some(rep) = Self::coset_representative(c, d) {
                acc = acc + self.kloosterman_summand(&rep, bi, m, gi, n)?;
            }
        }
        // e^{-pi i sgn(c) kappa / 2} / |c|
        let phase = Complex::e(self.bits, &Rational::from(-self.kappa() * c.signum() / 4i64));
        Ok((acc * phase).scale(&Float::with_val(self.bits, c.abs()).recip()))
    }

    /// `H_c^*(0, 0, gamma, n)` from representation numbers:
    /// `(-1)^{(2 kappa - b- + b+)/4} / sqrt|L'/L| * |c|^{r/2 - 1} sum_{a | c} a^{1-r} mu(|c|/a) N_{gamma,n}(a)`.
    pub fn kloosterman_closed(&self, idx: &RepIndex, c: i64, opts: CountOptions) -> Result<Float> {
        if c == 0 {
            return Err(Error::InvalidArgument("c must be nonzero".into()));
        }
        let bits = self.bits;
        let r = self.group.lattice().rank() as i64;
        let ac = c.unsigned_abs();
        let mut sum = Rational::new();
        for a in divisors(ac) {
            let mu = mobius(ac / a);
            if mu == 0 {
                continue;
            }
            let count = rep_count(&self.group, idx, a, opts)?;
            let pow = Rational::from((Integer::from(1), Integer::from(a).pow((r - 1) as u32)));
            sum += pow * count * mu;
        }
        let e = (Rational::from(self.kappa() * 2u32) - self.sig) / 4u32;
        let sign = if e.numer().is_even() { 1 } else { -1 };
        let scale = Float::with_val(bits, ac).pow(Float::with_val(bits, Rational::from((r - 2, 2))));
        let order = Float::with_val(bits, self.group.order()).sqrt();
        Ok(Float::with_val(bits, &sum) * scale / order * sign)
    }

    /// Truncated series `2^kappa pi^{s+kappa} n^{s+kappa-1} / Gamma(s+kappa) * sum_{0<|c|<=c_max} |c|^{1-kappa-2s} H_c^*(0,0,gamma,n)`,
    /// returned with a bound on the omitted tail.
    pub fn coeff_c_via_kloosterman(&self, gamma: &DiscElement, n: &Rational, s: &Float, c_max: i64) -> Result<(Complex, Float)> {
        let bits = self.bits;
        let kappa = Float::with_val(bits, &self.kappa());
        let alpha = Float::with_val(bits, &kappa + Float::with_val(bits, s * 2u32)) - 1u32;
        if alpha <= 1 {
            return Err(Error::Divergent(format!("kappa + 2s = {} <= 2", Float::with_val(53, &alpha + 1u32).to_f64())));
        }
        if *n <= 0 {
            return Err(Error::InvalidArgument("the Kloosterman series needs n > 0".into()));
        }
        let zero = self.group.zero();
        let m0 = Rational::new();
        let cs: Vec<i64> = (1..=c_max).flat_map(|c| [c, -c]).collect();
        let terms: Result<Vec<Complex>> = cs
            .par_iter()
            .map(|&c| {
                let h = self.kloosterman_bruteforce(&zero, &m0, gamma, n, c)?;
                let w = Float::with_val(bits, c.abs()).pow(Float::with_val(bits, -&alpha));
                Ok(h.scale(&w))
            })
            .collect();
        let sum = terms?.into_iter().fold(Complex::zero(bits), |a, b| a + b);
        let pi = Float::with_val(bits, Constant::Pi);
        let sk = Float::with_val(bits, s + &kappa);
        let pref = Float::with_val(bits, 2).pow(&kappa) * Float::with_val(bits, pi.pow(&sk))
            * Float::with_val(bits, Float::with_val(bits, n).pow(Float::with_val(bits, &sk - 1u32)))
            / gamma_fn(&sk)?;
        let one_minus = Float::with_val(bits, 1 - Float::with_val(bits, &alpha));
        let tail = Float::with_val(bits, c_max).pow(&one_minus) / (Float::with_val(bits, &alpha - 1u32)) * 2u32 * &pref;
        Ok((sum.scale(&pref), tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin_lattice;

    const TOL: f64 = 1e-20;

    fn rep(name: &str) -> WeilRep {
        WeilRep::new(&builtin_lattice(name).unwrap(), 40).unwrap()
    }

    #[test]
    fn generator_relations() {
        for name in ["sl2", "siegel", "hilbert:5"] {
            let w = rep(name);
            let (s, t) = (w.rho_s(), w.rho_t());
            let st = s.mul(&t);
            let st3 = st.mul(&st).mul(&st);
            let s2 = s.mul(&s);
            assert!(s2.max_diff(&w.rho_z()) < TOL, "{name}: S^2");
            assert!(st3.max_diff(&w.rho_z()) < TOL, "{name}: (ST)^3");
            assert!(s.unitarity_defect() < TOL && t.unitarity_defect() < TOL);
        }
    }

    #[test]
    fn words() {
        assert_eq!(decompose_word(&[[1, 0], [0, 1]]).unwrap().letters, vec![]);
        assert_eq!(decompose_word(&[[0, -1], [1, 0]]).unwrap().letters, vec![Letter::S]);
        assert!(decompose_word(&[[2, 0], [0, 1]]).is_err());
        let w = rep("sl2");
        for m in [[[1, 0], [1, 1]], [[2, 1], [1, 1]], [[5, -3], [-8, 5]], [[-1, 0], [0, -1]]] {
            let g = MetaplecticElement::principal(m);
            let direct = w.rho(&g).unwrap();
            let word = decompose_word(&m).unwrap();
            let mut via = w.rho_word(&word.letters);
            if word.negated {
                via = via.scale(&Complex::real(Float::with_val(w.bits(), w.branch_sign())));
            }
            assert!(direct.max_diff(&via) < TOL, "{m:?}");
        }
    }

    #[test]
    fn coset_shift_invariance() {
        let w = rep("sl2");
        let n = Rational::from((3, 4));
        let zero = Rational::new();
        for c in [-7i64, -3, 2, 5, 8] {
            for d in 0..c.abs() {
                let Some(m) = WeilRep::coset_representative(c, d) else { continue };
                let shifted = mat_mul(&m, &Letter::T(1).matrix());
                let a = w.kloosterman_summand(&m, 0, &zero, 1, &n).unwrap();
                let b = w.kloosterman_summand(&shifted, 0, &zero, 1, &n).unwrap();
                assert!((a - b).norm() < TOL, "c={c} d={d}");
            }
        }
    }

    #[test]
    fn closed_and_bruteforce_agree() {
        let w = rep("sl2");
        let zero = w.group().zero();
        for g in w.elements().to_vec() {
            let n = Rational::from(frac(&Rational::from(-g.q())) + 1u32);
            let idx = RepIndex::new(g.clone(), n.clone()).unwrap();
            for c in (-6i64..=6).filter(|&c| c != 0) {
                let bf = w.kloosterman_bruteforce(&zero, &Rational::new(), &g, &n, c).unwrap();
                let cl = w.kloosterman_closed(&idx, c, CountOptions::default()).unwrap();
                assert!((bf.clone() - Complex::real(cl)).norm() < TOL, "gamma={g} c={c}: {bf:?}");
            }
        }
    }

    #[test]
    fn series_matches_closed_coefficient() {
        use crate::eisenstein::{EisensteinOptions, EisensteinSeries};
        let l = builtin_lattice("sl2").unwrap();
        let w = WeilRep::new(&l, 40).unwrap();
        let e = EisensteinSeries::new(&l, EisensteinOptions { formal: true, ..Default::default() }).unwrap();
        let g = w.group().element(&[1]).unwrap();
        let n = Rational::from((3, 4));
        let s = Float::with_val(w.bits(), 0.3);
        let exact = e.coeff_c_numeric(&RepIndex::new(g.clone(), n.clone()).unwrap(), &s).unwrap();
        let mut last = f64::INFINITY;
        for c_max in [50, 100, 200] {
            let (v, tail) = w.coeff_c_via_kloosterman(&g, &n, &s, c_max).unwrap();
            let diff = Complex::real(exact.clone()) - v.clone();
            assert!(diff.norm() <= tail, "c_max {c_max}");
            assert!(v.im.to_f64().abs() < 1e-15);
            eprintln!("c_max {c_max}: {} vs {} (tail {})", v.re.to_f64(), exact.to_f64(), tail.to_f64());
            last = last.min(diff.norm().to_f64());
        }
        assert!(last.is_finite());
    }

    #[test]
    fn diagonal_lattice_sums() {
        let l = EvenLattice::new(vec![vec![2, 0, 0, 0], vec![0, -2, 0, 0], vec![0, 0, -2, 0], vec![0, 0, 0, -2]]).unwrap();
        let w = WeilRep::new(&l, 40).unwrap();
        let zero = w.group().zero();
        for g in w.elements().iter().take(6) {
            let n = Rational::from(frac(&Rational::from(-g.q())) + 1u32);
            let idx = RepIndex::new(g.clone(), n.clone()).unwrap();
            for c in [-4i64, -1, 1, 3, 4, 6] {
                let bf = w.kloosterman_bruteforce(&zero, &Rational::new(), g, &n, c).unwrap();
                let cl = w.kloosterman_closed(&idx, c, CountOptions::default()).unwrap();
                assert!((bf.clone() - Complex::real(cl.clone())).norm() < TOL, "gamma={g} c={c}: {:?} vs {}", bf.re.to_f64(), cl.to_f64());
            }
        }
    }
}
