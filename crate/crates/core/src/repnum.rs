//! Representation numbers `N_{gamma,n}(a) = #{x in L/aL : q(x - gamma) + n = 0 mod a}`
//! and the local polynomials built from them.
//!
//! For `x in L` the quantity `q(x - gamma) + n = q(x) - (x, gamma) + q(gamma) + n` is an
//! integer, so the congruence is plain divisibility. Counting modulo `p^nu` goes
//! through one of two kernels:
//!
//! * [`Kernel::Naive`] walks all of `(Z/p^nu)^r` with incremental evaluation of the
//!   form, split across threads on the first coordinate.
//! * [`Kernel::Split`] first splits the form into Jordan blocks over `Z_(p)`
//!   (blocks of size one, plus size two at `p = 2`), tabulates the value
//!   distribution of each block modulo `p^nu` and convolves them.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::arith::{factorize, is_prime, rational_pow, valuation_q};
use crate::error::{Error, Result};
use crate::lattice::{DiscElement, DiscGroup};

/// Default cap on elementary evaluations per count.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A pair `(gamma, n)` with `n + q(gamma)` integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepIndex {
    gamma: DiscElement,
    n: Rational,
}

impl RepIndex {
    pub fn new(gamma: DiscElement, n: Rational) -> Result<Self> {
        if *Rational::from(&n + gamma.q()).denom() != 1 {
            return Err(Error::IndexMismatch {
                n: crate::arith::format_rational(&n),
                q: crate::arith::format_rational(gamma.q()),
            });
        }
        Ok(RepIndex { gamma, n })
    }

    pub fn gamma(&self) -> &DiscElement {
        &self.gamma
    }

    pub fn n(&self) -> &Rational {
        &self.n
    }

    /// `2 n d_gamma`, an integer.
    pub fn two_n_level(&self) -> Rational {
        Rational::from(&self.n * (2 * self.gamma.level()))
    }
}

impl fmt::Display for RepIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma={}, n={}", self.gamma, crate::arith::format_rational(&self.n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    Naive,
    #[default]
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
    pub kernel: Kernel,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { budget: DEFAULT_BUDGET, kernel: Kernel::Split }
    }
}

impl CountOptions {
    pub fn with_budget(budget: u64) -> Self {
        CountOptions { budget, ..Default::default() }
    }
}

/// `L^{(p)}_{gamma,n}(X)` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPolynomial {
    pub p: u64,
    /// The exponent bound used (trailing zero coefficients are dropped).
    pub w: u32,
    pub coeffs: Vec<Integer>,
}

impl LocalPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `X L'(X)` at `x`.
    pub fn eval_x_deriv(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        let mut xk = Rational::from(1);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                acc += Rational::from(&xk * c) * k as u32;
            }
            xk *= x;
        }
        acc
    }

    /// Compare `L(p^{-r/2} X)` with `M(p^{-s/2} X)` for ranks of equal parity.
    pub fn genus_equivalent(&self, r: usize, other: &LocalPolynomial, s: usize) -> bool {
        if self.p != other.p || r % 2 != s % 2 || self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let shift = (s as i64 - r as i64) / 2;
        self.coeffs.iter().zip(&other.coeffs).enumerate().all(|(k, (a, b))| {
            Rational::from(a) * rational_pow(self.p, k as i64 * shift) == *b
        })
    }
}

impl fmt::Display for LocalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            let abs = Integer::from(c.abs_ref());
            let body = match (k, abs == 1) {
                (0, _) => abs.to_string(),
                (1, true) => "X".to_string(),
                (1, false) => format!("{abs}*X"),
                (_, true) => format!("X^{k}"),
                (_, false) => format!("{abs}*X^{k}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign} {body}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `w_p = 1 + 2 v_p(2 n d_gamma)`.
pub fn w_p(idx: &RepIndex, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if *idx.n() == 0 {
        return Err(Error::ZeroIndex);
    }
    let v = valuation_q(&idx.two_n_level(), p);
    debug_assert!(v >= 0, "2 n d_gamma must be integral");
    Ok(1 + 2 * v.max(0) as u32)
}

/// The polynomial over a fixed `(gamma, n)` and prime: `Q(y) - l.y + c`
/// after the Jordan splitting at `p`.
struct SplitForm {
    blocks: Vec<Block>,
    constant: Rational,
}

/// One Jordan block: `sum_i quad_ii y_i^2 + sum_{i<j} quad_ij y_i y_j - sum_i lin_i y_i`.
struct Block {
    quad: Vec<Vec<Rational>>,
    lin: Vec<Rational>,
}

/// The quadratic polynomial `f(x) = q(x) - (x, gamma) + q(gamma) + n` on `Z^r`,
/// stored by its Gram matrix, linear part `G gamma` and constant.
struct ShiftedForm {
    gram: Vec<Vec<Rational>>,
    lin: Vec<Rational>,
    constant: Rational,
}

impl ShiftedForm {
    fn new(group: &DiscGroup, idx: &RepIndex) -> Self {
        let l = group.lattice();
        let rep = group.representative(idx.gamma());
        let gram = l.gram().iter().map(|r| r.iter().map(|&g| Rational::from(g)).collect()).collect();
        let lin = l.gram_times(&rep);
        let constant = l.q(&rep) + idx.n();
        debug_assert!(*constant.denom() == 1);
        ShiftedForm { gram, lin, constant }
    }

    fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Jordan splitting over `Z_(p)` by congruence transforms with p-integral,
    /// p-unimodular basis changes.
    fn split(&self, p: u64) -> SplitForm {
        let r = self.rank();
        let mut a = self.gram.clone();
        // lin transforms like a column of P^T: track it as an extra row
        let mut lin = self.lin.clone();
        let add_col = |a: &mut Vec<Vec<Rational>>, lin: &mut Vec<Rational>, dst: usize, src: usize, t: &Rational| {
            // basis vector dst += t * basis vector src
            for row in a.iter_mut() {
                let add = Rational::from(&row[src] * t);
                row[dst] += add;
            }
            let src_row = a[src].clone();
            for (k, v) in src_row.iter().enumerate() {
                a[dst][k] += Rational::from(v * t);
            }
            let add = Rational::from(&lin[src] * t);
            lin[dst] += add;
        };

        let mut remaining: Vec<usize> = (0..r).collect();
        let mut blocks = Vec::new();
        while !remaining.is_empty() {
            let mut best: Option<(i64, usize, usize)> = None;
            for (ii, &i) in remaining.iter().enumerate() {
                for &j in &remaining[ii..] {
                    if a[i][j] != 0 {
                        let v = valuation_q(&a[i][j], p);
                        let better = match best {
                            None => true,
                            Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                        };
                        if better {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let (_, i, j) = best.expect("nondegenerate Gram matrix");
            if i == j {
                let pivot = a[i][i].clone();
                for &k in &remaining {
                    if k != i && a[k][i] != 0 {
                        let t = -Rational::from(&a[k][i] / &pivot);
                        add_col(&mut a, &mut lin, k, i, &t);
                    }
                }
                blocks.push(vec![i]);
                remaining.retain(|&k| k != i);
            } else if p != 2 {
                add_col(&mut a, &mut lin, i, j, &Rational::from(1));
            } else {
                let det = Rational::from(&a[i][i] * &a[j][j]) - Rational::from(&a[i][j] * &a[i][j]);
                for &k in &remaining {
                    if k != i && k != j && (a[k][i] != 0 || a[k][j] != 0) {
                        let alpha = (Rational::from(&a[j][j] * &a[i][k]) - Rational::from(&a[i][j] * &a[j][k])) / &det;
                        let beta = (Rational::from(&a[i][i] * &a[j][k]) - Rational::from(&a[i][j] * &a[i][k])) / &det;
                        add_col(&mut a, &mut lin, k, i, &(-alpha));
                        add_col(&mut a, &mut lin, k, j, &(-beta));
                    }
                }
                blocks.push(vec![i, j]);
                remaining.retain(|&k| k != i && k != j);
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|idx| {
                let quad = idx
                    .iter()
                    .enumerate()
                    .map(|(u, &i)| {
                        idx.iter()
                            .enumerate()
                            .map(|(v, &j)| match u.cmp(&v) {
                                std::cmp::Ordering::Equal => Rational::from(&a[i][i] / 2u32),
                                std::cmp::Ordering::Less => a[i][j].clone(),
                                std::cmp::Ordering::Greater => Rational::new(),
                            })
                            .collect()
                    })
                    .collect();
                let lin = idx.iter().map(|&i| lin[i].clone()).collect();
                Block { quad, lin }
            })
            .collect();
        SplitForm { blocks, constant: self.constant.clone() }
    }
}

/// Reduce a p-integral rational modulo `m`.
fn reduce(x: &Rational, m: u64) -> u64 {
    let mi = Integer::from(m);
    let den = Integer::from(x.denom()).invert(&mi).expect("p-integral rational");
    let v = Integer::from(x.numer() * den).modulo(&mi);
    v.to_u64().expect("residue fits")
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn block_histogram(block: &Block, m: u64) -> Vec<u128> {
    let mut hist = vec![0u128; m as usize];
    let k = block.lin.len();
    let q: Vec<Vec<u64>> = block.quad.iter().map(|r| r.iter().map(|x| reduce(x, m)).collect()).collect();
    let l: Vec<u64> = block.lin.iter().map(|x| (m - reduce(x, m)) % m).collect();
    if k == 1 {
        for y in 0..m {
            let v = (mulmod(mulmod(q[0][0], y, m), y, m) + mulmod(l[0], y, m)) % m;
            hist[v as usize] += 1;
        }
    } else {
        for y1 in 0..m {
            let base = (mulmod(mulmod(q[0][0], y1, m), y1, m) + mulmod(l[0], y1, m)) % m;
            let slope = (mulmod(q[0][1], y1, m) + l[1]) % m;
            for y2 in 0..m {
                let v = (base + mulmod((mulmod(q[1][1], y2, m) + slope) % m, y2, m)) % m;
                hist[v as usize] += 1;
            }
        }
    }
    hist
}

fn convolve(a: &[u128], b: &[u128]) -> Vec<u128> {
    let m = a.len();
    let mut out = vec![0u128; m];
    let nz: Vec<(usize, u128)> = b.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for &(j, cb) in &nz {
            let k = if i + j >= m { i + j - m } else { i + j };
            out[k] += ca * cb;
        }
    }
    out
}

fn nonzero(h: &[u128]) -> u128 {
    h.iter().filter(|&&c| c != 0).count() as u128
}

fn modulus(p: u64, nu: u32) -> Result<u64> {
    p.checked_pow(nu)
        .filter(|&m| m < (1u64 << 40))
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: 0 })
}

/// Counter for a fixed `(gamma, n)` and prime, reusing the Jordan splitting.
pub struct LocalCounter<'a> {
    form: ShiftedForm,
    split: Option<SplitForm>,
    p: u64,
    opts: CountOptions,
    group: &'a DiscGroup,
}

impl<'a> LocalCounter<'a> {
    pub fn new(group: &'a DiscGroup, idx: &RepIndex, p: u64, opts: CountOptions) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let form = ShiftedForm::new(group, idx);
        let split = (opts.kernel == Kernel::Split).then(|| form.split(p));
        Ok(LocalCounter { form, split, p, opts, group })
    }

    pub fn count(&self, nu: u32) -> Result<Integer> {
        if nu == 0 {
            return Ok(Integer::from(1));
        }
        let m = modulus(self.p, nu)?;
        let r = self.form.rank() as u32;
        if (nu as f64) * (r as f64) * (self.p as f64).log2() >= 126.0 {
            return Err(Error::BudgetExceeded { needed: u128::MAX, budget: self.opts.budget });
        }
        match &self.split {
            Some(split) => self.count_split(split, m),
            None => self.count_naive(m),
        }
    }

    fn count_split(&self, split: &SplitForm, m: u64) -> Result<Integer> {
        let mm = m as u128;
        let budget = self.opts.budget as u128;
        let over = |needed: u128| Error::BudgetExceeded { needed, budget: self.opts.budget };
        let mut cost: u128 = split.blocks.iter().map(|b| if b.lin.len() == 1 { mm } else { mm * mm }).sum();
        if cost > budget {
            return Err(over(cost));
        }
        let mut cache: BTreeMap<Vec<u64>, Vec<u128>> = BTreeMap::new();
        let mut hists = Vec::with_capacity(split.blocks.len());
        for b in &split.blocks {
            let key: Vec<u64> = b
                .quad
                .iter()
                .flatten()
                .chain(&b.lin)
                .map(|x| reduce(x, m))
                .chain(std::iter::once(b.lin.len() as u64))
                .collect();
            hists.push(cache.entry(key).or_insert_with(|| block_histogram(b, m)).clone());
        }
        let target = ((m - reduce(&split.constant, m)) % m) as usize;
        let (last, rest) = hists.split_last().expect("rank at least one");
        let mut acc: Option<Vec<u128>> = None;
        for h in rest {
            acc = Some(match acc {
                None => h.clone(),
                Some(a) => {
                    cost += nonzero(&a) * nonzero(h);
                    if cost > budget {
                        return Err(over(cost));
                    }
                    convolve(&a, h)
                }
            });
        }
        let Some(acc) = acc else { return Ok(Integer::from(last[target])) };
        let m = m as usize;
        let value: u128 = acc
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(i, &c)| c * last[(target + m - i) % m])
            .sum();
        Ok(Integer::from(value))
    }

    fn count_naive(&self, m: u64) -> Result<Integer> {
        let r = self.form.rank();
        let needed = (m as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        if needed > self.opts.budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget: self.opts.budget });
        }
        let g = &self.form.gram;
        let quad: Vec<Vec<u64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Equal => reduce(&Rational::from(&g[i][i] / 2u32), m),
                        std::cmp::Ordering::Less => reduce(&g[i][j], m),
                        std::cmp::Ordering::Greater => 0,
                    })
                    .collect()
            })
            .collect();
        let lin: Vec<u64> = self.form.lin.iter().map(|x| (m - reduce(x, m)) % m).collect();
        let c = reduce(&self.form.constant, m);
        let total: u128 = (0..m)
            .into_par_iter()
            .map(|x0| {
                let mut x = vec![0u64; r];
                x[0] = x0;
                let v0 = (mulmod(mulmod(quad[0][0], x0, m), x0, m) + mulmod(lin[0], x0, m) + c) % m;
                naive_rec(&quad, &lin, m, &mut x, 1, v0)
            })
            .sum();
        Ok(Integer::from(total))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn group(&self) -> &DiscGroup {
        self.group
    }
}

fn naive_rec(quad: &[Vec<u64>], lin: &[u64], m: u64, x: &mut [u64], k: usize, partial: u64) -> u128 {
    let r = x.len();
    if k == r {
        return (partial == 0) as u128;
    }
    // contribution of x_k: x_k * (q_kk x_k + l_k + sum_{i<k} q_ik x_i)
    let mut slope = lin[k];
    for i in 0..k {
        slope = (slope + mulmod(quad[i][k], x[i], m)) % m;
    }
    let mut count = 0;
    for xk in 0..m {
        let v = (partial + mulmod((mulmod(quad[k][k], xk, m) + slope) % m, xk, m)) % m;
        x[k] = xk;
        count += naive_rec(quad, lin, m, x, k + 1, v);
    }
    count
}

/// `N_{gamma,n}(p^nu)`.
pub fn rep_count_pp(group: &DiscGroup, idx: &RepIndex, p: u64, nu: u32, opts: CountOptions) -> Result<Integer> {
    LocalCounter::new(group, idx, p, opts)?.count(nu)
}

/// `N_{gamma,n}(a)` via multiplicativity.
pub fn rep_count(group: &DiscGroup, idx: &RepIndex, a: u64, opts: CountOptions) -> Result<Integer> {
    if a == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let mut acc = Integer::from(1);
    for (p, e) in factorize(a) {
        acc *= rep_count_pp(group, idx, p, e, opts)?;
    }
    Ok(acc)
}

/// `L^{(p)}_{gamma,n}(X)`.
pub fn local_poly(group: &DiscGroup, idx: &RepIndex, p: u64, opts: CountOptions) -> Result<LocalPolynomial> {
    local_poly_padded(group, idx, p, 0, opts)
}

/// The local polynomial computed with `w_p + extra` in place of `w_p`.
pub fn local_poly_padded(
    group: &DiscGroup,
    idx: &RepIndex,
    p: u64,
    extra: u32,
    opts: CountOptions,
) -> Result<LocalPolynomial> {
    let w = w_p(idx, p)? + extra;
    let counter = LocalCounter::new(group, idx, p, opts)?;
    let r = group.lattice().rank() as u32;
    let pr = Integer::from(p).pow(r - 1);
    let mut counts = Vec::with_capacity(w as usize + 1);
    for nu in 0..=w {
        counts.push(counter.count(nu)?);
    }
    let mut coeffs: Vec<Integer> = (0..=w as usize)
        .map(|nu| {
            let prev = if nu == 0 { Integer::new() } else { Integer::from(&pr * &counts[nu - 1]) };
            Integer::from(&counts[nu] - prev)
        })
        .collect();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == 0) {
        coeffs.pop();
    }
    log::debug!("L^({p}) for {idx}: {coeffs:?} (w = {w})");
    Ok(LocalPolynomial { p, w, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{builtin_lattice, EvenLattice};

    /// Direct count of x mod a with q(x - gamma) + n = 0 mod a, using rational arithmetic.
    fn oracle(group: &DiscGroup, idx: &RepIndex, a: u64) -> u64 {
        let l = group.lattice();
        let r = l.rank();
        let rep = group.representative(idx.gamma());
        let mut count = 0;
        let total = a.pow(r as u32);
        for code in 0..total {
            let mut c = code;
            let x: Vec<Rational> = (0..r)
                .map(|_| {
                    let v = c % a;
                    c /= a;
                    Rational::from(v)
                })
                .collect();
            let diff: Vec<Rational> = x.iter().zip(&rep).map(|(xi, gi)| Rational::from(xi - gi)).collect();
            let val = l.q(&diff) + idx.n();
            assert_eq!(*val.denom(), 1);
            if val.numer().is_divisible_u(a as u32) {
                count += 1;
            }
        }
        count
    }

    fn sl2_index(n: (i64, i64)) -> (DiscGroup, RepIndex) {
        let g = builtin_lattice("sl2").unwrap().discriminant_group();
        let gamma = g.element(&[1]).unwrap();
        let idx = RepIndex::new(gamma, Rational::from(n)).unwrap();
        (g, idx)
    }

    #[test]
    fn modulus_one_counts_one() {
        let (g, idx) = sl2_index((3, 4));
        assert_eq!(rep_count_pp(&g, &idx, 5, 0, CountOptions::default()).unwrap(), 1);
        assert_eq!(rep_count(&g, &idx, 1, CountOptions::default()).unwrap(), 1);
    }

    #[test]
    fn index_must_match_class() {
        let g = builtin_lattice("sl2").unwrap().discriminant_group();
        let gamma = g.element(&[1]).unwrap();
        assert!(matches!(RepIndex::new(gamma, Rational::from(1)), Err(Error::IndexMismatch { .. })));
    }

    #[test]
    fn sl2_mod_three_matches_oracle() {
        let (g, idx) = sl2_index((3, 4));
        let n = rep_count_pp(&g, &idx, 3, 1, CountOptions::default()).unwrap();
        assert_eq!(n, oracle(&g, &idx, 3));
        assert_eq!(n, 9);
    }

    #[test]
    fn kernels_agree_with_oracle() {
        for name in ["sl2", "siegel", "hilbert:5"] {
            let g = builtin_lattice(name).unwrap().discriminant_group();
            for gamma in g.elements() {
                for k in 1..4i64 {
                    let n = Rational::from(k) - gamma.q();
                    let idx = RepIndex::new(gamma.clone(), n).unwrap();
                    for (p, nu) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1)] {
                        let a = p.pow(nu);
                        if a.pow(g.lattice().rank() as u32) > 20_000 {
                            continue;
                        }
                        let want = oracle(&g, &idx, a);
                        let split = rep_count_pp(&g, &idx, p, nu, CountOptions::default()).unwrap();
                        let naive = rep_count_pp(
                            &g,
                            &idx,
                            p,
                            nu,
                            CountOptions { kernel: Kernel::Naive, ..Default::default() },
                        )
                        .unwrap();
                        assert_eq!(split, want, "{name} {idx} p={p} nu={nu}");
                        assert_eq!(naive, want, "{name} {idx} p={p} nu={nu}");
                    }
                }
            }
        }
    }

    #[test]
    fn sl2_mod_twelve_direct() {
        let (g, idx) = sl2_index((3, 4));
        let n = rep_count(&g, &idx, 12, CountOptions::default()).unwrap();
        assert_eq!(n, oracle(&g, &idx, 12));
    }

    #[test]
    fn representative_independent() {
        // shift gamma's representative by a lattice vector: counts are unchanged
        let (g, idx) = sl2_index((7, 4));
        let l = g.lattice();
        let rep = g.representative(idx.gamma());
        let shifted: Vec<Rational> = rep.iter().enumerate().map(|(i, x)| Rational::from(x + (i as i64 + 1))).collect();
        for a in [3u64, 4, 5] {
            let mut count = 0;
            for code in 0..a.pow(3) {
                let x: Vec<Rational> = (0..3).map(|k| Rational::from((code / a.pow(k)) % a)).collect();
                let d: Vec<Rational> = x.iter().zip(&shifted).map(|(u, v)| Rational::from(u - v)).collect();
                let val = l.q(&d) + idx.n();
                if val.numer().is_divisible_u(a as u32) {
                    count += 1;
                }
            }
            assert_eq!(rep_count(&g, &idx, a, CountOptions::default()).unwrap(), count);
        }
    }

    #[test]
    fn w_p_values() {
        let (_, idx) = sl2_index((3, 4));
        assert_eq!(w_p(&idx, 3).unwrap(), 3);
        assert_eq!(w_p(&idx, 2).unwrap(), 1);
        assert_eq!(w_p(&idx, 7).unwrap(), 1);
        assert!(matches!(w_p(&idx, 4), Err(Error::NotPrime(4))));
        let g = builtin_lattice("sl2").unwrap().discriminant_group();
        let zero = RepIndex::new(g.zero(), Rational::new()).unwrap();
        assert_eq!(w_p(&zero, 3), Err(Error::ZeroIndex));
    }

    #[test]
    fn budget_is_enforced() {
        let (g, idx) = sl2_index((3, 4));
        let opts = CountOptions { budget: 100, kernel: Kernel::Naive };
        assert!(matches!(rep_count_pp(&g, &idx, 5, 2, opts), Err(Error::BudgetExceeded { .. })));
        let opts = CountOptions { budget: 100, kernel: Kernel::Split };
        assert!(matches!(rep_count_pp(&g, &idx, 101, 1, opts), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn local_poly_constant_term_and_padding() {
        let (g, idx) = sl2_index((3, 4));
        for p in [2u64, 3, 5, 7] {
            let a = local_poly(&g, &idx, p, CountOptions::default()).unwrap();
            assert_eq!(a.coeffs[0], 1);
            let b = local_poly_padded(&g, &idx, p, 2, CountOptions::default()).unwrap();
            assert_eq!(a.coeffs, b.coeffs);
        }
    }

    #[test]
    fn odd_lattice_with_off_diagonal_pivot() {
        // all diagonal entries divisible by 3 but an off-diagonal unit forces the e_i + e_j step
        let l = EvenLattice::new(vec![vec![6, 1, 0], vec![1, 6, 0], vec![0, 0, -4]]).unwrap();
        let g = l.discriminant_group();
        for gamma in g.elements().into_iter().take(6) {
            let idx = RepIndex::new(gamma.clone(), Rational::from(2) - gamma.q()).unwrap();
            for (p, nu) in [(3u64, 1u32), (3, 2), (2, 2), (7, 1)] {
                let want = oracle(&g, &idx, p.pow(nu));
                assert_eq!(rep_count_pp(&g, &idx, p, nu, CountOptions::default()).unwrap(), want);
            }
        }
    }

    #[test]
    fn display_local_poly() {
        let lp = LocalPolynomial { p: 3, w: 3, coeffs: vec![Integer::from(1), Integer::new(), Integer::from(-9)] };
        assert_eq!(lp.to_string(), "1 - 9*X^2");
        assert_eq!(lp.eval(&Rational::from((1, 3))), 0);
    }
}
