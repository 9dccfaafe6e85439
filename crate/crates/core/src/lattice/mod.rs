//! Even lattices given by Gram matrices and their discriminant quadratic modules.
//!
//! A lattice is `Z^r` with the bilinear form `(x, y) = x^T G y`, and quadratic
//! form `q(x) = (x, x) / 2`. The dual lattice is `G^{-1} Z^r` and the
//! discriminant group `L'/L` is read off the Smith normal form `U G V = diag(d)`:
//! the element with canonical coordinates `(c_1, ..., c_k)` is represented in
//! `L'` by `sum_i c_i * V e_i / d_i`, where only the divisors `d_i > 1` carry a
//! coordinate.

mod builtin;
mod snf;

use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{frac, lcm};
use crate::error::{Error, Result};

pub use builtin::{builtin_lattice, hyperbolic_sum, BuiltinLattice};

/// On-disk lattice description: `{"name": "...", "gram": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LatticeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gram: Vec<Vec<i64>>,
}

/// A validated even lattice together with its signature and Gram determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenLattice {
    name: Option<String>,
    gram: Vec<Vec<i64>>,
    signature: (usize, usize),
    det: Integer,
}

impl EvenLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        Self::with_name(None, gram)
    }

    pub fn with_name(name: Option<String>, gram: Vec<Vec<i64>>) -> Result<Self> {
        let r = gram.len();
        if r == 0 {
            return Err(Error::EmptyGram);
        }
        for (row, entries) in gram.iter().enumerate() {
            if entries.len() != r {
                return Err(Error::NotSquare { row, len: entries.len(), rank: r });
            }
        }
        for i in 0..r {
            for j in i + 1..r {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        for (i, row) in gram.iter().enumerate() {
            if row[i] % 2 != 0 {
                return Err(Error::OddDiagonal { i, value: row[i] });
            }
        }
        let inertia = inertia(&gram);
        if inertia.det == 0 {
            return Err(Error::Degenerate);
        }
        let det = inertia.det.numer().clone();
        Ok(EvenLattice { name, gram, signature: (inertia.positive, inertia.negative), det })
    }

    /// Parse the JSON lattice format.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: LatticeSpec =
            serde_json::from_str(text).map_err(|e| Error::LatticeFormat(e.to_string()))?;
        Self::with_name(spec.name, spec.gram)
    }

    pub fn to_spec(&self) -> LatticeSpec {
        LatticeSpec { name: self.name.clone(), gram: self.gram.clone() }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// `(b+, b-)`.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn det(&self) -> &Integer {
        &self.det
    }

    /// `q(x) = x^T G x / 2` for a rational vector.
    pub fn q(&self, x: &[Rational]) -> Rational {
        Rational::from(self.bilinear(x, x) / 2u32)
    }

    /// `(x, y) = x^T G y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::new();
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            let mut row = Rational::new();
            for (j, yj) in y.iter().enumerate() {
                if self.gram[i][j] != 0 {
                    row += Rational::from(yj * self.gram[i][j]);
                }
            }
            acc += row * xi;
        }
        acc
    }

    /// `G x` for a rational vector.
    pub fn gram_times(&self, x: &[Rational]) -> Vec<Rational> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(x).map(|(&g, xi)| Rational::from(xi * g)).sum())
            .collect()
    }

    pub fn discriminant_group(&self) -> DiscGroup {
        DiscGroup::new(self)
    }
}

impl fmt::Display for EvenLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            write!(f, "{name}: ")?;
        }
        write!(
            f,
            "rank {}, signature ({},{}), det {}",
            self.rank(),
            self.signature.0,
            self.signature.1,
            self.det
        )
    }
}

pub(crate) struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub det: Rational,
}

/// Sylvester inertia and determinant by exact symmetric elimination.
///
/// Pivots on the first nonzero diagonal entry; when the whole remaining
/// diagonal vanishes, a nonzero off-diagonal entry `b` spans a hyperbolic
/// block `[[0, b], [b, 0]]` of inertia (1,1) and determinant `-b^2`.
pub(crate) fn inertia(gram: &[Vec<i64>]) -> Inertia {
    let mut a: Vec<Vec<Rational>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| Rational::from(x)).collect())
        .collect();
    let (mut positive, mut negative) = (0, 0);
    let mut det = Rational::from(1);
    while !a.is_empty() {
        let n = a.len();
        if let Some(k) = (0..n).find(|&k| a[k][k] != 0) {
            let d = a[k][k].clone();
            if d > 0 {
                positive += 1;
            } else {
                negative += 1;
            }
            det *= &d;
            let rest: Vec<usize> = (0..n).filter(|&i| i != k).collect();
            a = rest
                .iter()
                .map(|&i| {
                    rest.iter()
                        .map(|&j| {
                            let t = Rational::from(&a[i][k] * &a[k][j]) / &d;
                            Rational::from(&a[i][j] - t)
                        })
                        .collect()
                })
                .collect();
        } else if let Some((i, j)) =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] != 0)
        {
            let b = a[i][j].clone();
            positive += 1;
            negative += 1;
            det *= -Rational::from(&b * &b);
            let rest: Vec<usize> = (0..n).filter(|&x| x != i && x != j).collect();
            a = rest
                .iter()
                .map(|&x| {
                    rest.iter()
                        .map(|&y| {
                            let t = Rational::from(&a[x][i] * &a[j][y])
                                + Rational::from(&a[x][j] * &a[i][y]);
                            Rational::from(&a[x][y] - t / &b)
                        })
                        .collect()
                })
                .collect();
        } else {
            return Inertia { positive, negative, det: Rational::new() };
        }
    }
    Inertia { positive, negative, det }
}

/// The discriminant group `L'/L` in Smith-normal-form coordinates.
#[derive(Debug, Clone)]
pub struct DiscGroup {
    lattice: EvenLattice,
    divisors: Vec<u64>,
    /// Lattice-basis coordinates of the representative of each generator.
    generators: Vec<Vec<Rational>>,
}

/// An element of `L'/L` with its norm `q(gamma) mod 1` and level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscElement {
    coords: Vec<u64>,
    q: Rational,
    level: u64,
}

impl DiscElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// `q(gamma)` reduced to `[0, 1)`.
    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// Least `b > 0` with `b * gamma` in `L`.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for DiscElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl DiscGroup {
    fn new(lattice: &EvenLattice) -> Self {
        let smith = snf::smith_normal_form(lattice.gram());
        let r = lattice.rank();
        let mut divisors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in smith.diagonal.iter().enumerate() {
            if *d > 1 {
                let d = d.to_u64().expect("elementary divisor does not fit in u64");
                divisors.push(d);
                generators.push(
                    (0..r)
                        .map(|k| Rational::from((smith.col_transform[k][i].clone(), Integer::from(d))))
                        .collect(),
                );
            }
        }
        DiscGroup { lattice: lattice.clone(), divisors, generators }
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    /// Invariant factors `d_1 | d_2 | ...`, each greater than one.
    pub fn elementary_divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    /// Exponent of the group (lcm of the elementary divisors).
    pub fn exponent(&self) -> u64 {
        self.divisors.iter().fold(1, |acc, &d| lcm(acc, d))
    }

    pub fn zero(&self) -> DiscElement {
        self.element_unchecked(vec![0; self.divisors.len()])
    }

    pub fn element(&self, coords: &[u64]) -> Result<DiscElement> {
        if coords.len() != self.divisors.len()
            || coords.iter().zip(&self.divisors).any(|(c, d)| c >= d)
        {
            return Err(Error::CoordinateOutOfRange {
                coords: coords.to_vec(),
                divisors: self.divisors.clone(),
            });
        }
        Ok(self.element_unchecked(coords.to_vec()))
    }

    fn element_unchecked(&self, coords: Vec<u64>) -> DiscElement {
        let rep = self.rep_of(&coords);
        let q = frac(&self.lattice.q(&rep));
        let level = coords
            .iter()
            .zip(&self.divisors)
            .fold(1, |acc, (&c, &d)| lcm(acc, d / crate::arith::gcd(c, d)));
        DiscElement { coords, q, level }
    }

    /// All elements, ordered lexicographically by coordinates.
    pub fn elements(&self) -> Vec<DiscElement> {
        let total = self.order();
        (0..total).map(|i| self.element_unchecked(self.coords_of_index(i))).collect()
    }

    /// Position of an element in [`DiscGroup::elements`].
    pub fn index_of(&self, g: &DiscElement) -> usize {
        g.coords.iter().zip(&self.divisors).fold(0u64, |acc, (&c, &d)| acc * d + c) as usize
    }

    fn coords_of_index(&self, mut i: u64) -> Vec<u64> {
        let mut coords = vec![0; self.divisors.len()];
        for (k, &d) in self.divisors.iter().enumerate().rev() {
            coords[k] = i % d;
            i /= d;
        }
        coords
    }

    fn rep_of(&self, coords: &[u64]) -> Vec<Rational> {
        let mut v = vec![Rational::new(); self.lattice.rank()];
        for (c, g) in coords.iter().zip(&self.generators) {
            if *c != 0 {
                for (vk, gk) in v.iter_mut().zip(g) {
                    *vk += Rational::from(gk * *c);
                }
            }
        }
        v
    }

    /// The fixed representative of `gamma` in `L'`, in lattice-basis coordinates.
    pub fn representative(&self, g: &DiscElement) -> Vec<Rational> {
        self.rep_of(&g.coords)
    }

    pub fn add(&self, a: &DiscElement, b: &DiscElement) -> DiscElement {
        let coords =
            a.coords.iter().zip(&b.coords).zip(&self.divisors).map(|((x, y), d)| (x + y) % d).collect();
        self.element_unchecked(coords)
    }

    pub fn neg(&self, a: &DiscElement) -> DiscElement {
        let coords = a.coords.iter().zip(&self.divisors).map(|(x, d)| (d - x) % d).collect();
        self.element_unchecked(coords)
    }

    pub fn scale(&self, a: &DiscElement, k: u64) -> DiscElement {
        let coords = a.coords.iter().zip(&self.divisors).map(|(x, d)| (x * (k % d)) % d).collect();
        self.element_unchecked(coords)
    }

    /// `q(gamma) mod 1` in `[0, 1)`.
    pub fn q_value(&self, g: &DiscElement) -> Rational {
        g.q.clone()
    }

    /// `(gamma, delta) mod 1` in `[0, 1)`.
    pub fn bilinear_value(&self, a: &DiscElement, b: &DiscElement) -> Rational {
        frac(&self.lattice.bilinear(&self.rep_of(&a.coords), &self.rep_of(&b.coords)))
    }

    pub fn level(&self, g: &DiscElement) -> u64 {
        g.level
    }
}
