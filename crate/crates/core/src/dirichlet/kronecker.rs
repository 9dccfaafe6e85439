use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::error::{Error, Result};

/// Kronecker symbol `(d/a)`, including `(d/2)` and `(d/-1)`.
pub fn kronecker(d: i64, a: i64) -> i32 {
    if a == 0 {
        return (d == 1 || d == -1) as i32;
    }
    let mut sign = 1;
    let mut a = a;
    if a < 0 {
        a = -a;
        if d < 0 {
            sign = -sign;
        }
    }
    let tz = a.trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        a >>= tz;
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    sign * jacobi(d.rem_euclid(a), a)
}

/// Jacobi symbol `(a/n)` for odd positive `n` and `0 <= a < n`.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// `D = D0 f^2` with `D0` a fundamental discriminant (or 1) and `f > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discriminant {
    pub d: i64,
    pub d0: i64,
    pub f: i64,
}

impl Discriminant {
    /// 0 if `D0 > 0`, 1 if `D0 < 0`.
    pub fn delta(&self) -> u32 {
        (self.d0 < 0) as u32
    }

    pub fn chi(&self, a: i64) -> i32 {
        kronecker(self.d0, a)
    }
}

pub fn is_discriminant(d: i64) -> bool {
    d != 0 && matches!(d.rem_euclid(4), 0 | 1)
}

pub fn is_fundamental(d: i64) -> bool {
    is_discriminant(d) && fundamental_decomposition(d).map(|x| x.f == 1).unwrap_or(false)
}

pub fn fundamental_decomposition(d: i64) -> Result<Discriminant> {
    if !is_discriminant(d) {
        return Err(Error::NotDiscriminant(d.to_string()));
    }
    let mut core: i64 = d.signum();
    let mut square: i64 = 1;
    for (p, e) in factorize(d.unsigned_abs()) {
        let p = p as i64;
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    if core.rem_euclid(4) == 1 {
        Ok(Discriminant { d, d0: core, f: square })
    } else {
        debug_assert!(square % 2 == 0);
        Ok(Discriminant { d, d0: 4 * core, f: square / 2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(7, 1), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, 4), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-4, -1), -1);
        assert_eq!(kronecker(12, 3), 0);
    }

    #[test]
    fn kronecker_matches_gmp() {
        for d in -60i64..=60 {
            for a in -60i64..=60 {
                let want = Integer::from(d).kronecker(&Integer::from(a));
                assert_eq!(kronecker(d, a), want, "({d}/{a})");
            }
        }
    }

    #[test]
    fn decomposition() {
        let t = |d| {
            let x = fundamental_decomposition(d).unwrap();
            (x.d0, x.f)
        };
        assert_eq!(t(-3), (-3, 1));
        assert_eq!(t(12), (12, 1));
        assert_eq!(t(45), (5, 3));
        assert_eq!(t(-12), (-3, 2));
        assert_eq!(t(1), (1, 1));
        assert_eq!(t(4), (1, 2));
        assert_eq!(t(-16), (-4, 2));
        assert_eq!(t(32), (8, 2));
        assert!(fundamental_decomposition(7).is_err());
        assert!(fundamental_decomposition(0).is_err());
    }

    #[test]
    fn fundamental_list() {
        let fund: Vec<i64> = (-20..=20).filter(|&d| is_fundamental(d)).collect();
        assert_eq!(fund, vec![-20, -19, -15, -11, -8, -7, -4, -3, 1, 5, 8, 12, 13, 17]);
    }
}
