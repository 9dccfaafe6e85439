//! Smith normal form over the integers with the column transform tracked.

use rug::Integer;

pub(crate) struct Smith {
    /// Diagonal entries d_1 | d_2 | ... (non-negative, ascending).
    pub diagonal: Vec<Integer>,
    /// Unimodular V with U * A * V = diag(d).
    pub col_transform: Vec<Vec<Integer>>,
}

pub(crate) fn smith_normal_form(a: &[Vec<i64>]) -> Smith {
    let n = a.len();
    let mut m: Vec<Vec<Integer>> = a
        .iter()
        .map(|row| row.iter().map(|&x| Integer::from(x)).collect())
        .collect();
    let mut v: Vec<Vec<Integer>> = (0..n)
        .map(|i| (0..n).map(|j| Integer::from((i == j) as i32)).collect())
        .collect();

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0
                        && best.map_or(true, |(bi, bj)| m[i][j].cmp_abs(&m[bi][bj]).is_lt())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            m.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);

            let pivot = m[t][t].clone();
            let mut dirty = false;
            for i in t + 1..n {
                if m[i][t] != 0 {
                    let q = Integer::from(&m[i][t] / &pivot);
                    for k in t..n {
                        let sub = Integer::from(&q * &m[t][k]);
                        m[i][k] -= sub;
                    }
                    dirty |= m[i][t] != 0;
                }
            }
            for j in t + 1..n {
                if m[t][j] != 0 {
                    let q = Integer::from(&m[t][j] / &pivot);
                    col_axpy(&mut m, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    dirty |= m[t][j] != 0;
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility against the rest of the block
            let bad_row = (t + 1..n).find(|&i| (t + 1..n).any(|j| !m[i][j].is_divisible(&pivot)));
            match bad_row {
                Some(i) => {
                    for k in t..n {
                        let add = m[i][k].clone();
                        m[t][k] += add;
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for k in t..n {
                m[t][k] = Integer::from(-&m[t][k]);
            }
        }
    }
    Smith {
        diagonal: (0..n).map(|i| m[i][i].clone()).collect(),
        col_transform: v,
    }
}

fn swap_cols(m: &mut [Vec<Integer>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// column `dst` -= q * column `src`
fn col_axpy(m: &mut [Vec<Integer>], dst: usize, src: usize, q: &Integer) {
    for row in m.iter_mut() {
        let sub = Integer::from(q * &row[src]);
        row[dst] -= sub;
    }
}
