//! Smith normal form of small integer matrices.

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry nonnegative and dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub d: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub u_inv: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
}

impl Smith {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i128> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<i128>], x: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Computes the Smith normal form of an `m x n` matrix.
pub fn smith_normal_form(a: &[Vec<i128>]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut d: Vec<Vec<i128>> = a.to_vec();
    let mut u = identity(m);
    let mut u_inv = identity(m);
    let mut v = identity(n);

    // Row operations act on d and u from the left; u_inv receives the
    // inverse column operation so that u_inv * u = I throughout.
    let swap_rows = |d: &mut Vec<Vec<i128>>,
                     u: &mut Vec<Vec<i128>>,
                     ui: &mut Vec<Vec<i128>>,
                     i: usize,
                     j: usize| {
        d.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i += c * row_j
    let add_row = |d: &mut Vec<Vec<i128>>,
                   u: &mut Vec<Vec<i128>>,
                   ui: &mut Vec<Vec<i128>>,
                   i: usize,
                   j: usize,
                   c: i128| {
        for k in 0..d[i].len() {
            d[i][k] += c * d[j][k];
        }
        for k in 0..u[i].len() {
            u[i][k] += c * u[j][k];
        }
        for row in ui.iter_mut() {
            row[j] -= c * row[i];
        }
    };
    let negate_row =
        |d: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, i: usize| {
            for x in d[i].iter_mut() {
                *x = -*x;
            }
            for x in u[i].iter_mut() {
                *x = -*x;
            }
            for row in ui.iter_mut() {
                row[i] = -row[i];
            }
        };
    let swap_cols = |d: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in d.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_i += c * col_j
    let add_col = |d: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize, c: i128| {
        for row in d.iter_mut() {
            row[i] += c * row[j];
        }
        for row in v.iter_mut() {
            row[i] += c * row[j];
        }
    };

    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut d, &mut u, &mut u_inv, t, pi);
        swap_cols(&mut d, &mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if d[i][t] != 0 {
                    let q = d[i][t].div_euclid(d[t][t]);
                    add_row(&mut d, &mut u, &mut u_inv, i, t, -q);
                    if d[i][t] != 0 {
                        swap_rows(&mut d, &mut u, &mut u_inv, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if d[t][j] != 0 {
                    let q = d[t][j].div_euclid(d[t][t]);
                    add_col(&mut d, &mut v, j, t, -q);
                    if d[t][j] != 0 {
                        swap_cols(&mut d, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the rest of the block by the pivot
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] % d[t][t] != 0);
            match bad {
                Some((i, _)) => add_row(&mut d, &mut u, &mut u_inv, t, i, 1),
                None => break,
            }
        }
        if d[t][t] < 0 {
            negate_row(&mut d, &mut u, &mut u_inv, t);
        }
        t += 1;
    }
    Smith { d, u, u_inv, v }
}
