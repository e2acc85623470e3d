//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::scalars::Rat;

pub type Matrix = Vec<Vec<Rat>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rat::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![Rat::zero(); n];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b[k].iter().enumerate() {
                    if !y.is_zero() {
                        out[j] += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, id)| r.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Solves `s_k = a ⊕ s_i ⊕ s_j` style constraints over GF(2). Each equation
/// is a set of variable indices plus a right-hand bit.
pub fn solve_gf2(num_vars: usize, equations: &[(Vec<usize>, bool)]) -> Option<Vec<bool>> {
    let words = num_vars.div_ceil(64) + 1;
    let rhs_bit = num_vars;
    let mut rows: Vec<Vec<u64>> = equations
        .iter()
        .map(|(vars, b)| {
            let mut row = vec![0u64; words];
            for &v in vars {
                row[v / 64] ^= 1 << (v % 64);
            }
            if *b {
                row[rhs_bit / 64] ^= 1 << (rhs_bit % 64);
            }
            row
        })
        .collect();
    let get = |row: &Vec<u64>, i: usize| row[i / 64] >> (i % 64) & 1 == 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..num_vars {
        let Some(p) = (r..rows.len()).find(|&i| get(&rows[i], c)) else {
            continue;
        };
        rows.swap(r, p);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && get(row, c) {
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| get(row, rhs_bit)) {
        return None;
    }
    let mut x = vec![false; num_vars];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = get(&rows[i], rhs_bit);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
        assert_eq!(inverse(&identity(4)).unwrap(), identity(4));
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a), 1);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let prod = mat_mul(&a, &v.iter().map(|x| vec![x.clone()]).collect());
            assert!(prod.iter().all(|r| r[0].is_zero()));
        }
    }

    #[test]
    fn linear_solve() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[int(3), int(1)]).unwrap(), vec![int(2), int(1)]);
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]).is_none());
        let x = solve(&m(&[&[2, 0]]), &[int(1)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), int(0)]);
    }

    #[test]
    fn gf2() {
        // x0 ^ x1 = 1, x1 ^ x2 = 0, x0 = 1
        let eqs = vec![(vec![0, 1], true), (vec![1, 2], false), (vec![0], true)];
        assert_eq!(solve_gf2(3, &eqs).unwrap(), vec![true, false, false]);
        assert!(solve_gf2(1, &[(vec![0], true), (vec![0], false)]).is_none());
        // x ^ x cancels to the empty equation 0 = 1
        assert!(solve_gf2(1, &[(vec![0, 0], true)]).is_none());
    }
}
