//! Dense exact linear algebra over `Q` and determinants over `Z`.

use crate::num::{rat_int, Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<Int>>;
pub type RatMatrix = Vec<Vec<Rat>>;

pub fn identity_int(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

pub fn to_rat_matrix(m: &[Vec<Int>]) -> RatMatrix {
    m.iter().map(|r| r.iter().map(rat_int).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul_int(a: &[Vec<Int>], b: &[Vec<Int>]) -> IntMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Fraction-free Bareiss determinant of a square integer matrix.
pub fn det_int(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
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
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_int(m: &[Vec<Int>]) -> usize {
    let mut a = to_rat_matrix(m);
    rref(&mut a).len()
}

/// Solve `A x = b` for square nonsingular `A`.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse(a: &[Vec<Rat>]) -> Option<RatMatrix> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients `λ` with `Σ λ_i rays[i] = p`, for `n` independent rays in `Q^n`.
pub fn coords_in_basis(rays: &[Vec<Int>], p: &[Rat]) -> Option<Vec<Rat>> {
    let n = p.len();
    let a: RatMatrix = (0..n)
        .map(|r| rays.iter().map(|v| rat_int(&v[r])).collect())
        .collect();
    solve(&a, p)
}

/// Row vector `y` with `y · M = x` (i.e. coordinates of `x` in the row basis `M`).
pub fn row_coords(basis_rows: &[Vec<Rat>], x: &[Rat]) -> Option<Vec<Rat>> {
    solve(&transpose(basis_rows), x)
}

/// Extended gcd: returns `(g, x, y)` with `x a + y b = g ≥ 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ivec, rat};

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![ivec(&[2, -1, 0]), ivec(&[1, 3, 4]), ivec(&[0, 5, -2])];
        // 2(3*-2 - 20) + 1(-2 - 0) = -52 - 2
        assert_eq!(det_int(&m), int(-54));
        assert_eq!(det_int(&[ivec(&[0, 1]), ivec(&[1, 0])]), int(-1));
        assert_eq!(det_int(&[ivec(&[1, 2]), ivec(&[2, 4])]), int(0));
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(3, 1), rat(4, 1)]];
        let x = solve(&a, &[rat(5, 1), rat(6, 1)]).unwrap();
        assert_eq!(x, vec![rat(-4, 1), rat(9, 2)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0], vec![rat(-2, 1), rat(1, 1)]);
        assert_eq!(inv[1], vec![rat(3, 2), rat(-1, 2)]);
        assert!(inverse(&[vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]]).is_none());
    }
}
