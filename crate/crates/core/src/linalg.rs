//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Matrices are `Vec<Vec<_>>` in row-major order. Everything here is sized for
//! Picard lattices (rank at most 9), so plain cubic elimination is used
//! throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_small(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `m · v` for an integer matrix.
pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot_i64(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Divides by the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
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

/// Bareiss elimination in `i128`; `None` on overflow.
pub fn det_checked(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(i) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Some(0);
            };
            a.swap(i, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

pub fn det_i64(m: &[Vec<i64>]) -> BigInt {
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| to_big(r)).collect();
    det(&big)
}

/// Row-echelon form over the rationals. Returns the reduced rows and pivot columns.
fn echelon(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

fn to_rat_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    // Fraction-free elimination keeps this fast for the many rank checks the
    // cone code performs.
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[r][c].clone(), a[i][c].clone());
            for j in c..cols {
                let v = &a[i][j] * &f - &a[r][j] * &g;
                a[i][j] = v;
            }
            let row = primitive(&a[i]);
            a[i] = row;
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| to_big(r)).collect();
    rank(&big)
}

/// Inverse of a square integer matrix over the rationals.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let aug: Vec<Vec<Rat>> = to_rat_rows(m)
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let (red, pivots) = echelon(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `Σ x_j · columns[j] = target`, if a solution exists.
pub fn solve_combination(columns: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<Rat>> {
    let k = columns.len();
    let n = target.len();
    let aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = columns.iter().map(|c| Rat::from_integer(c[i].clone())).collect();
            row.push(Rat::from_integer(target[i].clone()));
            row
        })
        .collect();
    let (red, pivots) = echelon(&aug);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (row, &c) in red.iter().zip(&pivots) {
        x[c] = row[k].clone();
    }
    Some(x)
}

/// Saturated basis of the integer kernel `{v ∈ Zⁿ : rows · v = 0}`, returned
/// as vectors in row Hermite normal form.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    // Unimodular column operations bring `rows` to column-echelon form; the
    // columns of the accumulated transform that end up zero span the kernel.
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| to_big(r)).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    let mut pivot = 0;
    for i in 0..a.len() {
        if pivot == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (pivot..n).filter(|&j| !a[i][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| a[i][j].abs()).expect("nonempty");
            swap_cols(&mut a, &mut u, p, pivot);
            let mut done = true;
            for j in pivot + 1..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let q = a[i][j].div_floor(&a[i][pivot]);
                add_col_multiple(&mut a, &mut u, j, pivot, &(-q));
                if !a[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[i][pivot].is_zero() {
            pivot += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = (pivot..n)
        .map(|j| u.iter().map(|row| row[j].clone()).collect())
        .collect();
    hermite_rows(basis)
        .into_iter()
        .map(|v| to_small(&v).expect("kernel entries fit in i64"))
        .collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut().chain(u.iter_mut()) {
        row.swap(x, y);
    }
}

/// column[dst] += f · column[src]
fn add_col_multiple(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        let t = &row[src] * f;
        row[dst] += t;
    }
}

/// Row Hermite normal form of a set of linearly independent integer vectors:
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).expect("nonempty");
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                for j in 0..cols {
                    let t = &rows[r][j] * &q;
                    rows[i][j] -= t;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if q.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let t = &rows[r][j] * &q;
                    rows[i][j] -= t;
                }
            }
            r += 1;
        }
    }
    rows
}

/// Is the symmetric matrix positive definite? (Leading principal minors.)
pub fn is_positive_definite(m: &[Vec<BigInt>]) -> bool {
    (1..=m.len()).all(|k| {
        let minor: Vec<Vec<BigInt>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(&minor).is_positive()
    })
}
