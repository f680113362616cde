//! Small exact integer matrix routines: Hermite-style row reduction,
//! integer kernels, and determinants. Enough for fixing lattice bases
//! and checking Gram matrices; not a general linear algebra library.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type Row = Vec<BigInt>;

/// Reduce the rows of `mat` by unimodular row operations to a basis of
/// the row span (Hermite normal form up to the usual off-pivot
/// reduction). Zero rows are dropped.
pub fn row_basis(mut mat: Vec<Row>) -> Vec<Row> {
    if mat.is_empty() {
        return mat;
    }
    let ncols = mat[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= mat.len() {
            break;
        }
        loop {
            // row with smallest nonzero |entry| in this column
            let mut best: Option<usize> = None;
            for r in pivot_row..mat.len() {
                if !mat[r][col].is_zero() {
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if mat[r][col].abs() < mat[b][col].abs() {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            mat.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..mat.len() {
                if !mat[r][col].is_zero() {
                    let q = div_round(&mat[r][col], &mat[pivot_row][col]);
                    for c in 0..ncols {
                        let sub = &q * &mat[pivot_row][c];
                        mat[r][c] -= sub;
                    }
                    if !mat[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !mat[pivot_row][col].is_zero() {
            if mat[pivot_row][col].is_negative() {
                for c in 0..ncols {
                    mat[pivot_row][c] = -mat[pivot_row][c].clone();
                }
            }
            // reduce entries above the pivot
            for r in 0..pivot_row {
                if !mat[r][col].is_zero() {
                    let q = div_floor(&mat[r][col], &mat[pivot_row][col]);
                    for c in 0..ncols {
                        let sub = &q * &mat[pivot_row][c];
                        mat[r][c] -= sub;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    mat.truncate(pivot_row);
    mat
}

/// Basis of { x in Z^n : x A = 0 } for an n x m matrix given as n rows.
pub fn left_kernel(mat: &[Row]) -> Vec<Row> {
    let n = mat.len();
    let m = if n == 0 { 0 } else { mat[0].len() };
    // augment each row with the identity and reduce on the first m columns
    let mut aug: Vec<Row> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { BigInt::from(1) } else { BigInt::zero() });
            }
            r
        })
        .collect();
    // same elimination as row_basis, but restricted to the first m columns
    let ncols = m;
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= aug.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..aug.len() {
                if !aug[r][col].is_zero() {
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if aug[r][col].abs() < aug[b][col].abs() {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            aug.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..aug.len() {
                if !aug[r][col].is_zero() {
                    let q = div_round(&aug[r][col], &aug[pivot_row][col]);
                    for c in 0..m + n {
                        let sub = &q * &aug[pivot_row][c];
                        aug[r][c] -= sub;
                    }
                    if !aug[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !aug[pivot_row][col].is_zero() {
            pivot_row += 1;
        }
    }
    aug[pivot_row..]
        .iter()
        .map(|r| r[m..].to_vec())
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(mat: &[Row]) -> BigInt {
    let n = mat.len();
    let mut m: Vec<Row> = mat.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if sign < 0 {
        -m[n - 1][n - 1].clone()
    } else {
        m[n - 1][n - 1].clone()
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer quotient, keeps entries small during reduction
    let two_a = 2 * a;
    let q = num_integer::Integer::div_floor(&two_a, &(2 * b.clone()));
    let r: BigInt = a - &q * b;
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Row> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn row_basis_rank() {
        let b = row_basis(big(&[&[2, 0], &[0, 3], &[2, 3], &[4, 6]]));
        assert_eq!(b.len(), 2);
        let b = row_basis(big(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn kernel_of_projection() {
        // map (x,y,z) -> x+y+z; kernel rank 2, each vector sums to 0
        let a = big(&[&[1], &[1], &[1]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&big(&[&[3, 1], &[1, 2]])), BigInt::from(5));
        assert_eq!(
            determinant(&big(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]])),
            BigInt::from(8)
        );
        assert_eq!(determinant(&big(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
