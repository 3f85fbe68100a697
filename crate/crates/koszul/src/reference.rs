//! Dense brute-force reference implementations used to cross-check the
//! sparse engine.
//!
//! Everything in this module is deliberately naive and shares no code with
//! [`crate::matrix`]: dense `Vec<Vec<BigInt>>` storage, first-nonzero pivots
//! in row-major order, rational back-substitution for solving.  The test
//! suites run both routes and compare results; keep it that way.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type DenseInt = Vec<Vec<BigInt>>;

pub fn dense_from_i64(data: &[&[i64]]) -> DenseInt {
    data.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

fn shape(a: &DenseInt) -> (usize, usize) {
    (a.len(), a.first().map_or(0, |r| r.len()))
}

fn swap_rows(a: &mut DenseInt, i: usize, j: usize) {
    a.swap(i, j);
}

fn swap_cols(a: &mut DenseInt, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn negate_row(a: &mut DenseInt, i: usize) {
    for v in a[i].iter_mut() {
        *v = -v.clone();
    }
}

/// row[i] -= q * row[t]
fn row_sub(a: &mut DenseInt, i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[t].clone();
    for (x, s) in a[i].iter_mut().zip(src.iter()) {
        *x -= q * s;
    }
}

/// col[j] -= q * col[t]
fn col_sub(a: &mut DenseInt, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let s = row[t].clone();
        row[j] -= q * s;
    }
}

/// Invariant factors by plain textbook Smith reduction.  Returns the full
/// diagonal (including ones and zeros) of the reduced matrix.
pub fn dense_smith_diagonal(mut a: DenseInt) -> Vec<BigInt> {
    let (m, n) = shape(&a);
    let steps = m.min(n);
    for t in 0..steps {
        // first nonzero in the working block, scanning row-major
        let mut found = None;
        'scan: for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() {
                    found = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((pi, pj)) = found else { break };
        swap_rows(&mut a, t, pi);
        swap_cols(&mut a, t, pj);

        'improve: loop {
            if a[t][t].is_negative() {
                negate_row(&mut a, t);
            }
            for i in (t + 1)..m {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t]; // truncated
                    row_sub(&mut a, i, t, &q);
                    if !a[i][t].is_zero() {
                        swap_rows(&mut a, t, i);
                        continue 'improve;
                    }
                }
            }
            for j in (t + 1)..n {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_sub(&mut a, j, t, &q);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, t, j);
                        continue 'improve;
                    }
                }
            }
            let mut offender = None;
            'div: for i in (t + 1)..m {
                for j in (t + 1)..n {
                    if !a[i][j].is_zero() && !(&a[i][j] % &a[t][t]).is_zero() {
                        offender = Some(i);
                        break 'div;
                    }
                }
            }
            if let Some(i) = offender {
                let one = BigInt::one();
                // row t += row i, then keep reducing
                let src = a[i].clone();
                for (x, s) in a[t].iter_mut().zip(src.iter()) {
                    *x += &one * s;
                }
                continue 'improve;
            }
            break;
        }
    }
    (0..steps).map(|i| a[i][i].clone()).collect()
}

/// Kernel lattice basis of an integer matrix, as columns, via integer row
/// reduction of the transpose carried along an identity block.  The column
/// count is explicit so zero-row matrices keep their shape.
pub fn dense_kernel(a: &DenseInt, cols: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let n = cols;
    assert!(a.iter().all(|r| r.len() == n));
    // work on the transpose: rows index the original columns
    let mut t: DenseInt = (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect();
    let mut u: DenseInt = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r = 0usize;
    for col in 0..m {
        if r >= n {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..n {
                if !t[i][col].is_zero() {
                    let mag = t[i][col].abs();
                    match &best {
                        None => best = Some((i, mag)),
                        Some((_, bm)) if mag < *bm => best = Some((i, mag)),
                        _ => {}
                    }
                }
            }
            let Some((pi, _)) = best else { break };
            swap_rows(&mut t, r, pi);
            swap_rows(&mut u, r, pi);
            let mut leftover = false;
            for i in (r + 1)..n {
                if !t[i][col].is_zero() {
                    let q = num_integer::Integer::div_floor(&t[i][col], &t[r][col]);
                    row_sub(&mut t, i, r, &q);
                    row_sub(&mut u, i, r, &q);
                    if !t[i][col].is_zero() {
                        leftover = true;
                    }
                }
            }
            if !leftover {
                break;
            }
        }
        if !t[r][col].is_zero() {
            r += 1;
        }
    }
    // rows r..n of t are zero; matching rows of u span the kernel
    let mut basis = Vec::new();
    for i in r..n {
        debug_assert!(t[i].iter().all(|x| x.is_zero()));
        basis.push(u[i].clone());
    }
    basis
}

/// Unique rational solution of `basis * y = v` for a full-column-rank basis;
/// `None` when inconsistent or non-integral.
pub fn dense_solve_integral(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = basis.len(); // number of basis vectors (columns)
    let n = v.len();
    if k == 0 {
        return if v.iter().all(|x| x.is_zero()) { Some(vec![]) } else { None };
    }
    assert!(basis.iter().all(|b| b.len() == n));
    // augmented rational system, columns = basis vectors
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| BigRational::from_integer(b[i].clone())).collect();
            row.push(BigRational::from_integer(v[i].clone()));
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r = 0usize;
    for c in 0..k {
        let mut found = None;
        for i in r..n {
            if !aug[i][c].is_zero() {
                found = Some(i);
                break;
            }
        }
        let Some(pi) = found else { continue };
        aug.swap(r, pi);
        let inv = aug[r][c].recip();
        for x in aug[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                let src = aug[r].clone();
                for (x, s) in aug[i].iter_mut().zip(src.iter()) {
                    *x -= &f * s;
                }
            }
        }
        pivot_rows.push((r, c));
        r += 1;
    }
    // inconsistent rows
    for row in aug.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    if pivot_rows.len() < k {
        // basis was not full column rank; reference inputs never do this
        return None;
    }
    let mut y = vec![BigInt::zero(); k];
    for (row, col) in pivot_rows {
        let val = &aug[row][k];
        if !val.denom().is_one() {
            return None;
        }
        y[col] = val.numer().clone();
    }
    Some(y)
}

/// Invariants of `ker(d_out) / im(d_in)` computed entirely by the dense
/// route: dense kernel, dense rational coordinates, dense Smith diagonal.
/// Returns `(free_rank, torsion)` with torsion in divisibility order.
pub fn dense_subquotient_invariants(
    d_in: &DenseInt,
    d_out: &DenseInt,
    mid_dim: usize,
) -> (usize, Vec<BigInt>) {
    let kernel = dense_kernel(d_out, mid_dim);
    let k = kernel.len();
    assert_eq!(d_in.len(), mid_dim);
    let a_cols = d_in.first().map_or(0, |r| r.len());
    let mut coords: DenseInt = vec![vec![BigInt::zero(); a_cols]; k];
    for j in 0..a_cols {
        let col: Vec<BigInt> = d_in.iter().map(|row| row[j].clone()).collect();
        let y = dense_solve_integral(&kernel, &col)
            .expect("columns of d_in must be cycles when d_out * d_in = 0");
        for (i, val) in y.into_iter().enumerate() {
            coords[i][j] = val;
        }
    }
    let diag = dense_smith_diagonal(coords);
    let nonzero: Vec<BigInt> = diag.iter().filter(|d| !d.is_zero()).cloned().collect();
    let free_rank = k - nonzero.len();
    let torsion: Vec<BigInt> = nonzero.into_iter().filter(|d| d > &BigInt::one()).collect();
    (free_rank, torsion)
}

/// Fraction-free determinant (Bareiss), used to confirm unimodularity of
/// transform matrices in property tests.
pub fn dense_determinant(a: &DenseInt) -> BigInt {
    let (m, n) = shape(a);
    assert_eq!(m, n);
    if m == 0 {
        return BigInt::one();
    }
    let mut w = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for t in 0..(m - 1) {
        if w[t][t].is_zero() {
            let mut found = None;
            for i in (t + 1)..m {
                if !w[i][t].is_zero() {
                    found = Some(i);
                    break;
                }
            }
            match found {
                Some(i) => {
                    w.swap(t, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (t + 1)..m {
            for j in (t + 1)..m {
                let num = &w[i][j] * &w[t][t] - &w[i][t] * &w[t][j];
                w[i][j] = num / &prev;
            }
            w[i][t] = BigInt::zero();
        }
        prev = w[t][t].clone();
    }
    sign * w[m - 1][m - 1].clone()
}
