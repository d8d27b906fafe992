//! Integer matrices: Hermite and Smith normal forms, kernels, lattice
//! membership; small exact rational linear algebra.
//!
//! Convention: vectors are rows and act on the left, so the lattice spanned
//! by a matrix is its row span.

use super::int::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<Int>>;
pub type RMat = Vec<Vec<Rat>>;

pub fn zeros(r: usize, c: usize) -> IMat {
    vec![vec![Int::zero(); c]; r]
}

pub fn identity(n: usize) -> IMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Int::one();
    }
    m
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (ra, ca) = (a.len(), a[0].len());
    let cb = b[0].len();
    assert_eq!(ca, b.len());
    let mut out = zeros(ra, cb);
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cb {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn row_mat_mul(x: &[Int], a: &IMat) -> Vec<Int> {
    assert_eq!(x.len(), a.len());
    if a.is_empty() {
        return vec![];
    }
    let c = a[0].len();
    let mut out = vec![Int::zero(); c];
    for (xi, row) in x.iter().zip(a.iter()) {
        if xi.is_zero() {
            continue;
        }
        for j in 0..c {
            out[j] += xi * &row[j];
        }
    }
    out
}

/// Row Hermite normal form with transform: returns `(h, u)` with `u*a = h`,
/// `u` unimodular, `h` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hnf_with_transform(a: &IMat) -> (IMat, IMat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h = a.clone();
    let mut u = identity(rows);
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // Clear the column below pivot_row by gcd steps.
        loop {
            // Find row with smallest nonzero |entry| in this column.
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if !h[r][col].is_zero()
                    && best.is_none_or(|b| h[r][col].abs() < h[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut done = true;
            for r in (pivot_row + 1)..rows {
                if h[r][col].is_zero() {
                    continue;
                }
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let t = &q * &h[pivot_row][j];
                        h[r][j] -= t;
                    }
                    for j in 0..rows {
                        let t = &q * &u[pivot_row][j];
                        u[r][j] -= t;
                    }
                }
                if !h[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            for j in 0..cols {
                h[pivot_row][j] = -h[pivot_row][j].clone();
            }
            for j in 0..rows {
                u[pivot_row][j] = -u[pivot_row][j].clone();
            }
        }
        // Reduce entries above the pivot.
        for r in 0..pivot_row {
            let q = h[r][col].div_floor(&h[pivot_row][col]);
            if !q.is_zero() {
                for j in 0..cols {
                    let t = &q * &h[pivot_row][j];
                    h[r][j] -= t;
                }
                for j in 0..rows {
                    let t = &q * &u[pivot_row][j];
                    u[r][j] -= t;
                }
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

pub fn hnf(a: &IMat) -> IMat {
    hnf_with_transform(a).0
}

/// Nonzero rows of the HNF: a canonical basis of the row lattice.
pub fn lattice_basis(a: &IMat) -> IMat {
    hnf(a)
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Basis of the left kernel `{x : x*a = 0}`.
pub fn left_kernel(a: &IMat) -> IMat {
    let (h, u) = hnf_with_transform(a);
    h.iter()
        .zip(u.into_iter())
        .filter(|(hr, _)| hr.iter().all(|x| x.is_zero()))
        .map(|(_, ur)| ur)
        .collect()
}

/// Solve `x*a = b` over the integers, if possible.
pub fn solve_left(a: &IMat, b: &[Int]) -> Option<Vec<Int>> {
    let (h, u) = hnf_with_transform(a);
    let rows = h.len();
    let cols = b.len();
    assert_eq!(a[0].len(), cols);
    let mut y = vec![Int::zero(); rows];
    let mut rem: Vec<Int> = b.to_vec();
    for r in 0..rows {
        // pivot column of row r
        let Some(pc) = h[r].iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let (q, s) = rem[pc].div_rem(&h[r][pc]);
        if !s.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for j in 0..cols {
                let t = &q * &h[r][j];
                rem[j] -= t;
            }
        }
        y[r] = q;
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(row_mat_mul(&y, &u))
}

/// Smith normal form data: `u * a * v = diag(d)` with `u, v` unimodular.
pub struct Snf {
    pub d: Vec<Int>,
    pub u: IMat,
    pub v: IMat,
    /// Inverse of `v`, tracked alongside.
    pub v_inv: IMat,
    pub rows: usize,
    pub cols: usize,
}

pub fn snf(a: &IMat) -> Snf {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);

    let n = rows.min(cols);
    let mut t = 0usize;
    while t < n {
        // Find a nonzero entry (i, j) with i, j >= t, of minimal |.|
        let mut piv: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && piv.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            // Column swap on v: v gets columns swapped; v_inv gets rows swapped.
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            v_inv.swap(t, pj);
        }
        let mut clean = true;
        // Clear column t.
        for i in (t + 1)..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&m[t][t]);
            if !q.is_zero() {
                for j in 0..cols {
                    let x = &q * &m[t][j];
                    m[i][j] -= x;
                }
                for j in 0..rows {
                    let x = &q * &u[t][j];
                    u[i][j] -= x;
                }
            }
            if !m[i][t].is_zero() {
                clean = false;
            }
        }
        // Clear row t.
        for j in (t + 1)..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&m[t][t]);
            if !q.is_zero() {
                // col_j -= q * col_t  (applied to m and v; inverse op on v_inv)
                for row in m.iter_mut() {
                    let x = &q * &row[t];
                    row[j] -= x;
                }
                for row in v.iter_mut() {
                    let x = &q * &row[t];
                    row[j] -= x;
                }
                for jj in 0..cols {
                    let x = &q * &v_inv[j][jj];
                    v_inv[t][jj] += x;
                }
            }
            if !m[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // repeat with smaller pivot
        }
        // Ensure divisibility of the rest by m[t][t].
        let mut needs_restart = false;
        'outer: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    // row_t += row_i, then restart elimination at t
                    for jj in 0..cols {
                        let x = m[i][jj].clone();
                        m[t][jj] += x;
                    }
                    for jj in 0..rows {
                        let x = u[i][jj].clone();
                        u[t][jj] += x;
                    }
                    needs_restart = true;
                    break 'outer;
                }
            }
        }
        if needs_restart {
            continue;
        }
        if m[t][t].is_negative() {
            for j in 0..cols {
                m[t][j] = -m[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    let d = (0..n).map(|i| m[i][i].clone()).collect();
    Snf {
        d,
        u,
        v,
        v_inv,
        rows,
        cols,
    }
}

// ---- rational linear algebra ----

pub fn rmat_from_int(a: &IMat) -> RMat {
    a.iter()
        .map(|r| r.iter().map(|x| Rat::from(x.clone())).collect())
        .collect()
}

pub fn det_rat(a: &RMat) -> Rat {
    let n = a.len();
    if n == 0 {
        return Rat::one();
    }
    assert_eq!(n, a[0].len());
    let mut m = a.clone();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col].clone();
        let inv = m[col][col].recip();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..n {
                let t = &f * &m[col][j];
                m[r][j] -= t;
            }
        }
    }
    det
}

/// Solve the square system `a * x = b` (column vector convention).
pub fn solve_rat(a: &RMat, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut m: RMat = a
        .iter()
        .zip(b.iter())
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let inv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..=n {
                let t = &f * &m[col][j];
                m[r][j] -= t;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::int;

    fn im(rows: &[&[i64]]) -> IMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_and_kernel() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (h, u) = hnf_with_transform(&a);
        assert_eq!(mat_mul(&u, &a), h);
        // kernel of a singular matrix
        let b = im(&[&[1, 2], &[2, 4], &[3, 6]]);
        let k = left_kernel(&b);
        assert_eq!(k.len(), 2);
        for row in &k {
            let prod = row_mat_mul(row, &b);
            assert!(prod.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn snf_diag() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let s = snf(&a);
        let prod = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_eq!(prod[i][j], s.d[i]);
                } else {
                    assert!(prod[i][j].is_zero());
                }
            }
        }
        // v * v_inv = identity
        assert_eq!(mat_mul(&s.v, &s.v_inv), identity(3));
        // divisibility chain
        for w in s.d.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn solve_membership() {
        let a = im(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            solve_left(&a, &[int(4), int(3)]),
            Some(vec![int(2), int(1)])
        );
        assert!(solve_left(&a, &[int(1), int(0)]).is_none());
    }

    #[test]
    fn rational_det_solve() {
        let a: RMat = rmat_from_int(&im(&[&[2, 1], &[1, 1]]));
        assert_eq!(det_rat(&a), Rat::from(int(1)));
        let x = solve_rat(&a, &[Rat::from(int(3)), Rat::from(int(2))]).unwrap();
        assert_eq!(x, vec![Rat::from(int(1)), Rat::from(int(1))]);
    }
}
