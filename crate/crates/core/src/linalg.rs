//! Small dense solvers: LU with partial pivoting and a phase-one simplex
//! used as a convex-hull membership test.

use alloc::vec;
use alloc::vec::Vec;

/// Solves `a x = b` for a row-major `n x n` matrix. Returns `None` when the
/// matrix is numerically singular.
pub(crate) fn lu_solve(mut a: Vec<f64>, n: usize, mut b: Vec<f64>) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let scale = a.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v))).max(1e-300);
    for col in 0..n {
        let mut piv = col;
        let mut best = libm::fabs(a[col * n + col]);
        for r in col + 1..n {
            let v = libm::fabs(a[r * n + col]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= 1e-13 * scale {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            a[r * n + col] = 0.0;
            for c in col + 1..n {
                a[r * n + c] -= f * a[col * n + c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r * n + c] * x[c];
        }
        x[r] = s / a[r * n + r];
    }
    Some(x)
}

/// True when `query` is a convex combination of `points` (within `tol`).
pub(crate) fn in_convex_hull(points: &[Vec<f64>], query: &[f64], tol: f64) -> bool {
    let n = points.len();
    if n == 0 {
        return false;
    }
    let dim = query.len();
    let m = dim + 1;
    // Columns: n lambdas, m artificials, rhs.
    let width = n + m + 1;
    let mut t = vec![0.0; m * width];
    for r in 0..m {
        let rhs = if r < dim { query[r] } else { 1.0 };
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        for (j, p) in points.iter().enumerate() {
            let coef = if r < dim { p[r] } else { 1.0 };
            t[r * width + j] = sign * coef;
        }
        t[r * width + n + r] = 1.0;
        t[r * width + width - 1] = sign * rhs;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective: minimize the artificial sum.
    let mut cost = vec![0.0; width];
    for r in 0..m {
        for c in 0..width {
            cost[c] -= t[r * width + c];
        }
    }
    for c in n..n + m {
        cost[c] = 0.0;
    }
    let eps = 1e-12;
    for _ in 0..(50 * (n + m)) {
        // Bland: first improving column.
        let Some(enter) = (0..n + m).find(|&c| cost[c] < -eps) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            let a = t[r * width + enter];
            if a > eps {
                let ratio = t[r * width + width - 1] / a;
                if ratio < best - eps || (ratio <= best + eps && leave.is_some_and(|l| basis[r] < basis[l])) {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(pr) = leave else {
            break;
        };
        let pv = t[pr * width + enter];
        for c in 0..width {
            t[pr * width + c] /= pv;
        }
        for r in 0..m {
            if r == pr {
                continue;
            }
            let f = t[r * width + enter];
            if f != 0.0 {
                for c in 0..width {
                    t[r * width + c] -= f * t[pr * width + c];
                }
            }
        }
        let f = cost[enter];
        for c in 0..width {
            cost[c] -= f * t[pr * width + c];
        }
        basis[pr] = enter;
    }
    let residual: f64 = (0..m)
        .filter(|&r| basis[r] >= n)
        .map(|r| t[r * width + width - 1])
        .sum();
    residual <= tol
}
