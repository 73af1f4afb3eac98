//! Singular values by one-sided (Hestenes) Jacobi rotations.
//!
//! Small singular values come out with absolute accuracy near machine
//! epsilon times the largest one, which the Schmidt-rank test relies on.

use num_traits::Zero;

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Result<Vec<T>> {
    // Work on columns of whichever orientation has fewer columns.
    let a = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let (rows, cols) = (a.rows(), a.cols());
    let mut colv: Vec<Vec<C<T>>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[(i, j)]).collect())
        .collect();

    let eps = T::epsilon();
    // column pairs at rounding level (norms ~ eps * sigma_max) are left alone
    let floor = eps * eps * colv.iter().map(|v| norm_sqr(v)).fold(T::zero(), |a, b| a + b);
    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: T = norm_sqr(&colv[p]);
                let beta: T = norm_sqr(&colv[q]);
                let gamma: C<T> = colv[p]
                    .iter()
                    .zip(&colv[q])
                    .fold(C::zero(), |s, (x, y)| s + x.conj() * *y);
                let g = gamma.norm();
                let scale = (alpha * beta).sqrt();
                if g == T::zero() || g <= eps * scale || scale <= floor {
                    continue;
                }
                rotated = true;
                let unit = gamma / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                let (left, right) = colv.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yr = *y * unit.conj();
                    let nx = *x * cs - yr * sn;
                    let ny = *x * sn + yr * cs;
                    *x = nx;
                    *y = ny * unit;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence);
    }
    let mut sv: Vec<T> = colv.iter().map(|v| norm_sqr(v).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sv)
}

fn norm_sqr<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b)
}
