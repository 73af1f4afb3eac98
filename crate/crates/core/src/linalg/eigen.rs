//! Hermitian eigendecomposition.
//!
//! The matrix is reduced to a real symmetric tridiagonal form with Householder
//! reflections (a diagonal phase similarity makes the off-diagonal real), then
//! diagonalized by implicit QL iterations with Wilkinson-style shifts.

use num_traits::{One, Zero};

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::tol;

const MAX_QL_ITERS: usize = 64;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMatrix<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::nan)
    }

    pub fn max(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::nan)
    }

    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        let v = &self.eigenvectors;
        (0..v.rows()).map(|i| v[(i, k)]).collect()
    }

    /// `V f(diag(lambda)) V^dagger`
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C::zero();
                for k in 0..n {
                    if fl[k] != T::zero() {
                        acc += v[(i, k)] * v[(j, k)].conj() * fl[k];
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        for i in 0..n {
            out[(i, i)].im = T::zero();
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix<T> {
        self.reconstruct_with(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvectors are phase-fixed so that their largest-magnitude component
/// (the first one, among near-ties) is real and positive. Vectors spanning a degenerate eigenspace are whatever the
/// solver produced.
pub fn eigh<T: Real>(m: &CMatrix<T>) -> Result<Spectrum<T>> {
    let n = m.require_square()?;
    let dev = m.hermitian_deviation();
    if dev > tol::herm::<T>() {
        return Err(Error::NonHermitian(dev.as_f64()));
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }

    let mut a = m.hermitian_part();
    let mut z = CMatrix::<T>::identity(n);
    tridiagonalize(&mut a, &mut z);

    let mut d: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![T::zero(); n];
    // Rescale basis vectors so the subdiagonal becomes real and nonnegative.
    let mut phase = C::<T>::one();
    for k in 0..n.saturating_sub(1) {
        let sub = a[(k + 1, k)];
        let mag = sub.norm();
        e[k] = mag;
        if mag > T::zero() {
            phase = phase * (sub / mag);
        }
        for i in 0..n {
            z[(i, k + 1)] = z[(i, k + 1)] * phase;
        }
    }

    tql(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues: Vec<T> = order.iter().map(|&k| d[k]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        // first index among near-ties, so rounding noise cannot flip the pivot
        let top = (0..n).fold(T::zero(), |a, i| a.max(z[(i, k)].norm()));
        let slack = top * T::epsilon().sqrt();
        let best = (0..n).find(|&i| z[(i, k)].norm() >= top - slack).unwrap_or(0);
        let best_mag = z[(best, k)].norm();
        let pivot = z[(best, k)];
        let fix = if best_mag > T::zero() {
            pivot.conj() / best_mag
        } else {
            C::one()
        };
        for i in 0..n {
            vecs[(i, col)] = z[(i, k)] * fix;
        }
        vecs[(best, col)].im = T::zero();
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors: vecs,
    })
}

/// Eigenvalues only.
pub fn eigvalsh<T: Real>(m: &CMatrix<T>) -> Result<Vec<T>> {
    eigh(m).map(|s| s.eigenvalues)
}

/// In-place Householder reduction `A <- Q^dagger A Q`, accumulating `Q` into `z`.
fn tridiagonalize<T: Real>(a: &mut CMatrix<T>, z: &mut CMatrix<T>) {
    let n = a.rows();
    let two = T::lit(2.0);
    let mut v = vec![C::<T>::zero(); n];
    let mut p = vec![C::<T>::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let tail: T = (k + 2..n)
            .map(|i| a[(i, k)].norm_sqr())
            .fold(T::zero(), |s, x| s + x);
        if tail == T::zero() {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let sigma = (tail + x0.norm_sqr()).sqrt();
        let x0_mag = x0.norm();
        let unit = if x0_mag > T::zero() { x0 / x0_mag } else { C::one() };
        let alpha = -unit * sigma;

        v.iter_mut().for_each(|x| *x = C::zero());
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] = v[k + 1] - alpha;
        let vnorm2: T = v[k + 1..].iter().map(|x| x.norm_sqr()).fold(T::zero(), |s, x| s + x);
        if vnorm2 == T::zero() {
            continue;
        }
        let tau = two / vnorm2;

        // p = tau A v
        for i in 0..n {
            let mut acc = C::zero();
            for j in k + 1..n {
                acc += a[(i, j)] * v[j];
            }
            p[i] = acc * tau;
        }
        // K = tau (v^dagger p) / 2, real for Hermitian A
        let vp: C<T> = (k + 1..n).fold(C::zero(), |s, j| s + v[j].conj() * p[j]);
        let kk = vp.re * tau / two;
        for i in 0..n {
            p[i] = p[i] - v[i] * kk;
        }
        // A <- A - v p^dagger - p v^dagger
        for i in 0..n {
            for j in 0..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                if !upd.is_zero() {
                    a[(i, j)] = a[(i, j)] - upd;
                }
            }
        }
        // Z <- Z (I - tau v v^dagger)
        for i in 0..n {
            let mut zv = C::zero();
            for j in k + 1..n {
                zv += z[(i, j)] * v[j];
            }
            let zv = zv * tau;
            for j in k + 1..n {
                z[(i, j)] = z[(i, j)] - zv * v[j].conj();
            }
        }
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix with diagonal `d` and
/// subdiagonal `e` (`e[k]` couples `k` and `k+1`; `e[n-1]` unused).
fn tql<T: Real>(d: &mut [T], e: &mut [T], z: &mut CMatrix<T>) -> Result<()> {
    let n = d.len();
    let (zero, one, two) = (T::zero(), T::one(), T::lit(2.0));
    if n > 0 {
        e[n - 1] = zero;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERS {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(one);
            let signed_r = if g >= zero { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + signed_r);
            let (mut s, mut c, mut p) = (one, one, zero);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == zero {
                    d[i + 1] -= p;
                    e[m] = zero;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zf = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = zi * s + zf * c;
                    z[(k, i)] = zi * c - zf * s;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::pauli;
    use crate::scalar::c;

    type M = CMatrix<f64>;

    fn check_decomposition(m: &M, s: &Spectrum<f64>, tol: f64) {
        let n = m.rows();
        let v = &s.eigenvectors;
        let vhv = &v.adjoint() * v;
        assert!(vhv.max_abs_diff(&M::identity(n)) < tol, "orthonormality");
        assert!(s.reconstruct().max_abs_diff(m) < tol, "reconstruction");
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]), "ascending");
    }

    #[test]
    fn pauli_z_spectrum() {
        let s = eigh(&pauli::z::<f64>()).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 1.0]);
        check_decomposition(&pauli::z(), &s, 1e-14);
    }

    #[test]
    fn two_by_two_closed_form() {
        // a +/- b for [[a, b], [b, a]]
        let m = M::from_real(2, 2, &[20.0, 16.0, 16.0, 20.0]).unwrap();
        let s = eigh(&m).unwrap();
        assert!((s.eigenvalues[0] - 4.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 36.0).abs() < 1e-12);
        check_decomposition(&m, &s, 1e-12);
    }

    #[test]
    fn one_by_one() {
        let s = eigh(&M::from_diag(&[3.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0]);
        assert_eq!(s.eigenvectors, M::identity(1));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(eigh(&m), Err(Error::NonHermitian(_))));
        assert!(matches!(eigh(&M::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn complex_hermitian_with_degeneracy() {
        // I (x) sigma_y has eigenvalues -1, -1, 1, 1
        let y = M::new(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let m = M::identity(2).kron(&y);
        let s = eigh(&m).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-13);
        }
        check_decomposition(&m, &s, 1e-13);
    }

    #[test]
    fn phase_convention_largest_component_real_positive() {
        let y = M::new(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let s = eigh(&y).unwrap();
        for k in 0..2 {
            let v = s.vector(k);
            let top = v.iter().fold(0.0f64, |a, z| a.max(z.norm()));
            let idx = v.iter().position(|z| z.norm() >= top - 1e-8).unwrap();
            assert!(v[idx].im.abs() < 1e-15 && v[idx].re > 0.0);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let m = CMatrix::<f32>::from_real(2, 2, &[20.0, 16.0, 16.0, 20.0]).unwrap();
        let s = eigh(&m).unwrap();
        assert!((s.eigenvalues[0] - 4.0).abs() < 1e-4);
        assert!((s.eigenvalues[1] - 36.0).abs() < 1e-4);
    }
}
