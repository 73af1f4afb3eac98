//! Spectral functions of Hermitian positive semi-definite matrices and the
//! single-site partial trace.

use num_traits::Zero;

use super::eigen::{eigh, Spectrum};
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::tol;

fn check_psd<T: Real>(s: &Spectrum<T>) -> Result<()> {
    let min = s.min();
    if s.dim() > 0 && min < -tol::psd::<T>() {
        return Err(Error::NotPsd(min.as_f64()));
    }
    Ok(())
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues within
/// tolerance below zero are clipped.
pub fn sqrt_psd<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    let s = eigh(m)?;
    check_psd(&s)?;
    Ok(s.reconstruct_with(|l| l.max(T::zero()).sqrt()))
}

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix together with its
/// kernel projector.
#[derive(Debug, Clone)]
pub struct PsdInverse<T: Real> {
    pub inverse: CMatrix<T>,
    pub rank: usize,
    /// Orthogonal projector onto the numerically null eigenspace.
    pub kernel: CMatrix<T>,
}

/// Eigenvalues at or below `rank_tol * lambda_max` count as zero.
pub fn pinv_psd_full<T: Real>(m: &CMatrix<T>, rank_tol: T) -> Result<PsdInverse<T>> {
    let s = eigh(m)?;
    check_psd(&s)?;
    let n = s.dim();
    let cutoff = rank_tol * s.max().max(T::zero());
    let kept: Vec<bool> = s
        .eigenvalues
        .iter()
        .map(|&l| l > cutoff && l > T::zero())
        .collect();
    let rank = kept.iter().filter(|&&k| k).count();
    let inverse = s.reconstruct_with(|l| if l > cutoff && l > T::zero() { T::one() / l } else { T::zero() });
    let v = &s.eigenvectors;
    let mut kernel = CMatrix::zeros(n, n);
    for (k, _) in kept.iter().enumerate().filter(|(_, &keep)| !keep) {
        for i in 0..n {
            for j in 0..n {
                kernel[(i, j)] += v[(i, k)] * v[(j, k)].conj();
            }
        }
    }
    Ok(PsdInverse {
        inverse,
        rank,
        kernel,
    })
}

/// Pseudo-inverse and numerical rank.
pub fn pinv_psd<T: Real>(m: &CMatrix<T>, rank_tol: T) -> Result<(CMatrix<T>, usize)> {
    pinv_psd_full(m, rank_tol).map(|p| (p.inverse, p.rank))
}

/// Reduced operator on site `keep` of a multipartite operator with local
/// dimensions `site_dims` (site 0 is the most significant tensor factor).
pub fn partial_trace<T: Real>(
    m: &CMatrix<T>,
    site_dims: &[usize],
    keep: usize,
) -> Result<CMatrix<T>> {
    let n = m.require_square()?;
    let total: usize = site_dims.iter().product();
    if site_dims.is_empty() || total != n {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: n,
        });
    }
    if keep >= site_dims.len() {
        return Err(Error::IndexOutOfRange {
            index: keep,
            sites: site_dims.len(),
        });
    }
    let d = site_dims[keep];
    let left: usize = site_dims[..keep].iter().product();
    let right: usize = site_dims[keep + 1..].iter().product();
    let mut out = CMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = C::zero();
            for l in 0..left {
                for r in 0..right {
                    acc += m[((l * d + a) * right + r, (l * d + b) * right + r)];
                }
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    type M = CMatrix<f64>;

    #[test]
    fn sqrt_of_scaled_identity() {
        let s = sqrt_psd(&M::identity(3).scale(4.0)).unwrap();
        assert!(s.max_abs_diff(&M::identity(3).scale(2.0)) < 1e-14);
    }

    #[test]
    fn sqrt_matches_closed_form_weight() {
        let w = M::from_real(2, 2, &[20.0, 16.0, 16.0, 20.0]).unwrap();
        let s = sqrt_psd(&w).unwrap();
        let expected = M::from_real(2, 2, &[4.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(s.max_abs_diff(&expected) < 1e-12);
        assert!((&s * &s).max_abs_diff(&w) < 1e-12);
    }

    #[test]
    fn sqrt_singular_psd() {
        let s = sqrt_psd(&M::from_diag(&[0.0, 9.0])).unwrap();
        assert!(s.max_abs_diff(&M::from_diag(&[0.0, 3.0])) < 1e-14);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = M::from_real(2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(matches!(sqrt_psd(&m), Err(Error::NotPsd(v)) if (v + 1.0).abs() < 1e-12));
    }

    #[test]
    fn pinv_of_scaled_identity() {
        let (p, r) = pinv_psd(&M::identity(2).scale(2.0), 1e-10).unwrap();
        assert_eq!(r, 2);
        assert!(p.max_abs_diff(&M::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn pinv_rank_one_fisher_matrix() {
        // 4[[1,1],[1,1]]: eigenvalue 8 along (1,1)/sqrt2, so pinv = (1/8) (1,1)(1,1)^T / 2
        let f = M::from_real(2, 2, &[4.0, 4.0, 4.0, 4.0]).unwrap();
        let p = pinv_psd_full(&f, 1e-10).unwrap();
        assert_eq!(p.rank, 1);
        let expected = M::from_real(2, 2, &[1.0 / 16.0; 4]).unwrap();
        assert!(p.inverse.max_abs_diff(&expected) < 1e-15);
        let kernel = M::from_real(2, 2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!(p.kernel.max_abs_diff(&kernel) < 1e-14);
    }

    #[test]
    fn pinv_of_zero() {
        let (p, r) = pinv_psd(&M::zeros(3, 3), 1e-10).unwrap();
        assert_eq!(r, 0);
        assert_eq!(p.max_abs(), 0.0);
    }

    fn ket(bits: &[C<f64>]) -> M {
        M::outer(bits, bits)
    }

    #[test]
    fn partial_trace_product_state() {
        let z0 = [c(1.0, 0.0), c(0.0, 0.0)];
        let rho = ket(&z0).kron(&ket(&z0));
        let r = partial_trace(&rho, &[2, 2], 1).unwrap();
        assert!(r.max_abs_diff(&ket(&z0)) < 1e-15);
    }

    #[test]
    fn partial_trace_bell_state_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        let r = partial_trace(&ket(&bell), &[2, 2], 1).unwrap();
        assert!(r.max_abs_diff(&M::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_keeps_requested_factor() {
        // |+><+| (x) |1><1|, keep site index 1 -> |1><1|
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [c(h, 0.0), c(h, 0.0)];
        let one = [c(0.0, 0.0), c(1.0, 0.0)];
        let rho = ket(&plus).kron(&ket(&one));
        assert!(partial_trace(&rho, &[2, 2], 1).unwrap().max_abs_diff(&ket(&one)) < 1e-15);
        assert!(partial_trace(&rho, &[2, 2], 0).unwrap().max_abs_diff(&ket(&plus)) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = M::identity(4);
        assert!(matches!(
            partial_trace(&rho, &[2, 3], 0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            partial_trace(&rho, &[2, 2], 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
