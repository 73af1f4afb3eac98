//! Weight matrices: the correlated-field family `W(N, alpha)` with its
//! closed-form square root, and validation of arbitrary PSD weights.

use crate::error::{Error, Result};
use crate::linalg::{sqrt_psd, CMatrix};
use crate::scalar::{Real, C};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance<T: Real> {
    /// Built by [`build_w_bar`]; the square root is exact.
    ClosedForm { n: usize, alpha: T },
    /// Square root obtained from the spectral decomposition.
    Spectral,
}

/// Hermitian PSD weight with its cached principal square root.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight<T: Real> {
    matrix: CMatrix<T>,
    sqrt: CMatrix<T>,
    provenance: Provenance<T>,
}

impl<T: Real> Weight<T> {
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn sqrt(&self) -> &CMatrix<T> {
        &self.sqrt
    }

    pub fn provenance(&self) -> Provenance<T> {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Correlation parameter when the weight came from the closed-form family.
    pub fn alpha(&self) -> Option<T> {
        match self.provenance {
            Provenance::ClosedForm { alpha, .. } => Some(alpha),
            Provenance::Spectral => None,
        }
    }

    pub fn trace_sqrt(&self) -> T {
        self.sqrt.trace().re
    }
}

fn check_family<T: Real>(n: usize, alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidAlpha(alpha.as_f64()));
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "correlated weight needs N >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Diagonal and off-diagonal entries `(a, b)`:
/// `a = 16[(N-1)alpha^2 + 1]`, `b = 16[(N-2)alpha^2 + 2 alpha]`.
pub fn w_bar_coefficients<T: Real>(n: usize, alpha: T) -> Result<(T, T)> {
    check_family(n, alpha)?;
    let nf = T::lit(n as f64);
    let sixteen = T::lit(16.0);
    let a2 = alpha * alpha;
    let a = sixteen * ((nf - T::one()) * a2 + T::one());
    let b = sixteen * ((nf - T::lit(2.0)) * a2 + T::lit(2.0) * alpha);
    Ok((a, b))
}

fn uniform<T: Real>(n: usize, diag: T, off: T) -> CMatrix<T> {
    CMatrix::from_fn(n, n, |i, j| C::from(if i == j { diag } else { off }))
}

/// `4(I + alpha * offdiag)`. Squaring `u I + v offdiag` gives
/// `u1 = u^2 + (N-1)v^2` on the diagonal and `v1 = 2uv + (N-2)v^2` off it,
/// which with `u = 4, v = 4 alpha` reproduces `(a, b)`.
pub fn weight_sqrt_closed_form<T: Real>(n: usize, alpha: T) -> Result<CMatrix<T>> {
    check_family(n, alpha)?;
    let four = T::lit(4.0);
    Ok(uniform(n, four, four * alpha))
}

pub fn build_w_bar<T: Real>(n: usize, alpha: T) -> Result<Weight<T>> {
    let (a, b) = w_bar_coefficients(n, alpha)?;
    Ok(Weight {
        matrix: uniform(n, a, b),
        sqrt: weight_sqrt_closed_form(n, alpha)?,
        provenance: Provenance::ClosedForm { n, alpha },
    })
}

/// Accepts any Hermitian PSD matrix (rank-deficient allowed).
pub fn validate_psd_weight<T: Real>(m: CMatrix<T>) -> Result<Weight<T>> {
    m.require_square()?;
    let dev = m.hermitian_deviation();
    if dev > tol::herm::<T>() {
        return Err(Error::NonHermitian(dev.as_f64()));
    }
    let matrix = m.hermitian_part();
    let sqrt = sqrt_psd(&matrix)?;
    Ok(Weight {
        matrix,
        sqrt,
        provenance: Provenance::Spectral,
    })
}
