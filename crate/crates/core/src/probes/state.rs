use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{eigh, partial_trace, CMatrix, Spectrum};
use crate::scalar::{Real, C};
use crate::tol;

fn validate_dims(site_dims: &[usize]) -> Result<usize> {
    if site_dims.is_empty() {
        return Err(Error::NoSites);
    }
    if let Some(pos) = site_dims.iter().position(|&d| d == 0) {
        return Err(Error::InvalidParams(format!("site {pos} has dimension 0")));
    }
    Ok(site_dims.iter().product())
}

/// Normalized pure state of a multipartite system.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    site_dims: Vec<usize>,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(site_dims: Vec<usize>, amps: Vec<C<T>>) -> Result<Self> {
        let dim = validate_dims(&site_dims)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amps.len(),
            });
        }
        let s = Self { site_dims, amps };
        let dev = (s.norm() - T::one()).abs();
        if !(dev <= tol::norm::<T>()) {
            return Err(Error::InvalidState(format!(
                "norm deviates from 1 by {:e}",
                dev.as_f64()
            )));
        }
        Ok(s)
    }

    /// Normalizes the given amplitudes.
    pub fn normalized(site_dims: Vec<usize>, amps: Vec<C<T>>) -> Result<Self> {
        let dim = validate_dims(&site_dims)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amps.len(),
            });
        }
        let norm = amps
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        let inv = T::one() / norm;
        Ok(Self {
            site_dims,
            amps: amps.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// Computational basis state; `digits[i]` is the level of site `i`.
    pub fn basis(site_dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let dim = validate_dims(&site_dims)?;
        if digits.len() != site_dims.len() {
            return Err(Error::DimensionMismatch {
                expected: site_dims.len(),
                found: digits.len(),
            });
        }
        let mut index = 0;
        for (&d, &k) in site_dims.iter().zip(digits) {
            if k >= d {
                return Err(Error::IndexOutOfRange { index: k, sites: d });
            }
            index = index * d + k;
        }
        let mut amps = vec![C::zero(); dim];
        amps[index] = C::one();
        Ok(Self { site_dims, amps })
    }

    /// Tensor product `self (x) other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut site_dims = self.site_dims.clone();
        site_dims.extend_from_slice(&other.site_dims);
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        Self { site_dims, amps }
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn n_sites(&self) -> usize {
        self.site_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(C::zero(), |s, (a, b)| s + a.conj() * *b))
    }

    /// `<psi|op|psi>` for an operator on the full space.
    pub fn expectation(&self, op: &CMatrix<T>) -> Result<C<T>> {
        let v = op.mul_vec(&self.amps)?;
        Ok(self
            .amps
            .iter()
            .zip(&v)
            .fold(C::zero(), |s, (a, b)| s + a.conj() * *b))
    }

    pub fn density(&self) -> DensityOp<T> {
        DensityOp {
            site_dims: self.site_dims.clone(),
            matrix: CMatrix::outer(&self.amps, &self.amps),
        }
    }

    pub(crate) fn with_amplitudes(&self, amps: Vec<C<T>>) -> Self {
        debug_assert_eq!(amps.len(), self.amps.len());
        Self {
            site_dims: self.site_dims.clone(),
            amps,
        }
    }
}

/// Hermitian, positive semi-definite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp<T: Real> {
    site_dims: Vec<usize>,
    matrix: CMatrix<T>,
}

impl<T: Real> DensityOp<T> {
    pub fn new(site_dims: Vec<usize>, matrix: CMatrix<T>) -> Result<Self> {
        let dim = validate_dims(&site_dims)?;
        let n = matrix.require_square()?;
        if n != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: n,
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > tol::herm::<T>() {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {:e})",
                dev.as_f64()
            )));
        }
        let tr = matrix.trace();
        if !((tr.re - T::one()).abs() <= tol::norm::<T>()) || tr.im.abs() > tol::norm::<T>() {
            return Err(Error::InvalidState(format!(
                "trace {} differs from 1",
                tr.re.as_f64()
            )));
        }
        let min = eigh(&matrix)?.min();
        if min < -tol::psd::<T>() {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                min.as_f64()
            )));
        }
        Ok(Self { site_dims, matrix })
    }

    pub fn maximally_mixed(site_dims: Vec<usize>) -> Result<Self> {
        let dim = validate_dims(&site_dims)?;
        Ok(Self {
            site_dims,
            matrix: CMatrix::identity(dim).scale(T::one() / T::lit(dim as f64)),
        })
    }

    /// `p * self + (1 - p) * other`, `p` in `[0, 1]`.
    pub fn mix(&self, other: &Self, p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::InvalidParams(format!(
                "mixing weight {} outside [0, 1]",
                p.as_f64()
            )));
        }
        if self.site_dims != other.site_dims {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let matrix = self.matrix.scale(p).try_add(&other.matrix.scale(T::one() - p))?;
        Ok(Self {
            site_dims: self.site_dims.clone(),
            matrix,
        })
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn n_sites(&self) -> usize {
        self.site_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        eigh(&self.matrix)
    }

    /// `Tr(rho^2)`
    pub fn purity(&self) -> T {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix
            .as_slice()
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    /// `Tr(rho op)`
    pub fn expectation(&self, op: &CMatrix<T>) -> Result<C<T>> {
        Ok(self.matrix.matmul(op)?.trace())
    }

    /// Reduced state of a single site.
    pub fn reduced(&self, keep: usize) -> Result<Self> {
        let matrix = partial_trace(&self.matrix, &self.site_dims, keep)?;
        Ok(Self {
            site_dims: vec![self.site_dims[keep]],
            matrix,
        })
    }

    pub(crate) fn from_parts_unchecked(site_dims: Vec<usize>, matrix: CMatrix<T>) -> Self {
        Self { site_dims, matrix }
    }
}
