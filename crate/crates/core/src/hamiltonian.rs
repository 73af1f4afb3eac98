//! Local encoding Hamiltonians `sum_i h_i H_i` and the unitary encoding channel
//! `exp(-i sum_i h_i H_i)` (with hbar, the coupling scale and the time all 1).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{eigh, pauli, CMatrix};
use crate::probes::{DensityOp, StateVector};
use crate::scalar::{c, Real, C};
use crate::tol;

/// Field strengths `h_i`, one per site.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldVector<T: Real>(Vec<T>);

impl<T: Real> FieldVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![T::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }
}

impl<T: Real> From<Vec<T>> for FieldVector<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

/// One Hermitian generator per site.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T: Real> {
    site_dims: Vec<usize>,
    generators: Vec<CMatrix<T>>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(generators: Vec<CMatrix<T>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NoSites);
        }
        let mut site_dims = Vec::with_capacity(generators.len());
        for g in &generators {
            let d = g.require_square()?;
            if d == 0 {
                return Err(Error::InvalidParams("generator of dimension 0".into()));
            }
            let dev = g.hermitian_deviation();
            if dev > tol::herm::<T>() {
                return Err(Error::NonHermitian(dev.as_f64()));
            }
            site_dims.push(d);
        }
        Ok(Self {
            site_dims,
            generators,
        })
    }

    /// `sigma_z` on each of `n` qubits.
    pub fn pauli_z(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoSites);
        }
        Self::new(vec![pauli::z(); n])
    }

    pub fn n_sites(&self) -> usize {
        self.site_dims.len()
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn dim(&self) -> usize {
        self.site_dims.iter().product()
    }

    pub fn generators(&self) -> &[CMatrix<T>] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> Result<&CMatrix<T>> {
        self.generators.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            sites: self.n_sites(),
        })
    }

    /// True when every site is a qubit.
    pub fn is_qubit_system(&self) -> bool {
        self.site_dims.iter().all(|&d| d == 2)
    }

    /// `I (x) ... (x) H_i (x) ... (x) I` on the full space.
    pub fn embed(&self, i: usize) -> Result<CMatrix<T>> {
        let g = self.generator(i)?;
        let left: usize = self.site_dims[..i].iter().product();
        let right: usize = self.site_dims[i + 1..].iter().product();
        Ok(CMatrix::identity(left).kron(g).kron(&CMatrix::identity(right)))
    }

    /// `H_i |psi>` without forming the embedded operator.
    pub fn apply_local(&self, i: usize, amps: &[C<T>]) -> Result<Vec<C<T>>> {
        let g = self.generator(i)?;
        apply_on_site(g, &self.site_dims, i, amps)
    }

    /// `(lambda_max, lambda_min)` of every generator.
    pub fn eigen_extremes(&self) -> Result<Vec<(T, T)>> {
        self.generators
            .iter()
            .map(|g| eigh(g).map(|s| (s.max(), s.min())))
            .collect()
    }

    /// `sum_i (lambda_max^i - lambda_min^i)^2`
    pub fn gap_sum_sq(&self) -> Result<T> {
        Ok(self
            .eigen_extremes()?
            .iter()
            .map(|&(hi, lo)| (hi - lo) * (hi - lo))
            .fold(T::zero(), |a, b| a + b))
    }

    fn check_fields(&self, fields: &FieldVector<T>) -> Result<()> {
        if fields.len() != self.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: self.n_sites(),
                found: fields.len(),
            });
        }
        Ok(())
    }

    /// Per-site unitaries `exp(-i h_i H_i)` built from each generator's spectrum.
    pub fn site_unitaries(&self, fields: &FieldVector<T>) -> Result<Vec<CMatrix<T>>> {
        self.check_fields(fields)?;
        self.generators
            .iter()
            .zip(fields.as_slice())
            .map(|(g, &h)| {
                let s = eigh(g)?;
                let d = s.dim();
                let v = &s.eigenvectors;
                let phases: Vec<C<T>> = s
                    .eigenvalues
                    .iter()
                    .map(|&l| {
                        let a = -h * l;
                        c(a.cos(), a.sin())
                    })
                    .collect();
                Ok(CMatrix::from_fn(d, d, |r, col| {
                    (0..d).fold(C::zero(), |acc, k| {
                        acc + v[(r, k)] * phases[k] * v[(col, k)].conj()
                    })
                }))
            })
            .collect()
    }

    /// Full-space encoding unitary. The local terms commute, so it factorizes
    /// into a tensor product of site unitaries.
    pub fn encoding_unitary(&self, fields: &FieldVector<T>) -> Result<CMatrix<T>> {
        let units = self.site_unitaries(fields)?;
        Ok(units
            .iter()
            .skip(1)
            .fold(units[0].clone(), |acc, u| acc.kron(u)))
    }

    pub fn encode<P: Encode<T>>(&self, fields: &FieldVector<T>, probe: &P) -> Result<P> {
        probe.encode_with(self, fields)
    }

    fn check_probe_dims(&self, dims: &[usize]) -> Result<()> {
        if dims != self.site_dims.as_slice() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dims.iter().product(),
            });
        }
        Ok(())
    }
}

/// Probes that can pass through the unitary encoding channel.
pub trait Encode<T: Real>: Sized {
    fn encode_with(&self, h: &Hamiltonian<T>, fields: &FieldVector<T>) -> Result<Self>;
}

impl<T: Real> Encode<T> for StateVector<T> {
    fn encode_with(&self, h: &Hamiltonian<T>, fields: &FieldVector<T>) -> Result<Self> {
        h.check_probe_dims(self.site_dims())?;
        let units = h.site_unitaries(fields)?;
        let mut amps = self.amplitudes().to_vec();
        for (i, u) in units.iter().enumerate() {
            amps = apply_on_site(u, h.site_dims(), i, &amps)?;
        }
        Ok(self.with_amplitudes(amps))
    }
}

impl<T: Real> Encode<T> for DensityOp<T> {
    fn encode_with(&self, h: &Hamiltonian<T>, fields: &FieldVector<T>) -> Result<Self> {
        h.check_probe_dims(self.site_dims())?;
        let u = h.encoding_unitary(fields)?;
        let m = u.matmul(self.matrix())?.matmul(&u.adjoint())?;
        Ok(DensityOp::from_parts_unchecked(
            self.site_dims().to_vec(),
            m.hermitian_part(),
        ))
    }
}

/// Applies a single-site operator to a state vector.
pub fn apply_on_site<T: Real>(
    op: &CMatrix<T>,
    site_dims: &[usize],
    site: usize,
    amps: &[C<T>],
) -> Result<Vec<C<T>>> {
    if site >= site_dims.len() {
        return Err(Error::IndexOutOfRange {
            index: site,
            sites: site_dims.len(),
        });
    }
    let d = site_dims[site];
    let total: usize = site_dims.iter().product();
    if amps.len() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: amps.len(),
        });
    }
    if op.rows() != d || op.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.rows(),
        });
    }
    let right: usize = site_dims[site + 1..].iter().product();
    let left = total / (d * right);
    let mut out = vec![C::zero(); total];
    for l in 0..left {
        for r in 0..right {
            for a in 0..d {
                let mut acc = C::zero();
                for b in 0..d {
                    acc += op[(a, b)] * amps[(l * d + b) * right + r];
                }
                out[(l * d + a) * right + r] = acc;
            }
        }
    }
    Ok(out)
}
