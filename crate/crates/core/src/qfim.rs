//! Quantum Fisher information for local-field encoding, symmetric logarithmic
//! derivatives, and the weighted figure of merit `Tr(W F^-1)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::linalg::{eigvalsh, pinv_psd_full, CMatrix};
use crate::probes::{DensityOp, StateVector};
use crate::scalar::{c, Real, C};
use crate::tol;
use crate::weights::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    Pure,
    Mixed,
}

/// How `Tr(W F^-1)` treats a singular Fisher matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InversePolicy {
    /// Singular `F` is an error.
    Strict,
    /// Pseudo-inverse; `+inf` if `W` has weight outside the support of `F`.
    #[default]
    Pseudo,
}

/// Real symmetric positive semi-definite Fisher information matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherInfo<T: Real> {
    matrix: CMatrix<T>,
    kind: ProbeKind,
    rank: usize,
}

impl<T: Real> FisherInfo<T> {
    /// Wraps an externally supplied matrix, checking symmetry and positivity.
    pub fn from_matrix(matrix: CMatrix<T>, kind: ProbeKind) -> Result<Self> {
        matrix.require_square()?;
        let dev = matrix.hermitian_deviation();
        if dev > tol::herm::<T>() {
            return Err(Error::NonHermitian(dev.as_f64()));
        }
        let imag = matrix.as_slice().iter().fold(T::zero(), |a, z| a.max(z.im.abs()));
        if imag > tol::herm::<T>() {
            return Err(Error::NonHermitian(imag.as_f64()));
        }
        Self::sanitized(matrix, kind)
    }

    /// Drops imaginary dust, symmetrizes and computes the numerical rank.
    fn sanitized(matrix: CMatrix<T>, kind: ProbeKind) -> Result<Self> {
        let n = matrix.rows();
        let half = T::lit(0.5);
        let matrix = CMatrix::from_fn(n, n, |i, j| {
            C::from((matrix[(i, j)].re + matrix[(j, i)].re) * half)
        });
        let eig = eigvalsh(&matrix)?;
        let top = eig.last().copied().unwrap_or_else(T::zero).max(T::zero());
        let floor = tol::psd::<T>() * top.max(T::one());
        if let Some(&low) = eig.first() {
            if low < -floor {
                return Err(Error::NotPsd(low.as_f64()));
            }
        }
        let cutoff = tol::rank::<T>() * top;
        let rank = eig.iter().filter(|&&l| l > cutoff && l > T::zero()).count();
        Ok(Self { matrix, kind, rank })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn kind(&self) -> ProbeKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_singular(&self) -> bool {
        self.rank < self.dim()
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.matrix[(i, j)].re
    }
}

fn check_dims<T: Real>(h: &Hamiltonian<T>, site_dims: &[usize]) -> Result<()> {
    if h.site_dims() != site_dims {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: site_dims.iter().product(),
        });
    }
    Ok(())
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(C::zero(), |acc, (x, y)| acc + x.conj() * y)
}

/// `F_ij = 4 (Re<H_i psi|H_j psi> - <H_i><H_j>)`; valid because the embedded
/// generators act on different sites and commute.
pub fn qfim_pure<T: Real>(probe: &StateVector<T>, h: &Hamiltonian<T>) -> Result<FisherInfo<T>> {
    check_dims(h, probe.site_dims())?;
    let psi = probe.amplitudes();
    let applied = (0..h.n_sites())
        .map(|i| h.apply_local(i, psi))
        .collect::<Result<Vec<_>>>()?;
    let means: Vec<T> = applied.iter().map(|v| dot(psi, v).re).collect();
    let n = h.n_sites();
    let four = T::lit(4.0);
    let mut f = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = four * (dot(&applied[i], &applied[j]).re - means[i] * means[j]);
            f[(i, j)] = C::from(v);
            f[(j, i)] = C::from(v);
        }
    }
    FisherInfo::sanitized(f, ProbeKind::Pure)
}

/// Eigenbasis formula
/// `F_ij = sum 2 Re(D_i[n,m] D_j[m,n]) / (eta_n + eta_m)` over pairs with
/// `eta_n + eta_m` above the cutoff, where `D_i = V^dagger (-i[H_i, rho]) V`.
/// In the eigenbasis `D_i[n,m] = -i (eta_m - eta_n) <n|H_i|m>`.
pub fn qfim_mixed<T: Real>(rho: &DensityOp<T>, h: &Hamiltonian<T>) -> Result<FisherInfo<T>> {
    check_dims(h, rho.site_dims())?;
    let eig = rho.spectrum()?;
    let eta: Vec<T> = eig.eigenvalues.iter().map(|&l| l.max(T::zero())).collect();
    let v = &eig.eigenvectors;
    let vh = v.adjoint();
    let d = rho.dim();
    let cutoff = tol::pair_cutoff::<T>();
    let minus_i = c(T::zero(), -T::one());

    let derivs = (0..h.n_sites())
        .map(|i| {
            // columns of H_i V, then V^dagger (H_i V)
            let mut hv = CMatrix::zeros(d, d);
            for k in 0..d {
                let col = h.apply_local(i, &eig.vector(k))?;
                for (r, z) in col.into_iter().enumerate() {
                    hv[(r, k)] = z;
                }
            }
            let ht = vh.matmul(&hv)?;
            Ok(CMatrix::from_fn(d, d, |n, m| {
                minus_i * ht[(n, m)] * (eta[m] - eta[n])
            }))
        })
        .collect::<Result<Vec<_>>>()?;

    let sites = h.n_sites();
    let two = T::lit(2.0);
    let mut f = CMatrix::zeros(sites, sites);
    for i in 0..sites {
        for j in i..sites {
            let mut acc = T::zero();
            for n in 0..d {
                for m in 0..d {
                    let s = eta[n] + eta[m];
                    if s > cutoff {
                        acc += two * (derivs[i][(n, m)] * derivs[j][(m, n)]).re / s;
                    }
                }
            }
            f[(i, j)] = C::from(acc);
            f[(j, i)] = C::from(acc);
        }
    }
    FisherInfo::sanitized(f, ProbeKind::Mixed)
}

/// `L_i = 2(|d_i psi><psi| + |psi><d_i psi|)` with `|d_i psi> = -i H_i |psi>`.
pub fn sld_pure<T: Real>(probe: &StateVector<T>, h: &Hamiltonian<T>, i: usize) -> Result<CMatrix<T>> {
    check_dims(h, probe.site_dims())?;
    let psi = probe.amplitudes();
    let minus_i = c(T::zero(), -T::one());
    let dpsi: Vec<C<T>> = h.apply_local(i, psi)?.into_iter().map(|z| z * minus_i).collect();
    let a = CMatrix::outer(&dpsi, psi);
    Ok((&a + &a.adjoint()).scale(T::lit(2.0)))
}

/// `max_{i<j} |<psi|[L_i, L_j]|psi>|`; zero when there are no pairs.
pub fn saturability_check<T: Real>(probe: &StateVector<T>, h: &Hamiltonian<T>) -> Result<T> {
    check_dims(h, probe.site_dims())?;
    let psi = probe.amplitudes();
    let applied = (0..h.n_sites())
        .map(|i| sld_pure(probe, h, i)?.mul_vec(psi))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = T::zero();
    for i in 0..applied.len() {
        for j in i + 1..applied.len() {
            // <psi|L_i L_j - L_j L_i|psi> with Hermitian L
            let v = dot(&applied[i], &applied[j]) - dot(&applied[j], &applied[i]);
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

/// `Tr(W F^-1)` under the given policy.
pub fn figure_of_merit<T: Real>(w: &Weight<T>, f: &FisherInfo<T>, policy: InversePolicy) -> Result<T> {
    let n = f.dim();
    if w.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.dim(),
        });
    }
    if policy == InversePolicy::Strict && f.is_singular() {
        return Err(Error::SingularQfim { rank: f.rank(), dim: n });
    }
    let inv = pinv_psd_full(f.matrix(), tol::rank::<T>())?;
    if inv.rank < n {
        let outside = inv.kernel.matmul(w.matrix())?.trace().re;
        let total = w.matrix().trace().re;
        if outside > tol::support::<T>() * total.max(T::zero()) {
            return Ok(T::infinity());
        }
    }
    Ok(w.matrix().matmul(&inv.inverse)?.trace().re)
}
