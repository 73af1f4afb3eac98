//! Seeded random probes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::state::{DensityOp, StateVector};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{c, Real, C};

fn gaussian<T: Real>(rng: &mut ChaCha8Rng) -> C<T> {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    c(T::lit(a), T::lit(b))
}

/// Unitarily invariant random pure state: normalized complex Gaussian vector.
pub fn haar_random_pure<T: Real>(site_dims: &[usize], seed: u64) -> Result<StateVector<T>> {
    let dim: usize = site_dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..dim).map(|_| gaussian(&mut rng)).collect();
    StateVector::normalized(site_dims.to_vec(), amps)
}

/// `G G^dagger / Tr(G G^dagger)` with `G` a `dim x rank` complex Gaussian matrix.
pub fn random_mixed<T: Real>(site_dims: &[usize], rank: usize, seed: u64) -> Result<DensityOp<T>> {
    let dim: usize = site_dims.iter().product();
    if site_dims.is_empty() {
        return Err(Error::NoSites);
    }
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::<T>::from_fn(dim, rank, |_, _| gaussian(&mut rng));
    let ggh = g.matmul(&g.adjoint())?;
    let tr = ggh.trace().re;
    let rho = ggh.scale(T::one() / tr).hermitian_part();
    DensityOp::new(site_dims.to_vec(), rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Hamiltonian;

    #[test]
    fn deterministic_per_seed() {
        let a = haar_random_pure::<f64>(&[2, 3], 11).unwrap();
        let b = haar_random_pure::<f64>(&[2, 3], 11).unwrap();
        let d = haar_random_pure::<f64>(&[2, 3], 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, d);
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_sigma_z_vanishes() {
        let h = Hamiltonian::<f64>::pauli_z(2).unwrap();
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|seed| {
                let s = haar_random_pure::<f64>(&[2, 2], seed).unwrap();
                let v = h.apply_local(0, s.amplitudes()).unwrap();
                s.amplitudes().iter().zip(&v).map(|(a, b)| (a.conj() * b).re).sum::<f64>()
            })
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn mixed_ranks() {
        let pure = random_mixed::<f64>(&[2, 2], 1, 3).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        let full = random_mixed::<f64>(&[2, 2], 4, 3).unwrap();
        assert_eq!(full, random_mixed::<f64>(&[2, 2], 4, 3).unwrap());
        assert!(full.spectrum().unwrap().min() > 1e-6);
        assert!(matches!(
            random_mixed::<f64>(&[2, 2], 5, 3),
            Err(Error::InvalidRank { rank: 5, dim: 4 })
        ));
        assert!(random_mixed::<f64>(&[2], 0, 3).is_err());
    }
}
