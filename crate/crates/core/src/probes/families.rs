//! Closed-form probe families on qubits.

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::{c, re, Real, C};
use crate::tol;

/// `(|psi>^N + e^{i phi} |psi_perp>^N) / sqrt2` with
/// `|psi> = cos(theta/2)|0> + sin(theta/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzParams<T: Real> {
    pub theta: T,
    pub phi: T,
    pub n: usize,
}

impl<T: Real> GhzParams<T> {
    /// The attaining member for weight parameter `alpha`: `cos^2 theta = alpha`, `phi = pi/2`.
    pub fn optimal(n: usize, alpha: T) -> Self {
        Self {
            theta: alpha.sqrt().acos(),
            phi: T::FRAC_PI_2(),
            n,
        }
    }
}

pub fn ghz<T: Real>(p: GhzParams<T>) -> Result<StateVector<T>> {
    if p.n < 2 {
        return Err(Error::InvalidParams(format!("GHZ probe needs N >= 2, got {}", p.n)));
    }
    if !p.theta.is_finite() || !p.phi.is_finite() {
        return Err(Error::InvalidParams("non-finite GHZ angle".into()));
    }
    let half = p.theta / T::lit(2.0);
    let (s, co) = half.sin_cos();
    let psi = [co, s];
    let perp = [-s, co];
    let rel = c(p.phi.cos(), p.phi.sin());
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    let dim = 1usize << p.n;
    let amps = (0..dim)
        .map(|idx| {
            let mut a = T::one();
            let mut b = T::one();
            for site in 0..p.n {
                let bit = (idx >> (p.n - 1 - site)) & 1;
                a *= psi[bit];
                b *= perp[bit];
            }
            (re(a) + rel * b) * inv_sqrt2
        })
        .collect();
    StateVector::normalized(vec![2; p.n], amps)
}

/// `prod_i (cos(theta_i/2)|0> + e^{i phi_i} sin(theta_i/2)|1>)`
pub fn product<T: Real>(angles: &[(T, T)]) -> Result<StateVector<T>> {
    if angles.is_empty() {
        return Err(Error::NoSites);
    }
    let mut amps = vec![C::<T>::from(T::one())];
    for &(theta, phi) in angles {
        let half = theta / T::lit(2.0);
        let (s, co) = half.sin_cos();
        let q = [re(co), c(phi.cos(), phi.sin()) * s];
        amps = amps
            .iter()
            .flat_map(|&a| q.iter().map(move |&b| a * b))
            .collect();
    }
    StateVector::normalized(vec![2; angles.len()], amps)
}

/// Three-qubit probes with vanishing `<sigma_z^i>` and pairwise correlations
/// `<sigma_z^i sigma_z^j> = alpha`, parameterized by `sin^2 chi` and seven
/// relative phases. The `|000>` amplitude is real and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N3Params<T: Real> {
    pub alpha: T,
    pub chi: T,
    /// Phases of the amplitudes on basis indices 1..=7 (`|001>` through `|111>`).
    pub phases: [T; 7],
}

/// Admissible range `[alpha/2, (1+alpha)/4]` of `sin^2 chi`.
pub fn n3_interval<T: Real>(alpha: T) -> (T, T) {
    let lo = alpha / T::lit(2.0);
    let hi = ((T::one() + alpha) / T::lit(4.0)).min((T::one() + T::lit(3.0) * alpha) / T::lit(4.0));
    (lo, hi)
}

/// Squared moduli on the eight basis states, indexed like the amplitudes.
pub fn n3_squared_moduli<T: Real>(alpha: T, sin2chi: T) -> [T; 8] {
    let four = T::lit(4.0);
    let all_one = (T::one() + T::lit(3.0) * alpha) / four - sin2chi;
    let single = (T::one() + alpha) / four - sin2chi;
    let double = sin2chi - alpha / T::lit(2.0);
    let mut out = [T::zero(); 8];
    for (idx, slot) in out.iter_mut().enumerate() {
        *slot = match idx.count_ones() {
            0 => sin2chi,
            1 => single,
            2 => double,
            _ => all_one,
        };
    }
    out
}

pub fn parametric_n3<T: Real>(p: N3Params<T>) -> Result<StateVector<T>> {
    if !(p.alpha > T::zero() && p.alpha < T::one()) {
        return Err(Error::InvalidAlpha(p.alpha.as_f64()));
    }
    let s = p.chi.sin();
    let moduli = n3_squared_moduli(p.alpha, s * s);
    let floor = -tol::norm::<T>();
    if let Some((idx, &m)) = moduli.iter().enumerate().find(|(_, &m)| m < floor) {
        return Err(Error::InvalidParams(format!(
            "squared modulus on basis index {idx} is negative ({:e}); sin^2 chi must lie in [alpha/2, (1+alpha)/4]",
            m.as_f64()
        )));
    }
    let amps: Vec<C<T>> = moduli
        .iter()
        .enumerate()
        .map(|(idx, &m)| {
            let mag = m.max(T::zero()).sqrt();
            if idx == 0 {
                re(mag)
            } else {
                let ph = p.phases[idx - 1];
                c(ph.cos(), ph.sin()) * mag
            }
        })
        .collect();
    let total = amps.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
    if (total - T::one()).abs() > tol::norm::<T>() {
        return Err(Error::InvalidParams(format!(
            "squared moduli sum to {}",
            total.as_f64()
        )));
    }
    StateVector::new(vec![2, 2, 2], amps)
}

/// `(|lambda_max> + |lambda_min>)/sqrt2` for a Hermitian generator, which
/// attains the maximum variance `(lambda_max - lambda_min)^2 / 4`.
pub(crate) fn extremal_superposition<T: Real>(
    spectrum: &crate::linalg::Spectrum<T>,
) -> Vec<C<T>> {
    let d = spectrum.dim();
    let hi = spectrum.vector(d - 1);
    let lo = spectrum.vector(0);
    if d == 1 {
        return hi;
    }
    let w = T::FRAC_1_SQRT_2();
    hi.iter().zip(&lo).map(|(&a, &b)| (a + b) * w).collect()
}
