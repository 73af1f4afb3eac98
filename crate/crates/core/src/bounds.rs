//! Analytic bounds on `Tr(W F^-1)` and the conditions under which they are met.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::linalg::{eigh, CMatrix};
use crate::probes::{extremal_superposition, gme_certify, DensityOp, StateVector};
use crate::qfim::{figure_of_merit, qfim_mixed, qfim_pure, FisherInfo, InversePolicy};
use crate::scalar::Real;
use crate::tol;
use crate::weights::Weight;

/// Lower bound over all pure probes: `Tr(W^{1/2})^2 / sum_i (lambda_max^i - lambda_min^i)^2`.
pub fn probe_optimized_bound<T: Real>(w: &Weight<T>, h: &Hamiltonian<T>) -> Result<T> {
    if w.dim() != h.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: h.n_sites(),
            found: w.dim(),
        });
    }
    let xi = h.gap_sum_sq()?;
    if xi <= T::zero() {
        return Err(Error::DegenerateHamiltonian);
    }
    let t = w.trace_sqrt();
    Ok(t * t / xi)
}

/// Largest variance of a Hermitian generator, `(lambda_max - lambda_min)^2 / 4`,
/// and the single-site state attaining it.
pub fn max_local_variance<T: Real>(h_i: &CMatrix<T>) -> Result<(T, StateVector<T>)> {
    let eig = eigh(h_i)?;
    if eig.dim() == 0 {
        return Err(Error::NoSites);
    }
    let gap = eig.max() - eig.min();
    let state = StateVector::normalized(vec![eig.dim()], extremal_superposition(&eig))?;
    Ok((gap * gap / T::lit(4.0), state))
}

/// `||F - (Tr F / Tr W^{1/2}) W^{1/2}||_max`; zero iff the bound is attained.
pub fn attainability_residual<T: Real>(f: &FisherInfo<T>, w: &Weight<T>) -> Result<T> {
    if w.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: w.dim(),
        });
    }
    let ts = w.trace_sqrt();
    if ts <= T::zero() {
        return Err(Error::InvalidParams("weight has zero trace".into()));
    }
    let target = w.sqrt().scale(f.trace() / ts);
    Ok(f.matrix().max_abs_diff(&target))
}

/// Best value over pure product probes for the correlated weight: `4N[(N-1)alpha^2 + 1]`.
pub fn product_probe_bound<T: Real>(n: usize, alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidAlpha(alpha.as_f64()));
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!("product bound needs N >= 2, got {n}")));
    }
    let nf = T::lit(n as f64);
    Ok(T::lit(4.0) * nf * ((nf - T::one()) * alpha * alpha + T::one()))
}

/// Trace inequality for mixed probes: `Tr F <= 4 r sum_i Var(H_i)` with
/// `r = (eta_max - eta_min)^2 / (eta_max + eta_min)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedTraceBound<T: Real> {
    pub r: T,
    pub lhs: T,
    pub rhs: T,
}

impl<T: Real> MixedTraceBound<T> {
    pub fn holds(&self, slack: T) -> bool {
        self.lhs <= self.rhs + slack
    }
}

/// The spectrum of `rho` is unchanged by the unitary encoding, so `rho` may be
/// passed before or after encoding.
pub fn mixed_trace_bound<T: Real>(rho: &DensityOp<T>, h: &Hamiltonian<T>) -> Result<MixedTraceBound<T>> {
    let f = qfim_mixed(rho, h)?;
    let eig = rho.spectrum()?;
    let hi = eig.max().max(T::zero());
    let lo = eig.min().max(T::zero());
    let r = ((hi - lo) / (hi + lo)).powi(2);
    let mut var = T::zero();
    for i in 0..h.n_sites() {
        let e = h.embed(i)?;
        let mean = rho.expectation(&e)?.re;
        let sq = rho.expectation(&(&e * &e))?.re;
        var += sq - mean * mean;
    }
    Ok(MixedTraceBound {
        r,
        lhs: f.trace(),
        rhs: T::lit(4.0) * r * var,
    })
}

/// Flat record comparing an achieved figure of merit against the bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: Option<f64>,
    pub family: String,
    pub bound: f64,
    pub achieved: f64,
    /// `achieved - bound`
    pub residual: f64,
    pub equality_residual: f64,
    pub gme: Option<bool>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "N,alpha,family,bound,achieved,residual,equality_residual,gme";

    /// Evaluates a pure probe against `(W, h)`.
    pub fn for_pure_probe<T: Real>(
        w: &Weight<T>,
        h: &Hamiltonian<T>,
        probe: &StateVector<T>,
        family: &str,
    ) -> Result<Self> {
        let bound = probe_optimized_bound(w, h)?;
        let f = qfim_pure(probe, h)?;
        let achieved = figure_of_merit(w, &f, InversePolicy::Pseudo)?;
        let equality_residual = attainability_residual(&f, w)?;
        let gme = if probe.n_sites() >= 2 {
            Some(gme_certify(probe, tol::floored::<T>(tol::SCHMIDT))?.is_gme)
        } else {
            None
        };
        Ok(Self {
            n: h.n_sites(),
            alpha: w.alpha().map(|a| a.as_f64()),
            family: family.to_string(),
            bound: bound.as_f64(),
            achieved: achieved.as_f64(),
            residual: (achieved - bound).as_f64(),
            equality_residual: equality_residual.as_f64(),
            gme,
        })
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.n,
            opt(self.alpha.map(|a| format!("{a:.16e}"))),
            self.family,
            self.bound,
            self.achieved,
            self.residual,
            self.equality_residual,
            opt(self.gme.map(|g| g.to_string())),
        )
    }
}
