//! Centralized numerical tolerances.
//!
//! Values are given for `f64`. Each accessor floors the value at a multiple of
//! the type's machine epsilon, so narrower types get usable thresholds.

use crate::scalar::Real;

pub const HERM: f64 = 1e-10;
pub const ORTH: f64 = 1e-10;
pub const EIG: f64 = 1e-9;
pub const PSD: f64 = 1e-10;
/// Relative rank threshold for pseudo-inverses.
pub const RANK: f64 = 1e-10;
pub const NORM: f64 = 1e-12;
/// Eigenvalue-pair cutoff in the mixed-state Fisher information sum.
pub const PAIR_CUTOFF: f64 = 1e-12;
/// Relative tolerance for the support test in the pseudo-inverse figure of merit.
pub const SUPPORT: f64 = 1e-8;
/// Default threshold on the second Schmidt coefficient.
pub const SCHMIDT: f64 = 1e-8;

#[inline]
pub fn floored<T: Real>(v: f64) -> T {
    let floor = T::epsilon() * T::lit(1e3);
    T::lit(v).max(floor)
}

#[inline]
pub fn herm<T: Real>() -> T {
    floored(HERM)
}

#[inline]
pub fn psd<T: Real>() -> T {
    floored(PSD)
}

#[inline]
pub fn rank<T: Real>() -> T {
    floored(RANK)
}

#[inline]
pub fn norm<T: Real>() -> T {
    floored(NORM)
}

#[inline]
pub fn pair_cutoff<T: Real>() -> T {
    floored(PAIR_CUTOFF)
}

#[inline]
pub fn support<T: Real>() -> T {
    floored(SUPPORT)
}
