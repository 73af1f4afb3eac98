//! Genuine multipartite entanglement of pure states: a pure state is GME iff
//! it has Schmidt rank above one across every bipartition.

use num_traits::Zero;

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::{singular_values, CMatrix};
use crate::scalar::Real;

/// Schmidt coefficients (descending) across the cut `part | rest`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut<T: Real> {
    /// Sites on the side containing site 0.
    pub part: Vec<usize>,
    pub schmidt: Vec<T>,
}

impl<T: Real> Cut<T> {
    /// Second-largest Schmidt coefficient (0 if there is only one).
    pub fn second(&self) -> T {
        self.schmidt.get(1).copied().unwrap_or_else(T::zero)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmeReport<T: Real> {
    pub is_gme: bool,
    pub cuts: Vec<Cut<T>>,
}

impl<T: Real> GmeReport<T> {
    /// Smallest second Schmidt coefficient over all cuts.
    pub fn min_second(&self) -> T {
        self.cuts
            .iter()
            .map(Cut::second)
            .fold(T::infinity(), |a, b| a.min(b))
    }
}

/// Proper subsets containing site 0, in lexicographic order.
pub fn bipartitions(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..(1usize << (n.saturating_sub(1))))
        .map(|mask| {
            let mut part = vec![0];
            part.extend((1..n).filter(|&s| (mask >> (s - 1)) & 1 == 1));
            part
        })
        .filter(|p| p.len() < n)
        .collect();
    out.sort();
    out
}

/// Schmidt coefficients of `state` across `part | rest`.
pub fn schmidt_coefficients<T: Real>(state: &StateVector<T>, part: &[usize]) -> Result<Vec<T>> {
    let dims = state.site_dims();
    let n = dims.len();
    if let Some(&bad) = part.iter().find(|&&s| s >= n) {
        return Err(Error::IndexOutOfRange { index: bad, sites: n });
    }
    let in_part: Vec<bool> = (0..n).map(|s| part.contains(&s)).collect();
    let rows: usize = (0..n).filter(|&s| in_part[s]).map(|s| dims[s]).product();
    let cols: usize = (0..n).filter(|&s| !in_part[s]).map(|s| dims[s]).product();
    let mut m = CMatrix::<T>::zeros(rows, cols);
    let mut digits = vec![0usize; n];
    for (idx, &amp) in state.amplitudes().iter().enumerate() {
        let mut rem = idx;
        for s in (0..n).rev() {
            digits[s] = rem % dims[s];
            rem /= dims[s];
        }
        let (mut r, mut c) = (0, 0);
        for s in 0..n {
            if in_part[s] {
                r = r * dims[s] + digits[s];
            } else {
                c = c * dims[s] + digits[s];
            }
        }
        if !amp.is_zero() {
            m[(r, c)] = amp;
        }
    }
    singular_values(&m)
}

/// Checks every bipartition; GME iff each second Schmidt coefficient exceeds `tol`.
pub fn gme_certify<T: Real>(state: &StateVector<T>, tol: T) -> Result<GmeReport<T>> {
    let n = state.n_sites();
    if n < 2 {
        return Err(Error::InvalidParams(
            "GME certification needs at least two sites".into(),
        ));
    }
    let cuts = bipartitions(n)
        .into_iter()
        .map(|part| {
            let schmidt = schmidt_coefficients(state, &part)?;
            Ok(Cut { part, schmidt })
        })
        .collect::<Result<Vec<_>>>()?;
    let is_gme = cuts.iter().all(|c| c.second() > tol);
    Ok(GmeReport { is_gme, cuts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::{ghz, GhzParams};
    use crate::scalar::c;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn enumeration_order() {
        assert_eq!(bipartitions(3), vec![vec![0], vec![0, 1], vec![0, 2]]);
        assert_eq!(bipartitions(4).len(), 7);
        assert_eq!(bipartitions(2), vec![vec![0]]);
    }

    #[test]
    fn product_is_not_gme() {
        let s = StateVector::<f64>::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let r = gme_certify(&s, 1e-8).unwrap();
        assert!(!r.is_gme);
        assert!(r.cuts.iter().all(|c| c.second() < 1e-15));
    }

    #[test]
    fn ghz_is_gme_with_balanced_coefficients() {
        let s = ghz(GhzParams { theta: 0.0, phi: 0.0, n: 3 }).unwrap();
        let r = gme_certify(&s, 1e-8).unwrap();
        assert!(r.is_gme);
        for cut in &r.cuts {
            assert!((cut.schmidt[0] - FRAC_1_SQRT_2).abs() < 1e-14);
            assert!((cut.schmidt[1] - FRAC_1_SQRT_2).abs() < 1e-14);
        }
    }

    #[test]
    fn bell_pair_times_qubit_is_biseparable() {
        let h = FRAC_1_SQRT_2;
        let bell = StateVector::new(vec![2, 2], vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        let s = bell.tensor(&StateVector::basis(vec![2], &[0]).unwrap());
        let r = gme_certify(&s, 1e-8).unwrap();
        assert!(!r.is_gme);
        let cut = r.cuts.iter().find(|c| c.part == vec![0, 1]).unwrap();
        assert!(cut.second() < 1e-15);
    }

    #[test]
    fn single_site_is_rejected() {
        let s = StateVector::<f64>::basis(vec![2], &[0]).unwrap();
        assert!(gme_certify(&s, 1e-8).is_err());
    }
}
