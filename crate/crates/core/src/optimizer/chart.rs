//! Parameter charts mapping unconstrained real vectors onto probe families.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::probes::{ghz, n3_interval, parametric_n3, product, GhzParams, N3Params, StateVector};
use crate::scalar::{c, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Ghz,
    Product,
    ParametricN3,
    GeneralPure,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Ghz, Family::Product, Family::ParametricN3, Family::GeneralPure];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::Product => "product",
            Family::ParametricN3 => "parametric_n3",
            Family::GeneralPure => "general_pure",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnsupportedFamily {
                family: s.to_string(),
                reason: "unknown family name".into(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Chart {
    /// `(theta, phi)`
    Ghz { n: usize },
    /// `(theta_i, phi_i)` per site
    Product { n: usize },
    /// `x` with `sin^2 chi = lo + (hi - lo) sin^2 x`, then seven phases
    ParametricN3 { alpha: f64 },
    /// `dim - 1` hyperspherical angles then `dim - 1` relative phases
    GeneralPure { site_dims: Vec<usize> },
}

fn unsupported(family: Family, reason: impl Into<String>) -> Error {
    Error::UnsupportedFamily {
        family: family.name().to_string(),
        reason: reason.into(),
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

impl Chart {
    /// `alpha` is only consulted by the three-qubit parametric family.
    pub(crate) fn new(family: Family, h: &Hamiltonian<f64>, alpha: Option<f64>) -> Result<Self> {
        let n = h.n_sites();
        let qubits = h.is_qubit_system();
        match family {
            Family::Ghz if !qubits => Err(unsupported(family, "requires qubit sites")),
            Family::Ghz if n < 2 => Err(unsupported(family, "requires at least two sites")),
            Family::Ghz => Ok(Chart::Ghz { n }),
            Family::Product if !qubits => Err(unsupported(family, "requires qubit sites")),
            Family::Product => Ok(Chart::Product { n }),
            Family::ParametricN3 if !qubits || n != 3 => {
                Err(unsupported(family, "requires exactly three qubit sites"))
            }
            Family::ParametricN3 => match alpha {
                Some(a) if a > 0.0 && a < 1.0 => Ok(Chart::ParametricN3 { alpha: a }),
                _ => Err(unsupported(
                    family,
                    "needs the correlation parameter of a closed-form weight",
                )),
            },
            Family::GeneralPure if h.dim() < 2 => Err(unsupported(family, "Hilbert space is one-dimensional")),
            Family::GeneralPure => Ok(Chart::GeneralPure {
                site_dims: h.site_dims().to_vec(),
            }),
        }
    }

    pub(crate) fn n_params(&self) -> usize {
        match self {
            Chart::Ghz { .. } => 2,
            Chart::Product { n } => 2 * n,
            Chart::ParametricN3 { .. } => 8,
            Chart::GeneralPure { site_dims } => 2 * (site_dims.iter().product::<usize>() - 1),
        }
    }

    pub(crate) fn state(&self, x: &[f64]) -> Result<StateVector<f64>> {
        if x.len() != self.n_params() {
            return Err(Error::DimensionMismatch {
                expected: self.n_params(),
                found: x.len(),
            });
        }
        match self {
            Chart::Ghz { n } => ghz(GhzParams {
                theta: x[0],
                phi: x[1],
                n: *n,
            }),
            Chart::Product { .. } => {
                let angles: Vec<(f64, f64)> = x.chunks(2).map(|p| (p[0], p[1])).collect();
                product(&angles)
            }
            Chart::ParametricN3 { alpha } => {
                let (lo, hi) = n3_interval(*alpha);
                let s2 = lo + (hi - lo) * x[0].sin().powi(2);
                let mut phases = [0.0; 7];
                phases.copy_from_slice(&x[1..8]);
                parametric_n3(N3Params {
                    alpha: *alpha,
                    chi: s2.clamp(0.0, 1.0).sqrt().asin(),
                    phases,
                })
            }
            Chart::GeneralPure { site_dims } => {
                let dim: usize = site_dims.iter().product();
                let (angles, phases) = x.split_at(dim - 1);
                let mut amps: Vec<C<f64>> = Vec::with_capacity(dim);
                let mut radius = 1.0;
                for k in 0..dim {
                    let mag = if k + 1 < dim {
                        let (s, co) = angles[k].sin_cos();
                        let m = radius * co;
                        radius *= s;
                        m
                    } else {
                        radius
                    };
                    let phase = if k == 0 { 0.0 } else { phases[k - 1] };
                    amps.push(c(phase.cos(), phase.sin()) * mag);
                }
                StateVector::normalized(site_dims.clone(), amps)
            }
        }
    }

    pub(crate) fn random_start(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            Chart::Ghz { .. } => vec![rng.random_range(0.0..PI), rng.random_range(0.0..TAU)],
            Chart::Product { n } => (0..*n)
                .flat_map(|_| [rng.random_range(0.0..PI), rng.random_range(0.0..TAU)])
                .collect(),
            Chart::ParametricN3 { .. } => {
                let mut x = vec![rng.random_range(0.0..PI)];
                x.extend((0..7).map(|_| rng.random_range(0.0..TAU)));
                x
            }
            Chart::GeneralPure { .. } => {
                let m = self.n_params() / 2;
                let mut x: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..PI)).collect();
                x.extend((0..m).map(|_| rng.random_range(0.0..TAU)));
                x
            }
        }
    }

    /// Representative of the same state with angles reduced to their principal ranges.
    pub(crate) fn canonical(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Chart::Ghz { .. } => vec![wrap(x[0], TAU), wrap(x[1], TAU)],
            Chart::Product { .. } => x
                .chunks(2)
                .flat_map(|p| {
                    let mut theta = wrap(p[0], TAU);
                    let mut phi = p[1];
                    if theta > PI {
                        // (2pi - theta, phi + pi) differs by a global sign
                        theta = TAU - theta;
                        phi += PI;
                    }
                    [theta, wrap(phi, TAU)]
                })
                .collect(),
            Chart::ParametricN3 { .. } => {
                let mut out = vec![wrap(x[0], PI)];
                out.extend(x[1..].iter().map(|&p| wrap(p, TAU)));
                out
            }
            Chart::GeneralPure { .. } => {
                let m = x.len() / 2;
                let mut out = x[..m].to_vec();
                out.extend(x[m..].iter().map(|&p| wrap(p, TAU)));
                out
            }
        }
    }
}
