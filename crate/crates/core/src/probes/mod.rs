//! Probe states: pure and mixed carriers, the closed-form families, seeded
//! random sampling and the genuine-multipartite-entanglement certificate.

mod families;
mod gme;
mod random;
mod state;

pub use families::{
    ghz, n3_interval, n3_squared_moduli, parametric_n3, product, GhzParams, N3Params,
};
pub(crate) use families::extremal_superposition;
pub use gme::{bipartitions, gme_certify, schmidt_coefficients, Cut, GmeReport};
pub use random::{haar_random_pure, random_mixed};
pub use state::{DensityOp, StateVector};
