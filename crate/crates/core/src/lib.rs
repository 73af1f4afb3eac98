//! Multiparameter estimation of independent local fields.
//!
//! Fisher information of pure and mixed probes under local-field encoding,
//! the probe-optimized lower bound on `Tr(W F^-1)`, the correlated weight
//! family and its closed-form square root, the probe families that attain
//! (or miss) the bound, and a restarted simplex search over them.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32`, `f64`); the
//! search harness, file formats and check suite run in `f64`.

pub mod bounds;
pub mod error;
pub mod hamiltonian;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod probes;
pub mod qfim;
pub mod scalar;
pub mod tol;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};

pub type ComplexMatrix = linalg::CMatrix<f64>;
pub type ComplexMatrix32 = linalg::CMatrix<f32>;
pub type PureState = probes::StateVector<f64>;
pub type PureState32 = probes::StateVector<f32>;
pub type DensityMatrix = probes::DensityOp<f64>;
pub type DensityMatrix32 = probes::DensityOp<f32>;
pub type LocalHamiltonian = hamiltonian::Hamiltonian<f64>;
pub type LocalHamiltonian32 = hamiltonian::Hamiltonian<f32>;
pub type WeightMatrix = weights::Weight<f64>;
pub type WeightMatrix32 = weights::Weight<f32>;
pub type Qfim = qfim::FisherInfo<f64>;
pub type Qfim32 = qfim::FisherInfo<f32>;
