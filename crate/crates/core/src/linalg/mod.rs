//! Dense complex linear algebra kernel.

mod eigen;
mod functions;
mod matrix;
mod svd;

pub use eigen::{eigh, eigvalsh, Spectrum};
pub use functions::{partial_trace, pinv_psd, pinv_psd_full, sqrt_psd, PsdInverse};
pub use matrix::{pauli, CMatrix};
pub use svd::singular_values;
