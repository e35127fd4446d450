//! Exact dephasing dynamics of two uncoupled qubits z-x coupled to finite
//! spin baths: closed-form dephasing coefficients for local and shared
//! environments in mixed, pure and block-entangled initial states, an
//! approximation-free small-matrix oracle the kernels are tested against,
//! Kraus and direct reduced-density-matrix assembly, Wootters concurrence,
//! and a scenario runner that samples random baths and emits CSV/SVG series.

pub mod eig;
pub mod entanglement;
pub mod error;
pub mod kernels;
pub mod mat;
pub mod model;
pub mod oracle;
pub mod rdm;
pub mod scenario;

pub use error::{Error, Result};
