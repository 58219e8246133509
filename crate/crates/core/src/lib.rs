//! Repeated measurement of a free particle on a periodic lattice.
//!
//! The particle lives on `N` sites with periodic boundaries. Free evolution is
//! diagonal in the discrete momentum basis, so a density matrix is moved with a
//! two-sided FFT, multiplied elementwise by a phase table and moved back. Between
//! evolution steps a measurement channel is applied in the position basis:
//!
//! * [`channels::pvm_channel`] zeroes every element coupling two different
//!   coarse-grained regions (a projective, region-resolved position measurement);
//! * [`channels::kernel_channel`] damps off-diagonal elements by a symmetric
//!   kernel of the site separation, which is what tracing out a Gaussian pointer
//!   coupled to position does.
//!
//! [`harness`] strings these together into scheduled runs driven by
//! [`scenario::Scenario`] files and records [`observables::ObservableRecord`]s.
//!
//! With the default `parallel` feature the row/column FFT passes and the
//! elementwise channel kernels run on rayon; [`Execution::Sequential`] (or
//! building without the feature) keeps everything on the calling thread. Results
//! are identical either way.

pub mod channels;
mod error;
mod exec;
pub mod harness;
pub mod lattice;
pub mod observables;
pub mod oracle;
pub mod output;
pub mod scenario;
pub mod states;

pub use error::{Error, Result};
pub use exec::Execution;
pub use lattice::{dispersion, Basis, DensityMatrix, Lattice, LatticeConfig, PhaseTable, StateVector};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
