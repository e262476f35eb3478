//! Photon-added Bell-type entangled coherent states.
//!
//! The crate builds the four states `N a†^m b†^n (|γ, ±γ⟩ ± |-γ, ∓γ⟩)`,
//! computes their single-mode moments along two independent routes, and
//! evaluates four lower/higher-order nonclassicality witnesses:
//!
//! * [`analytic`]: closed-form Laguerre expressions for the moments;
//! * [`fock`]: a truncated two-mode Fock-space oracle;
//! * [`witness`]: Mandel `Q^(l)`, antibunching `d(l-1)`, sub-Poissonian
//!   `D(l-1)` and Hong-Mandel squeezing `S(l)`;
//! * [`sweep`]: parameter sweeps, figure datasets and verification reports.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod analytic;
pub mod error;
pub mod fock;
pub mod moments;
pub mod numeric;
pub mod specfn;
pub mod states;
pub mod sweep;
pub mod witness;

pub use analytic::Analytic;
pub use error::{Error, Result};
pub use fock::{CutoffPolicy, FockStateTwoMode};
pub use moments::{MomentTable, Provenance};
pub use num_complex::Complex64;
pub use states::{Family, StateSpec};
pub use witness::{WitnessKind, WitnessReport};
