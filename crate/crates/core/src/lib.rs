//! Multiple-quantum NMR dynamics of dipolar-coupled spin-1/2 clusters.
//!
//! The crate evolves deviation density matrices under the double-quantum
//! average Hamiltonian by exact diagonalization, decomposes them into
//! multiple-quantum coherence orders (splitting the zero-quantum part into
//! populations and non-diagonal coherences), and runs the four-stage
//! pseudopure-state preparation: excitation, coherence filtering, time
//! reversal and partial saturation.
//!
//! ```no_run
//! use mqnmr::{equilibrium_state, ring_couplings, Model, Threshold};
//!
//! let model = Model::new(ring_couplings(4, 1.0)?)?;
//! let rho_eq = equilibrium_state(model.basis());
//! let zeros = model.find_nd0q_zeros(&rho_eq, 10.0, 0.01, Threshold::default())?;
//! println!("{:?}", zeros.times());
//! # Ok::<(), mqnmr::Error>(())
//! ```
//!
//! Times are in units of 1/D₁ and couplings in units of D₁, the
//! nearest-neighbour dipolar constant; ħ = γ = 1.

pub mod basis;
pub mod cli;
pub mod coherence;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hamiltonian;
mod linalg;
pub mod model;
pub mod protocol;

pub use basis::{
    build_basis, build_basis_with_cap, collective_iz, equilibrium_state, intermediate_state, single_spin_ops,
    trace_iz_squared, BasisInfo, DensityMatrix, Operator, Sign, SpinOps, DEFAULT_SPIN_CAP,
};
pub use coherence::{coherence_order, mq_filter, mq_spectrum, scan_trajectory, CoherenceSpectrum, Normalization};
pub use dynamics::{
    diagonalize, diagonalize_blocked, evolve, evolve_series, evolve_series_par, Direction, PreparedState, Propagator,
};
pub use error::{Error, Result};
pub use geometry::{
    chain_couplings, coupling_from_geometry, cyclopentane_couplings, load_couplings, parse_couplings,
    rectangle_couplings, ring_couplings, SpinSystem,
};
pub use hamiltonian::{dipolar_secular, dq_average};
pub use linalg::c64;
pub use model::{Model, ModelOptions};
pub use protocol::{
    find_homqc_maxima, find_nd0q_zeros, partial_saturate, pseudopure_metrics, run_protocol, ProtocolResult,
    ProtocolSchedule, PseudopureMetrics, SignPattern, Threshold, ZeroSearch,
};
