//! A spin system together with its basis, double-quantum Hamiltonian and
//! diagonalized propagator, built once and shared by scans and protocols.

use crate::basis::{build_basis_with_cap, BasisInfo, DensityMatrix, Operator, DEFAULT_SPIN_CAP};
use crate::coherence::{self, CoherenceSpectrum};
use crate::dynamics::{diagonalize, diagonalize_blocked, evolve, Direction, PreparedState, Propagator};
use crate::error::Result;
use crate::geometry::SpinSystem;
use crate::hamiltonian::dq_average;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelOptions {
    pub max_spins: usize,
    /// Diagonalize the two m_z-parity sectors separately.
    pub parity_blocking: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            max_spins: DEFAULT_SPIN_CAP,
            parity_blocking: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    system: SpinSystem,
    basis: BasisInfo,
    hamiltonian: Operator,
    propagator: Propagator,
}

impl Model {
    pub fn new(system: SpinSystem) -> Result<Self> {
        Self::with_options(system, ModelOptions::default())
    }

    pub fn with_options(system: SpinSystem, options: ModelOptions) -> Result<Self> {
        let basis = build_basis_with_cap(system.n_spins(), options.max_spins)?;
        let hamiltonian = dq_average(&system, &basis)?;
        let propagator = if options.parity_blocking {
            diagonalize_blocked(&hamiltonian, &basis)?
        } else {
            diagonalize(&hamiltonian)?
        };
        Ok(Model {
            system,
            basis,
            hamiltonian,
            propagator,
        })
    }

    pub fn system(&self) -> &SpinSystem {
        &self.system
    }

    pub fn basis(&self) -> &BasisInfo {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn prepare(&self, rho0: &DensityMatrix) -> Result<PreparedState<'_>> {
        self.propagator.prepare(rho0)
    }

    pub fn evolve(&self, rho0: &DensityMatrix, t: f64, direction: Direction) -> Result<DensityMatrix> {
        evolve(&self.propagator, rho0, t, direction)
    }

    pub fn scan(&self, initial: &DensityMatrix, times: &[f64], normalization: f64) -> Result<Vec<CoherenceSpectrum>> {
        if let Some(t) = times.iter().find(|t| !t.is_finite()) {
            return Err(crate::Error::Domain(format!("scan time must be finite, got {t}")));
        }
        let prepared = self.prepare(initial)?;
        coherence::spectra_at(&prepared, &self.basis, times, normalization)
    }
}
