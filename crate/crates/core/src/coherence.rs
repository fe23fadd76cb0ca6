//! Multiple-quantum coherence intensities and coherence-order filtering.
//!
//! The intensity of order k collects the squared moduli of all density-matrix
//! elements ρ_pq with m_z(p) − m_z(q) = k, divided by a normalization
//! constant (Tr I_z² by default). The zero-quantum intensity is further split
//! into its diagonal part (populations) and its non-diagonal part (coherences
//! between distinct states of equal m_z).

use faer::Mat;
use rayon::prelude::*;

use crate::basis::{trace_iz_squared, BasisInfo, DensityMatrix};
use crate::dynamics::PreparedState;
use crate::error::{Error, Result};
use crate::geometry::SpinSystem;
use crate::linalg::c64;
use crate::model::Model;

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceSpectrum {
    n_spins: usize,
    /// Intensity of order k stored at `k + n_spins`.
    orders: Vec<f64>,
    j0_diag: f64,
    j0_nondiag: f64,
    normalization: f64,
}

impl CoherenceSpectrum {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    /// J_kQ; zero for |k| > N.
    pub fn order(&self, k: i32) -> f64 {
        let idx = k + self.n_spins as i32;
        if idx < 0 {
            return 0.0;
        }
        self.orders.get(idx as usize).copied().unwrap_or(0.0)
    }

    /// `(k, J_kQ)` for k = −N..=N.
    pub fn orders(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        let n = self.n_spins as i32;
        self.orders.iter().enumerate().map(move |(i, &v)| (i as i32 - n, v))
    }

    pub fn j0_diag(&self) -> f64 {
        self.j0_diag
    }

    pub fn j0_nondiag(&self) -> f64 {
        self.j0_nondiag
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Σ_k J_kQ, equal to Tr ρ² / normalization.
    pub fn total(&self) -> f64 {
        self.orders.iter().sum()
    }
}

/// Divisor applied to raw squared-modulus sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Normalization {
    /// Tr I_z², so that ρ_eq has unit total intensity.
    #[default]
    #[serde(rename = "eq6")]
    TraceIzSquared,
    /// Tr ρ(0)², so that any initial state has unit total intensity.
    #[serde(rename = "initial")]
    InitialPurity,
}

impl Normalization {
    pub fn value(self, basis: &BasisInfo, initial: &DensityMatrix) -> Result<f64> {
        let v = match self {
            Normalization::TraceIzSquared => trace_iz_squared(basis),
            Normalization::InitialPurity => initial.purity(),
        };
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::Domain("normalization is zero for this initial state".into()))
        }
    }
}

/// k = m_z(p) − m_z(q)
pub fn coherence_order(p: usize, q: usize, basis: &BasisInfo) -> Result<i32> {
    basis.check_index(p)?;
    basis.check_index(q)?;
    Ok((basis.twice_m_z(p) - basis.twice_m_z(q)) / 2)
}

fn check_dims(rho: &DensityMatrix, basis: &BasisInfo) -> Result<()> {
    if rho.dim() != basis.dim() {
        return Err(Error::Validation(format!(
            "state dimension {} does not match basis dimension {}",
            rho.dim(),
            basis.dim()
        )));
    }
    Ok(())
}

pub fn mq_spectrum(rho: &DensityMatrix, basis: &BasisInfo, normalization: f64) -> Result<CoherenceSpectrum> {
    if !(normalization > 0.0) || !normalization.is_finite() {
        return Err(Error::Domain(format!("normalization must be positive, got {normalization}")));
    }
    check_dims(rho, basis)?;
    let n = basis.n_spins();
    let mut orders = vec![0.0; 2 * n + 1];
    let mut j0_diag = 0.0;
    let mut j0_nondiag = 0.0;
    let m = rho.as_mat();
    for q in 0..basis.dim() {
        let mq = basis.twice_m_z(q);
        for p in 0..basis.dim() {
            let w = m[(p, q)].norm_sqr();
            let k = (basis.twice_m_z(p) - mq) / 2;
            orders[(k + n as i32) as usize] += w;
            if k == 0 {
                if p == q {
                    j0_diag += w;
                } else {
                    j0_nondiag += w;
                }
            }
        }
    }
    for o in &mut orders {
        *o /= normalization;
    }
    Ok(CoherenceSpectrum {
        n_spins: n,
        orders,
        j0_diag: j0_diag / normalization,
        j0_nondiag: j0_nondiag / normalization,
        normalization,
    })
}

/// Keeps the ±k coherence blocks and zeroes everything else.
pub fn mq_filter(rho: &DensityMatrix, basis: &BasisInfo, k: usize) -> Result<DensityMatrix> {
    check_dims(rho, basis)?;
    if k > basis.n_spins() {
        return Err(Error::Index {
            what: "coherence order",
            index: k,
            valid: format!("0..={}", basis.n_spins()),
        });
    }
    let twice_k = 2 * k as i32;
    let m = rho.as_mat();
    let out = Mat::from_fn(basis.dim(), basis.dim(), |p, q| {
        if (basis.twice_m_z(p) - basis.twice_m_z(q)).abs() == twice_k {
            m[(p, q)]
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Ok(DensityMatrix::from_mat_unchecked(out))
}

/// Non-diagonal zero-quantum intensity only; skips the other orders.
pub(crate) fn j0_nondiag(rho: &DensityMatrix, basis: &BasisInfo, normalization: f64) -> f64 {
    let m = rho.as_mat();
    let mut acc = 0.0;
    for q in 0..basis.dim() {
        let mq = basis.twice_m_z(q);
        for p in 0..basis.dim() {
            if p != q && basis.twice_m_z(p) == mq {
                acc += m[(p, q)].norm_sqr();
            }
        }
    }
    acc / normalization
}

pub(crate) fn spectra_at(
    prepared: &PreparedState<'_>,
    basis: &BasisInfo,
    times: &[f64],
    normalization: f64,
) -> Result<Vec<CoherenceSpectrum>> {
    times
        .par_iter()
        .map(|&t| mq_spectrum(&prepared.at(t), basis, normalization))
        .collect()
}

/// Coherence spectra of `initial` evolved under the double-quantum average
/// Hamiltonian of `system`, one per entry of `times`.
pub fn scan_trajectory(
    system: &SpinSystem,
    initial: &DensityMatrix,
    times: &[f64],
    normalization: f64,
) -> Result<Vec<CoherenceSpectrum>> {
    Model::new(system.clone())?.scan(initial, times, normalization)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, equilibrium_state};
    use crate::dynamics::{diagonalize, evolve, Direction};
    use crate::geometry::chain_couplings;
    use crate::hamiltonian::dq_average;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn orders_of_pairs() {
        let b2 = build_basis(2).unwrap();
        assert_eq!(coherence_order(1, 1, &b2).unwrap(), 0);
        assert_eq!(coherence_order(0, 3, &b2).unwrap(), 2);
        assert_eq!(coherence_order(3, 0, &b2).unwrap(), -2);
        let b4 = build_basis(4).unwrap();
        assert_eq!(coherence_order(0, 15, &b4).unwrap(), 4);
        assert!(coherence_order(16, 0, &b4).is_err());
        let b3 = build_basis(3).unwrap();
        assert_eq!(coherence_order(0, 7, &b3).unwrap(), 3);
    }

    #[test]
    fn equilibrium_is_pure_zero_quantum() {
        for n in 1..=6 {
            let b = build_basis(n).unwrap();
            let s = mq_spectrum(&equilibrium_state(&b), &b, trace_iz_squared(&b)).unwrap();
            assert!((s.order(0) - 1.0).abs() < 1e-15);
            assert_eq!(s.j0_nondiag(), 0.0);
            assert!((s.j0_diag() - 1.0).abs() < 1e-15);
            for (k, v) in s.orders() {
                if k != 0 {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn two_spin_evolved_spectrum() {
        let sys = chain_couplings(2, 1.0).unwrap();
        let b = build_basis(2).unwrap();
        let p = diagonalize(&dq_average(&sys, &b).unwrap()).unwrap();
        let rho = evolve(&p, &equilibrium_state(&b), FRAC_PI_4, Direction::Forward).unwrap();
        let s = mq_spectrum(&rho, &b, 2.0).unwrap();
        assert!((s.order(0) - 0.5).abs() < 1e-12);
        assert!((s.order(2) - 0.25).abs() < 1e-12);
        assert!((s.order(-2) - 0.25).abs() < 1e-12);

        let f = mq_filter(&rho, &b, 2).unwrap();
        for p in 0..4 {
            for q in 0..4 {
                let keep = (p, q) == (0, 3) || (p, q) == (3, 0);
                assert_eq!(f.get(p, q) != c64::new(0.0, 0.0), keep, "({p},{q})");
            }
        }
    }

    #[test]
    fn filter_zero_keeps_zero_quantum_block() {
        let b = build_basis(3).unwrap();
        let rho = DensityMatrix::new(Mat::from_fn(8, 8, |p, q| {
            c64::new((p + q) as f64, p as f64 - q as f64)
        }))
        .unwrap();
        let f = mq_filter(&rho, &b, 0).unwrap();
        for p in 0..8 {
            for q in 0..8 {
                let expected = if b.twice_m_z(p) == b.twice_m_z(q) { rho.get(p, q) } else { c64::new(0.0, 0.0) };
                assert_eq!(f.get(p, q), expected);
            }
        }
        assert!(mq_filter(&rho, &b, 4).is_err());
    }

    #[test]
    fn bad_normalization() {
        let b = build_basis(2).unwrap();
        assert!(matches!(mq_spectrum(&equilibrium_state(&b), &b, 0.0), Err(Error::Domain(_))));
        assert!(mq_spectrum(&equilibrium_state(&b), &b, -1.0).is_err());
    }
}
