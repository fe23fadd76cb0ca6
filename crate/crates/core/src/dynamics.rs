//! Exact propagation of density matrices under a time-independent Hamiltonian.
//!
//! The Hamiltonian is diagonalized once. For an initial state ρ₀ the rotated
//! matrix ρ̃ = V†ρ₀V is cached, so each time point costs one elementwise
//! phase multiplication plus the rotation back, ρ(t) = V (Φ(t) ∘ ρ̃) V† with
//! Φ_ab(t) = exp(−i(λ_a − λ_b)t).
//!
//! A propagator may be split into independent sectors (see
//! [`diagonalize_blocked`]); each sector pair is then handled separately and
//! blocks of ρ̃ that vanish are skipped.

use faer::{Mat, Side};
use rayon::prelude::*;

use crate::basis::{BasisInfo, DensityMatrix, Operator, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, c64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// ρ(t) = e^{−iHt} ρ e^{iHt}
    Forward,
    /// Evolution under −H, i.e. the time-reversed sequence.
    Reversed,
}

impl Direction {
    fn signed(self, t: f64) -> f64 {
        match self {
            Direction::Forward => t,
            Direction::Reversed => -t,
        }
    }
}

#[derive(Debug, Clone)]
struct Sector {
    /// Global basis indices spanned by this sector, ascending.
    indices: Vec<usize>,
    eigenvalues: Vec<f64>,
    /// Columns are eigenvectors expressed in the sector's sub-basis.
    vectors: Mat<c64>,
}

/// Eigendecomposition of a Hermitian Hamiltonian, reusable across times and
/// initial states.
#[derive(Debug, Clone)]
pub struct Propagator {
    dim: usize,
    sectors: Vec<Sector>,
    /// basis index → (sector, position inside the sector)
    locate: Vec<(usize, usize)>,
}

fn eigen(h: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let n = h.nrows();
    let is_real = (0..n).all(|j| (0..n).all(|i| h[(i, j)].im == 0.0));
    if is_real {
        let hr = Mat::<f64>::from_fn(n, n, |i, j| h[(i, j)].re);
        let evd = hr
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numeric(format!("eigensolver failed: {e:?}")))?;
        let values = evd.S().column_vector().iter().copied().collect();
        let u = evd.U();
        Ok((values, Mat::from_fn(n, n, |i, j| c64::new(u[(i, j)], 0.0))))
    } else {
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numeric(format!("eigensolver failed: {e:?}")))?;
        let values = evd.S().column_vector().iter().map(|z| z.re).collect();
        Ok((values, evd.U().to_owned()))
    }
}

fn check_hermitian(h: &Operator) -> Result<()> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::Validation(format!(
            "Hamiltonian is not Hermitian (defect {defect:e})"
        )));
    }
    if !linalg::all_finite(h.as_mat()) {
        return Err(Error::Validation("Hamiltonian has non-finite entries".into()));
    }
    Ok(())
}

/// Full diagonalization. Eigenvalues come out in ascending order.
pub fn diagonalize(h: &Operator) -> Result<Propagator> {
    check_hermitian(h)?;
    let dim = h.dim();
    Propagator::from_partition(h, vec![(0..dim).collect()])
}

/// Diagonalizes the even- and odd-popcount sectors separately.
///
/// Valid for any Hamiltonian that changes m_z only by even amounts, such as
/// the double-quantum average Hamiltonian. Input that couples the two
/// sectors is rejected.
pub fn diagonalize_blocked(h: &Operator, basis: &BasisInfo) -> Result<Propagator> {
    check_hermitian(h)?;
    if h.dim() != basis.dim() {
        return Err(Error::Validation(format!(
            "operator dimension {} does not match basis dimension {}",
            h.dim(),
            basis.dim()
        )));
    }
    let parity = |p: usize| (p.count_ones() % 2) as usize;
    let dim = h.dim();
    for q in 0..dim {
        for p in 0..dim {
            if parity(p) != parity(q) && h.get(p, q).norm() != 0.0 {
                return Err(Error::Validation(format!(
                    "operator couples parity sectors at ({p}, {q})"
                )));
            }
        }
    }
    let parts = (0..2)
        .map(|s| (0..dim).filter(|&p| parity(p) == s).collect::<Vec<_>>())
        .filter(|part| !part.is_empty())
        .collect();
    Propagator::from_partition(h, parts)
}

impl Propagator {
    fn from_partition(h: &Operator, parts: Vec<Vec<usize>>) -> Result<Self> {
        let dim = h.dim();
        let mut locate = vec![(0, 0); dim];
        let mut sectors = Vec::with_capacity(parts.len());
        for (s, indices) in parts.into_iter().enumerate() {
            for (local, &p) in indices.iter().enumerate() {
                locate[p] = (s, local);
            }
            let sub = Mat::from_fn(indices.len(), indices.len(), |a, b| h.get(indices[a], indices[b]));
            let (eigenvalues, vectors) = eigen(&sub)?;
            if eigenvalues.iter().any(|l| !l.is_finite()) {
                return Err(Error::Numeric("eigensolver returned non-finite eigenvalues".into()));
            }
            sectors.push(Sector {
                indices,
                eigenvalues,
                vectors,
            });
        }
        Ok(Propagator {
            dim,
            sectors,
            locate,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len()
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.sectors.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// Full `dim × dim` eigenvector matrix, columns in the order of
    /// [`Propagator::eigenvalues`].
    pub fn eigenvectors(&self) -> Mat<c64> {
        let mut cols: Vec<(f64, usize, usize)> = Vec::with_capacity(self.dim);
        for (s, sector) in self.sectors.iter().enumerate() {
            for (c, &l) in sector.eigenvalues.iter().enumerate() {
                cols.push((l, s, c));
            }
        }
        cols.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut v = Mat::<c64>::zeros(self.dim, self.dim);
        for (col, &(_, s, c)) in cols.iter().enumerate() {
            let sector = &self.sectors[s];
            for (local, &p) in sector.indices.iter().enumerate() {
                v[(p, col)] = sector.vectors[(local, c)];
            }
        }
        v
    }

    /// V diag(λ) V†
    pub fn reconstruct(&self) -> Operator {
        let v = self.eigenvectors();
        let lam = self.eigenvalues();
        let scaled = Mat::from_fn(self.dim, self.dim, |i, j| v[(i, j)] * lam[j]);
        Operator::from_mat(linalg::mul(scaled.as_ref(), v.adjoint())).expect("square")
    }

    /// Caches V†ρ₀V for repeated evaluation at many times.
    pub fn prepare(&self, rho0: &DensityMatrix) -> Result<PreparedState<'_>> {
        if rho0.dim() != self.dim {
            return Err(Error::Validation(format!(
                "state dimension {} does not match propagator dimension {}",
                rho0.dim(),
                self.dim
            )));
        }
        let n = self.sectors.len();
        let mut blocks = Vec::with_capacity(n * n);
        for a in &self.sectors {
            for b in &self.sectors {
                let sub = Mat::from_fn(a.indices.len(), b.indices.len(), |i, j| {
                    rho0.get(a.indices[i], b.indices[j])
                });
                if linalg::max_abs(sub.as_ref()) == 0.0 {
                    blocks.push(None);
                } else {
                    blocks.push(Some(linalg::mul3(a.vectors.adjoint(), sub.as_ref(), b.vectors.as_ref())));
                }
            }
        }
        Ok(PreparedState { prop: self, blocks })
    }
}

/// An initial state expressed in the eigenbasis of a [`Propagator`].
#[derive(Debug)]
pub struct PreparedState<'a> {
    prop: &'a Propagator,
    /// Row-major over sector pairs; `None` where ρ₀ has no weight.
    blocks: Vec<Option<Mat<c64>>>,
}

impl PreparedState<'_> {
    fn block(&self, a: usize, b: usize) -> Option<&Mat<c64>> {
        self.blocks[a * self.prop.sectors.len() + b].as_ref()
    }

    fn phased(&self, a: usize, b: usize, t: f64) -> Option<Mat<c64>> {
        let block = self.block(a, b)?;
        let la = &self.prop.sectors[a].eigenvalues;
        let lb = &self.prop.sectors[b].eigenvalues;
        Some(Mat::from_fn(block.nrows(), block.ncols(), |i, j| {
            block[(i, j)] * c64::cis(-(la[i] - lb[j]) * t)
        }))
    }

    /// ρ(t) = e^{−iHt} ρ₀ e^{iHt}; negative `t` runs backwards.
    pub fn at(&self, t: f64) -> DensityMatrix {
        let prop = self.prop;
        let mut out = Mat::<c64>::zeros(prop.dim, prop.dim);
        for (a, sa) in prop.sectors.iter().enumerate() {
            for (b, sb) in prop.sectors.iter().enumerate() {
                let Some(phased) = self.phased(a, b, t) else { continue };
                let rotated = linalg::mul3(sa.vectors.as_ref(), phased.as_ref(), sb.vectors.adjoint());
                for (j, &q) in sb.indices.iter().enumerate() {
                    for (i, &p) in sa.indices.iter().enumerate() {
                        out[(p, q)] = rotated[(i, j)];
                    }
                }
            }
        }
        DensityMatrix::from_mat_unchecked(out)
    }

    /// Single element ρ_pq(t) in O(d²), without forming the full matrix.
    pub fn element(&self, p: usize, q: usize, t: f64) -> c64 {
        let prop = self.prop;
        let (a, i0) = prop.locate[p];
        let (b, j0) = prop.locate[q];
        let Some(block) = self.block(a, b) else {
            return c64::new(0.0, 0.0);
        };
        let (sa, sb) = (&prop.sectors[a], &prop.sectors[b]);
        let left: Vec<c64> = (0..block.nrows())
            .map(|i| sa.vectors[(i0, i)] * c64::cis(-sa.eigenvalues[i] * t))
            .collect();
        let mut acc = c64::new(0.0, 0.0);
        for j in 0..block.ncols() {
            let right = sb.vectors[(j0, j)].conj() * c64::cis(sb.eigenvalues[j] * t);
            let col = block.col(j);
            let mut dot = c64::new(0.0, 0.0);
            for (i, l) in left.iter().enumerate() {
                dot += l * col[i];
            }
            acc += dot * right;
        }
        acc
    }
}

pub fn evolve(prop: &Propagator, rho0: &DensityMatrix, t: f64, direction: Direction) -> Result<DensityMatrix> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("evolution time must be finite, got {t}")));
    }
    Ok(prop.prepare(rho0)?.at(direction.signed(t)))
}

fn check_times(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::Domain(format!("evolution time must be finite, got {t}")));
    }
    Ok(())
}

/// Forward evolution at each of `times`, produced lazily in input order.
pub fn evolve_series<'a>(
    prop: &'a Propagator,
    rho0: &DensityMatrix,
    times: &'a [f64],
) -> Result<impl Iterator<Item = DensityMatrix> + 'a> {
    check_times(times)?;
    let prepared = prop.prepare(rho0)?;
    Ok(times.iter().map(move |&t| prepared.at(t)))
}

/// Like [`evolve_series`] but evaluates time points on the rayon pool.
/// Output order and values do not depend on the number of workers.
pub fn evolve_series_par(prop: &Propagator, rho0: &DensityMatrix, times: &[f64]) -> Result<Vec<DensityMatrix>> {
    check_times(times)?;
    let prepared = prop.prepare(rho0)?;
    Ok(times.par_iter().map(|&t| prepared.at(t)).collect())
}
