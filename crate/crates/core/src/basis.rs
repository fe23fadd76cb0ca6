//! Zeeman product basis, spin-1/2 operators and the standard initial states.
//!
//! Basis index `p` (0-based) encodes one bit per spin, spin 0 in the most
//! significant position. A zero bit means spin up, so index 0 is
//! |↑…↑⟩ and index `dim − 1` is |↓…↓⟩.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::{self, c64};

pub const DEFAULT_SPIN_CAP: usize = 12;

/// Tolerance on `max |ρ_pq − conj(ρ_qp)|` accepted by [`DensityMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisInfo {
    n_spins: usize,
    dim: usize,
    /// 2·m_z for every basis index, so half-integers stay exact.
    twice_mz: Vec<i32>,
}

impl BasisInfo {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Magnetization quantum number of basis state `p`.
    pub fn m_z(&self, p: usize) -> f64 {
        f64::from(self.twice_mz[p]) / 2.0
    }

    pub fn twice_m_z(&self, p: usize) -> i32 {
        self.twice_mz[p]
    }

    pub fn m_z_values(&self) -> Vec<f64> {
        (0..self.dim).map(|p| self.m_z(p)).collect()
    }

    /// Bit mask selecting spin `j` inside a basis index.
    pub(crate) fn spin_mask(&self, j: usize) -> usize {
        1 << (self.n_spins - 1 - j)
    }

    pub(crate) fn check_spin(&self, j: usize) -> Result<()> {
        if j < self.n_spins {
            Ok(())
        } else {
            Err(Error::Index {
                what: "spin",
                index: j,
                valid: format!("0..{}", self.n_spins),
            })
        }
    }

    pub(crate) fn check_index(&self, p: usize) -> Result<()> {
        if p < self.dim {
            Ok(())
        } else {
            Err(Error::Index {
                what: "basis",
                index: p,
                valid: format!("0..{}", self.dim),
            })
        }
    }
}

/// Builds the basis with the default spin cap.
pub fn build_basis(n_spins: usize) -> Result<BasisInfo> {
    build_basis_with_cap(n_spins, DEFAULT_SPIN_CAP)
}

pub fn build_basis_with_cap(n_spins: usize, cap: usize) -> Result<BasisInfo> {
    if n_spins == 0 || n_spins > cap {
        return Err(Error::Size {
            requested: n_spins,
            cap,
        });
    }
    let dim = 1usize << n_spins;
    let n = n_spins as i32;
    let twice_mz = (0..dim).map(|p| n - 2 * p.count_ones() as i32).collect();
    Ok(BasisInfo {
        n_spins,
        dim,
        twice_mz,
    })
}

/// Dense complex square matrix acting on a spin basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(Mat<c64>);

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator(Mat::zeros(dim, dim))
    }

    pub fn from_mat(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Validation(format!(
                "operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Operator(mat))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.0.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.0
    }

    pub fn get(&self, p: usize, q: usize) -> c64 {
        self.0[(p, q)]
    }

    pub fn adjoint(&self) -> Operator {
        Operator(self.0.adjoint().to_owned())
    }

    pub fn mul(&self, rhs: &Operator) -> Operator {
        Operator(linalg::mul(self.as_mat(), rhs.as_mat()))
    }

    pub fn commutator(&self, rhs: &Operator) -> Operator {
        Operator(linalg::commutator(self.as_mat(), rhs.as_mat()))
    }

    pub fn trace(&self) -> c64 {
        linalg::trace(self.as_mat())
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(self.as_mat())
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        linalg::max_abs_diff(self.as_mat(), other.as_mat())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(self.as_mat())
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

/// Hermitian deviation density matrix. The trace is not constrained.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Mat<c64>);

impl DensityMatrix {
    /// Validates squareness, finiteness and Hermiticity (to [`HERMITIAN_TOL`]).
    pub fn new(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Validation(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !linalg::all_finite(mat.as_ref()) {
            return Err(Error::Validation("density matrix has non-finite entries".into()));
        }
        let defect = linalg::hermiticity_defect(mat.as_ref());
        if defect > HERMITIAN_TOL {
            return Err(Error::Validation(format!(
                "density matrix is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(DensityMatrix(mat))
    }

    /// Real diagonal state.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        DensityMatrix(Mat::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(diag[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        }))
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<c64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        DensityMatrix(mat)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.0.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.0
    }

    pub fn get(&self, p: usize, q: usize) -> c64 {
        self.0[(p, q)]
    }

    pub fn diagonal(&self) -> Vec<c64> {
        (0..self.dim()).map(|p| self.0[(p, p)]).collect()
    }

    pub fn trace(&self) -> c64 {
        linalg::trace(self.as_mat())
    }

    /// Tr ρ² (real for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for q in 0..self.dim() {
            for p in 0..self.dim() {
                acc += self.0[(p, q)].norm_sqr();
            }
        }
        acc
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|q| (0..n).all(|p| p == q || self.0[(p, q)] == c64::new(0.0, 0.0)))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(self.as_mat())
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        linalg::max_abs_diff(self.as_mat(), other.as_mat())
    }

    /// Tr(ρ · op)
    pub fn expectation(&self, op: &Operator) -> c64 {
        linalg::trace_of_product(self.as_mat(), op.as_mat())
    }
}

impl From<DensityMatrix> for Operator {
    fn from(rho: DensityMatrix) -> Self {
        Operator(rho.0)
    }
}

/// z, raising and lowering operators of a single spin embedded in the full space.
#[derive(Debug, Clone)]
pub struct SpinOps {
    pub iz: Operator,
    pub iplus: Operator,
    pub iminus: Operator,
}

pub fn single_spin_ops(j: usize, basis: &BasisInfo) -> Result<SpinOps> {
    basis.check_spin(j)?;
    let dim = basis.dim();
    let mask = basis.spin_mask(j);
    let mut iz = Mat::<c64>::zeros(dim, dim);
    let mut iplus = Mat::<c64>::zeros(dim, dim);
    let mut iminus = Mat::<c64>::zeros(dim, dim);
    for p in 0..dim {
        if p & mask == 0 {
            iz[(p, p)] = c64::new(0.5, 0.0);
            // lowering: |↑⟩ → |↓⟩
            iminus[(p | mask, p)] = c64::new(1.0, 0.0);
        } else {
            iz[(p, p)] = c64::new(-0.5, 0.0);
            iplus[(p & !mask, p)] = c64::new(1.0, 0.0);
        }
    }
    Ok(SpinOps {
        iz: Operator(iz),
        iplus: Operator(iplus),
        iminus: Operator(iminus),
    })
}

/// Total I_z = Σ_j I_j^z, diagonal with entries m_z.
pub fn collective_iz(basis: &BasisInfo) -> Operator {
    let dim = basis.dim();
    Operator(Mat::from_fn(dim, dim, |p, q| {
        if p == q {
            c64::new(basis.m_z(p), 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    }))
}

/// Tr I_z² = N · 2^(N−2).
pub fn trace_iz_squared(basis: &BasisInfo) -> f64 {
    (0..basis.dim()).map(|p| basis.m_z(p).powi(2)).sum()
}

/// High-temperature equilibrium deviation state, ρ_eq = I_z.
pub fn equilibrium_state(basis: &BasisInfo) -> DensityMatrix {
    DensityMatrix::from_diagonal(&basis.m_z_values())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x.is_sign_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Two-level mixture `s·|↑…↑⟩⟨↑…↑| − s·|↓…↓⟩⟨↓…↓|`.
///
/// `Sign::Plus` gives |↑⟩⟨↑| − |↓⟩⟨↓|; `Sign::Minus` gives −e₁₁ + e_dd, the
/// form used as the initial state of the two-level zero-quantum scans.
pub fn intermediate_state(basis: &BasisInfo, sign: Sign) -> DensityMatrix {
    let dim = basis.dim();
    let mut diag = vec![0.0; dim];
    diag[0] = sign.value();
    diag[dim - 1] = -sign.value();
    DensityMatrix::from_diagonal(&diag)
}
