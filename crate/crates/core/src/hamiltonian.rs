//! Secular dipolar and double-quantum average Hamiltonians.
//!
//! Both are sums of two-spin products. Each product is applied directly on
//! the bit representation of the basis, which yields the same matrix as the
//! Kronecker-embedded operator products without any dense multiplication.

use faer::Mat;

use crate::basis::{BasisInfo, Operator};
use crate::error::{Error, Result};
use crate::geometry::SpinSystem;
use crate::linalg::c64;

fn check_sizes(system: &SpinSystem, basis: &BasisInfo) -> Result<()> {
    if system.n_spins() != basis.n_spins() {
        return Err(Error::Validation(format!(
            "system has {} spins but basis was built for {}",
            system.n_spins(),
            basis.n_spins()
        )));
    }
    Ok(())
}

/// H_dd = Σ_{j<k} D_jk [I_j^z I_k^z − ¼(I_j^+ I_k^− + I_j^− I_k^+)]
pub fn dipolar_secular(system: &SpinSystem, basis: &BasisInfo) -> Result<Operator> {
    check_sizes(system, basis)?;
    let dim = basis.dim();
    let mut h = Mat::<c64>::zeros(dim, dim);
    for (j, k, d) in system.pairs() {
        let (mj, mk) = (basis.spin_mask(j), basis.spin_mask(k));
        for p in 0..dim {
            let aligned = (p & mj == 0) == (p & mk == 0);
            if aligned {
                h[(p, p)] += c64::new(0.25 * d, 0.0);
            } else {
                h[(p, p)] -= c64::new(0.25 * d, 0.0);
                // flip-flop
                h[(p ^ mj ^ mk, p)] -= c64::new(0.25 * d, 0.0);
            }
        }
    }
    Operator::from_mat(h)
}

/// H_av = −½ Σ_{j<k} D_jk (I_j^+ I_k^+ + I_j^− I_k^−)
pub fn dq_average(system: &SpinSystem, basis: &BasisInfo) -> Result<Operator> {
    check_sizes(system, basis)?;
    let dim = basis.dim();
    let mut h = Mat::<c64>::zeros(dim, dim);
    for (j, k, d) in system.pairs() {
        let (mj, mk) = (basis.spin_mask(j), basis.spin_mask(k));
        for p in 0..dim {
            // both up → both down, or both down → both up
            if (p & mj == 0) == (p & mk == 0) {
                h[(p ^ mj ^ mk, p)] -= c64::new(0.5 * d, 0.0);
            }
        }
    }
    Operator::from_mat(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, collective_iz};
    use crate::geometry::{chain_couplings, rectangle_couplings, ring_couplings, SpinSystem};

    fn re(x: f64) -> c64 {
        c64::new(x, 0.0)
    }

    /// Independent construction from explicit 2×2 matrices and Kronecker products.
    fn kron_embed(n: usize, j: usize, single: [[f64; 2]; 2]) -> Mat<c64> {
        let mut out = Mat::<c64>::from_fn(1, 1, |_, _| re(1.0));
        for site in 0..n {
            let f: [[f64; 2]; 2] = if site == j { single } else { [[1.0, 0.0], [0.0, 1.0]] };
            let d = out.nrows();
            out = Mat::from_fn(2 * d, 2 * d, |r, c| out[(r / 2, c / 2)] * re(f[r % 2][c % 2]));
        }
        out
    }

    fn oracle(system: &SpinSystem, dq: bool) -> Mat<c64> {
        let n = system.n_spins();
        let sz = [[0.5, 0.0], [0.0, -0.5]];
        let sp = [[0.0, 1.0], [0.0, 0.0]];
        let sm = [[0.0, 0.0], [1.0, 0.0]];
        let dim = 1 << n;
        let mut h = Mat::<c64>::zeros(dim, dim);
        for j in 0..n {
            for k in (j + 1)..n {
                let d = system.coupling(j, k);
                let (zj, zk) = (kron_embed(n, j, sz), kron_embed(n, k, sz));
                let (pj, pk) = (kron_embed(n, j, sp), kron_embed(n, k, sp));
                let (mj, mk) = (kron_embed(n, j, sm), kron_embed(n, k, sm));
                let term = if dq {
                    &(&pj * &pk + &mj * &mk) * &(-0.5 * d)
                } else {
                    &(&zj * &zk) * &d - &(&pj * &mk + &mj * &pk) * &(0.25 * d)
                };
                h += term;
            }
        }
        h
    }

    #[test]
    fn two_spin_matrices() {
        let sys = chain_couplings(2, 1.0).unwrap();
        let b = build_basis(2).unwrap();
        let hdd = dipolar_secular(&sys, &b).unwrap();
        let diag: Vec<f64> = (0..4).map(|p| hdd.get(p, p).re).collect();
        assert_eq!(diag, vec![0.25, -0.25, -0.25, 0.25]);
        assert_eq!(hdd.get(1, 2), re(-0.25));
        assert_eq!(hdd.get(2, 1), re(-0.25));
        assert_eq!(hdd.get(0, 3), re(0.0));

        let hav = dq_average(&sys, &b).unwrap();
        for p in 0..4 {
            for q in 0..4 {
                let expected = if (p, q) == (0, 3) || (p, q) == (3, 0) { -0.5 } else { 0.0 };
                assert_eq!(hav.get(p, q), re(expected), "({p},{q})");
            }
        }
    }

    #[test]
    fn matches_kronecker_oracle() {
        let systems = [
            chain_couplings(2, 1.0).unwrap(),
            ring_couplings(3, 0.7).unwrap(),
            rectangle_couplings(),
            ring_couplings(5, 1.0).unwrap(),
        ];
        for sys in &systems {
            let b = build_basis(sys.n_spins()).unwrap();
            let hav = dq_average(sys, &b).unwrap();
            let hdd = dipolar_secular(sys, &b).unwrap();
            let o_av = Operator::from_mat(oracle(sys, true)).unwrap();
            let o_dd = Operator::from_mat(oracle(sys, false)).unwrap();
            assert!(hav.max_abs_diff(&o_av) < 1e-14, "{}", sys.label());
            assert!(hdd.max_abs_diff(&o_dd) < 1e-14, "{}", sys.label());
        }
    }

    #[test]
    fn structure_and_symmetry() {
        for sys in [rectangle_couplings(), ring_couplings(6, 1.0).unwrap(), chain_couplings(5, 1.0).unwrap()] {
            let b = build_basis(sys.n_spins()).unwrap();
            let hav = dq_average(&sys, &b).unwrap();
            let hdd = dipolar_secular(&sys, &b).unwrap();
            assert!(hav.hermiticity_defect() < 1e-12);
            assert!(hdd.hermiticity_defect() < 1e-12);
            assert!(hav.trace().norm() < 1e-10);
            assert!(hdd.trace().norm() < 1e-10);
            let iz = collective_iz(&b);
            assert!(hdd.commutator(&iz).max_abs() < 1e-12);
            for p in 0..b.dim() {
                assert_eq!(hav.get(p, p), re(0.0));
                for q in 0..b.dim() {
                    let dm = b.twice_m_z(p) - b.twice_m_z(q);
                    if hav.get(p, q).norm() != 0.0 {
                        assert_eq!(dm.abs(), 4, "H_av links Δm_z = ±2 only");
                    }
                    if hdd.get(p, q).norm() != 0.0 {
                        assert_eq!(dm, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_couplings_give_zero_operator() {
        let sys = SpinSystem::new("zero", 3, vec![0.0; 9]).unwrap();
        let b = build_basis(3).unwrap();
        assert_eq!(dq_average(&sys, &b).unwrap().max_abs(), 0.0);
        assert_eq!(dipolar_secular(&sys, &b).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn size_mismatch_rejected() {
        let b = build_basis(3).unwrap();
        assert!(dq_average(&rectangle_couplings(), &b).is_err());
    }
}
