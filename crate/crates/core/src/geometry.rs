//! Dipolar coupling matrices for the built-in molecular clusters and for
//! user-supplied pair lists.
//!
//! All couplings are dimensionless, in units of the nearest-neighbour
//! constant D₁.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Spin count plus a symmetric, zero-diagonal coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    n_spins: usize,
    couplings: Vec<f64>,
    label: String,
}

impl SpinSystem {
    /// Builds a system from a full row-major `n × n` matrix.
    pub fn new(label: impl Into<String>, n_spins: usize, couplings: Vec<f64>) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::Domain("a spin system needs at least one spin".into()));
        }
        if couplings.len() != n_spins * n_spins {
            return Err(Error::Validation(format!(
                "coupling matrix has {} entries, expected {}",
                couplings.len(),
                n_spins * n_spins
            )));
        }
        for j in 0..n_spins {
            if couplings[j * n_spins + j] != 0.0 {
                return Err(Error::Validation(format!("nonzero self-coupling D[{j}][{j}]")));
            }
            for k in 0..n_spins {
                let v = couplings[j * n_spins + k];
                if !v.is_finite() {
                    return Err(Error::Validation(format!("non-finite coupling D[{j}][{k}]")));
                }
                if v != couplings[k * n_spins + j] {
                    return Err(Error::Validation(format!("coupling matrix asymmetric at ({j}, {k})")));
                }
            }
        }
        Ok(SpinSystem {
            n_spins,
            couplings,
            label: label.into(),
        })
    }

    fn from_fn(label: impl Into<String>, n_spins: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut couplings = vec![0.0; n_spins * n_spins];
        for j in 0..n_spins {
            for k in (j + 1)..n_spins {
                let v = f(j, k);
                couplings[j * n_spins + k] = v;
                couplings[k * n_spins + j] = v;
            }
        }
        SpinSystem {
            n_spins,
            couplings,
            label: label.into(),
        }
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// D_jk for 0-based spin indices.
    pub fn coupling(&self, j: usize, k: usize) -> f64 {
        self.couplings[j * self.n_spins + k]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.couplings
    }

    /// Nonzero pairs `(j, k, D_jk)` with `j < k`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_spins;
        (0..n)
            .flat_map(move |j| ((j + 1)..n).map(move |k| (j, k, self.coupling(j, k))))
            .filter(|&(_, _, d)| d != 0.0)
    }

    /// Serializes the pair list in the coupling-file format.
    pub fn to_pair_list(&self) -> String {
        let mut out = format!("# {} ({} spins)\n", self.label, self.n_spins);
        for (j, k, d) in self.pairs() {
            out.push_str(&format!("{},{},{:?}\n", j + 1, k + 1, d));
        }
        out
    }
}

impl fmt::Display for SpinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} spins)", self.label, self.n_spins)?;
        for j in 0..self.n_spins {
            let row: Vec<String> = (0..self.n_spins)
                .map(|k| format!("{:>9.5}", self.coupling(j, k)))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// D = γ²ħ / (2 r³) · (1 − 3 cos²θ)
pub fn coupling_from_geometry(r: f64, theta: f64, gamma: f64, hbar: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("internuclear distance must be positive, got {r}")));
    }
    let c = theta.cos();
    Ok(gamma * gamma * hbar / (2.0 * r.powi(3)) * (1.0 - 3.0 * c * c))
}

fn check_pairable(n_spins: usize) -> Result<()> {
    if n_spins < 2 {
        return Err(Error::Domain(format!("cluster needs at least 2 spins, got {n_spins}")));
    }
    Ok(())
}

/// Regular ring with the field normal to its plane:
/// D_jk = d1 · [sin(π/N) / sin(π|k−j|/N)]³.
pub fn ring_couplings(n_spins: usize, d1: f64) -> Result<SpinSystem> {
    check_pairable(n_spins)?;
    let n = n_spins as f64;
    let s1 = (PI / n).sin();
    Ok(SpinSystem::from_fn(format!("ring-{n_spins}"), n_spins, |j, k| {
        let sep = (k - j) as f64;
        d1 * (s1 / (PI * sep / n).sin()).powi(3)
    }))
}

/// Uniformly spaced linear chain, D_jk = d1 / |j − k|³.
pub fn chain_couplings(n_spins: usize, d1: f64) -> Result<SpinSystem> {
    check_pairable(n_spins)?;
    Ok(SpinSystem::from_fn(format!("chain-{n_spins}"), n_spins, |j, k| {
        d1 / ((k - j) as f64).powi(3)
    }))
}

/// Four ring protons of 1-chloro-4-nitrobenzene.
///
/// Ortho pairs (1,2) and (3,4) carry D₁ = 1, pairs (1,3) and (2,4) carry 1/8,
/// pairs (1,4) and (2,3) carry 1/(3√3).
pub fn rectangle_couplings() -> SpinSystem {
    let far = 1.0 / (3.0 * 3f64.sqrt());
    SpinSystem::from_fn("rectangle", 4, |j, k| match (j, k) {
        (0, 1) | (2, 3) => 1.0,
        (0, 2) | (1, 3) => 0.125,
        _ => far,
    })
}

/// Constants of the ten-proton cyclopentane cluster.
pub mod cyclopentane {
    /// Geminal pair on one carbon, D_11'.
    pub const GEMINAL: f64 = 1.0;
    /// Same-side pair on neighbouring carbons, D_12.
    pub const NEIGHBOR_SAME: f64 = -0.178;
    /// Opposite-side pair on neighbouring carbons, D_12'.
    pub const NEIGHBOR_CROSS: f64 = -0.002;
    /// Same-side pair two carbons apart, D_13.
    pub const NEXT_SAME: f64 = -0.093;
    /// Opposite-side pair two carbons apart, D_13'.
    pub const NEXT_CROSS: f64 = 0.026;
}

/// Ten-proton cyclopentane cluster.
///
/// Proton `2c` sits above carbon `c` and `2c + 1` below it (0-based). The
/// pair class depends on the ring distance between the carbons and on whether
/// both protons are on the same side of the ring plane.
pub fn cyclopentane_couplings() -> SpinSystem {
    use cyclopentane::*;
    SpinSystem::from_fn("cyclopentane", 10, |a, b| {
        let (ca, cb) = (a / 2, b / 2);
        let same_side = a % 2 == b % 2;
        let gap = ca.abs_diff(cb);
        match (gap.min(5 - gap), same_side) {
            (0, _) => GEMINAL,
            (1, true) => NEIGHBOR_SAME,
            (1, false) => NEIGHBOR_CROSS,
            (_, true) => NEXT_SAME,
            (_, false) => NEXT_CROSS,
        }
    })
}

/// Reads a coupling file: one `j,k,value` triple per line with 1-based
/// indices, `#` comment lines, unspecified pairs zero.
pub fn load_couplings(path: impl AsRef<Path>, n_spins: usize) -> Result<SpinSystem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut system = parse_couplings(&text, n_spins, path)?;
    system.label = path.display().to_string();
    Ok(system)
}

pub fn parse_couplings(text: &str, n_spins: usize, origin: &Path) -> Result<SpinSystem> {
    if n_spins == 0 {
        return Err(Error::Domain("coupling file needs n_spins ≥ 1".into()));
    }
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut given: Vec<Option<f64>> = vec![None; n_spins * n_spins];
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(parse_err(lineno, format!("expected `j,k,value`, got {line:?}")));
        }
        let index = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(lineno, format!("bad spin index {s:?}: {e}")))
        };
        let j = index(fields[0])?;
        let k = index(fields[1])?;
        let value: f64 = fields[2]
            .parse()
            .map_err(|e| parse_err(lineno, format!("bad coupling value {:?}: {e}", fields[2])))?;
        if !value.is_finite() {
            return Err(parse_err(lineno, "coupling value must be finite".into()));
        }
        for idx in [j, k] {
            if idx == 0 || idx > n_spins {
                return Err(Error::Index {
                    what: "spin",
                    index: idx,
                    valid: format!("1..={n_spins} (line {lineno})"),
                });
            }
        }
        if j == k {
            return Err(parse_err(lineno, format!("self-coupling ({j}, {k}) is not allowed")));
        }
        let (a, b) = (j.min(k) - 1, j.max(k) - 1);
        match given[a * n_spins + b] {
            Some(prev) if prev != value => {
                return Err(Error::Conflict {
                    j: a + 1,
                    k: b + 1,
                    first: prev,
                    second: value,
                })
            }
            _ => given[a * n_spins + b] = Some(value),
        }
    }
    Ok(SpinSystem::from_fn("custom", n_spins, |j, k| {
        given[j * n_spins + k].unwrap_or(0.0)
    }))
}
