//! Pseudopure-state preparation: excitation, coherence filtering, time
//! reversal and partial saturation, plus the searches that locate the
//! characteristic times at which the protocol works.

use std::fmt;

use rayon::prelude::*;

use crate::basis::{equilibrium_state, trace_iz_squared, DensityMatrix, Sign};
use crate::coherence::{self, mq_filter};
use crate::dynamics::Direction;
use crate::error::{Error, Result};
use crate::geometry::SpinSystem;
use crate::linalg::c64;
use crate::model::Model;

/// Default grid step for characteristic-time searches, in units of 1/D₁.
pub const DEFAULT_DT: f64 = 0.01;
/// Width of the bracket at which golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-4;
/// Default relative threshold for non-diagonal zero-quantum "zeros".
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-3;
/// Below this everywhere, the non-diagonal zero-quantum intensity counts as
/// identically zero.
pub const IDENTICALLY_ZERO: f64 = 1e-12;
/// Maxima of the highest-order intensity below this are ignored.
pub const HOMQC_FLOOR: f64 = 1e-12;
/// Corner populations below this make sign classification meaningless.
pub const DEGENERATE_CORNER: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProtocolSchedule {
    /// Preparatory (excitation) period.
    pub tau1: f64,
    /// Coherence order kept by the filter (both ±k blocks).
    pub filter_order: usize,
    /// Time-reversal period.
    pub tau2: f64,
    /// Apply partial saturation after the time-reversal period.
    pub saturate: bool,
}

impl ProtocolSchedule {
    pub fn new(tau1: f64, filter_order: usize, tau2: f64) -> Self {
        ProtocolSchedule {
            tau1,
            filter_order,
            tau2,
            saturate: false,
        }
    }

    pub fn with_saturation(mut self, saturate: bool) -> Self {
        self.saturate = saturate;
        self
    }

    pub fn validate(&self, n_spins: usize) -> Result<()> {
        for (name, t) in [("tau1", self.tau1), ("tau2", self.tau2)] {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite and ≥ 0, got {t}")));
            }
        }
        if self.filter_order > n_spins {
            return Err(Error::Domain(format!(
                "filter order {} exceeds spin count {n_spins}",
                self.filter_order
            )));
        }
        Ok(())
    }
}

/// Signs of (ρ₁₁, ρ_dd): the all-up and all-down populations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignPattern {
    pub all_up: Sign,
    pub all_down: Sign,
}

impl SignPattern {
    pub const PLUS_MINUS: SignPattern = SignPattern::new(Sign::Plus, Sign::Minus);
    pub const PLUS_PLUS: SignPattern = SignPattern::new(Sign::Plus, Sign::Plus);
    pub const MINUS_MINUS: SignPattern = SignPattern::new(Sign::Minus, Sign::Minus);
    pub const MINUS_PLUS: SignPattern = SignPattern::new(Sign::Minus, Sign::Plus);

    pub const fn new(all_up: Sign, all_down: Sign) -> Self {
        SignPattern { all_up, all_down }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: Sign| if x == Sign::Plus { '+' } else { '-' };
        write!(f, "({},{})", s(self.all_up), s(self.all_down))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudopureMetrics {
    /// Largest interior population relative to the larger corner population.
    pub diag_deviation: f64,
    /// ‖off-diagonal part‖_F / ‖diagonal part‖_F
    pub offdiag_norm: f64,
    pub sign_pattern: SignPattern,
}

pub fn pseudopure_metrics(rho: &DensityMatrix) -> Result<PseudopureMetrics> {
    let d = rho.dim();
    let first = rho.get(0, 0).re;
    let last = rho.get(d - 1, d - 1).re;
    let corner = first.abs().max(last.abs());
    if corner < DEGENERATE_CORNER {
        return Err(Error::DegenerateState(DEGENERATE_CORNER));
    }
    let interior = (1..d.saturating_sub(1)).map(|p| rho.get(p, p).norm()).fold(0.0, f64::max);
    let mut diag_sq = 0.0;
    let mut off_sq = 0.0;
    for q in 0..d {
        for p in 0..d {
            let w = rho.get(p, q).norm_sqr();
            if p == q {
                diag_sq += w;
            } else {
                off_sq += w;
            }
        }
    }
    Ok(PseudopureMetrics {
        diag_deviation: interior / corner,
        offdiag_norm: (off_sq / diag_sq).sqrt(),
        sign_pattern: SignPattern::new(Sign::of(first), Sign::of(last)),
    })
}

fn is_pseudopure_form(rho: &DensityMatrix) -> bool {
    let d = rho.dim();
    let background = rho.get(0, 0);
    (0..d).all(|q| {
        (0..d).all(|p| {
            let v = rho.get(p, q);
            if p != q {
                v == c64::new(0.0, 0.0)
            } else {
                p == d - 1 || v == background
            }
        })
    })
}

/// Idealized partial saturation.
///
/// Coherences are destroyed, the all-down population is kept, and every
/// other population is replaced by their common mean, (Tr ρ − ρ_dd)/(d − 1).
pub fn partial_saturate(rho: &DensityMatrix) -> DensityMatrix {
    if is_pseudopure_form(rho) {
        return rho.clone();
    }
    let d = rho.dim();
    let kept = rho.get(d - 1, d - 1).re;
    let background = if d > 1 {
        (0..d - 1).map(|p| rho.get(p, p).re).sum::<f64>() / (d - 1) as f64
    } else {
        0.0
    };
    let mut diag = vec![background; d];
    diag[d - 1] = kept;
    DensityMatrix::from_diagonal(&diag)
}

#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub schedule: ProtocolSchedule,
    /// State after excitation, filtering and time reversal.
    pub intermediate: DensityMatrix,
    /// `intermediate`, partially saturated when the schedule asks for it.
    pub final_state: DensityMatrix,
    /// Real parts of the intermediate populations, index 0 = all up.
    pub diagonal: Vec<f64>,
    pub metrics: PseudopureMetrics,
}

impl ProtocolResult {
    pub fn diag_deviation(&self) -> f64 {
        self.metrics.diag_deviation
    }

    pub fn offdiag_norm(&self) -> f64 {
        self.metrics.offdiag_norm
    }

    pub fn sign_pattern(&self) -> SignPattern {
        self.metrics.sign_pattern
    }
}

/// Outcome of a search for zeros of the non-diagonal 0Q intensity.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroSearch {
    /// Refined times of sub-threshold local minima, ascending.
    Zeros(Vec<f64>),
    /// The intensity never rises above [`IDENTICALLY_ZERO`] on the grid.
    IdenticallyZero,
}

impl ZeroSearch {
    pub fn times(&self) -> &[f64] {
        match self {
            ZeroSearch::Zeros(t) => t,
            ZeroSearch::IdenticallyZero => &[],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    /// Fraction of the running maximum of the intensity up to the minimum.
    Relative(f64),
    /// Absolute normalized intensity.
    Absolute(f64),
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::Relative(DEFAULT_ZERO_THRESHOLD)
    }
}

impl Threshold {
    fn value(self) -> f64 {
        match self {
            Threshold::Relative(v) | Threshold::Absolute(v) => v,
        }
    }
}

fn grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::Domain(format!("t_max must be positive and finite, got {t_max}")));
    }
    if !(dt > 0.0) || !dt.is_finite() || dt > t_max {
        return Err(Error::Domain(format!("dt must lie in (0, t_max], got {dt}")));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|i| i as f64 * dt).collect())
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|l, r| l.1.total_cmp(&r.1))
        .expect("non-empty")
}

impl Model {
    /// Stages i–iii (and optionally iv) starting from ρ_eq = I_z.
    pub fn run_protocol(&self, schedule: &ProtocolSchedule) -> Result<ProtocolResult> {
        schedule.validate(self.basis().n_spins())?;
        let excited = self.evolve(&equilibrium_state(self.basis()), schedule.tau1, Direction::Forward)?;
        let filtered = mq_filter(&excited, self.basis(), schedule.filter_order)?;
        let intermediate = self.evolve(&filtered, schedule.tau2, Direction::Reversed)?;
        let raw_diag = intermediate.diagonal();
        if let Some(z) = raw_diag.iter().find(|z| z.im.abs() >= 1e-9) {
            return Err(Error::Numeric(format!("population with imaginary part {:e}", z.im)));
        }
        let diagonal = raw_diag.iter().map(|z| z.re).collect();
        let metrics = pseudopure_metrics(&intermediate)?;
        let final_state = if schedule.saturate {
            partial_saturate(&intermediate)
        } else {
            intermediate.clone()
        };
        Ok(ProtocolResult {
            schedule: *schedule,
            intermediate,
            final_state,
            diagonal,
            metrics,
        })
    }

    /// Non-diagonal zero-quantum intensity as a function of time, normalized
    /// by Tr I_z².
    pub fn nd0q_curve(&self, initial: &DensityMatrix, times: &[f64]) -> Result<Vec<f64>> {
        let prepared = self.prepare(initial)?;
        let norm = trace_iz_squared(self.basis());
        Ok(times
            .par_iter()
            .map(|&t| coherence::j0_nondiag(&prepared.at(t), self.basis(), norm))
            .collect())
    }

    /// Highest-order intensity J_NQ(t), normalized by Tr I_z². Only the
    /// single corner element of ρ(t) is evaluated.
    pub fn homqc_curve(&self, initial: &DensityMatrix, times: &[f64]) -> Result<Vec<f64>> {
        let prepared = self.prepare(initial)?;
        let norm = trace_iz_squared(self.basis());
        let last = self.basis().dim() - 1;
        Ok(times
            .par_iter()
            .map(|&t| prepared.element(0, last, t).norm_sqr() / norm)
            .collect())
    }

    pub fn find_nd0q_zeros(
        &self,
        initial: &DensityMatrix,
        t_max: f64,
        dt: f64,
        threshold: Threshold,
    ) -> Result<ZeroSearch> {
        let times = grid(t_max, dt)?;
        if !(threshold.value() > 0.0) || !threshold.value().is_finite() {
            return Err(Error::Domain(format!(
                "threshold must be positive, got {}",
                threshold.value()
            )));
        }
        let prepared = self.prepare(initial)?;
        let norm = trace_iz_squared(self.basis());
        let f = |t: f64| coherence::j0_nondiag(&prepared.at(t), self.basis(), norm);
        let y: Vec<f64> = times.par_iter().map(|&t| f(t)).collect();
        if y.iter().all(|&v| v < IDENTICALLY_ZERO) {
            return Ok(ZeroSearch::IdenticallyZero);
        }
        let mut running_max = Vec::with_capacity(y.len());
        let mut m = 0.0f64;
        for &v in &y {
            m = m.max(v);
            running_max.push(m);
        }
        let mut candidates = Vec::new();
        if !initial.is_diagonal() && y.len() > 1 && y[0] < y[1] {
            candidates.push((0usize, times[0], times[1]));
        }
        for i in 1..y.len().saturating_sub(1) {
            if y[i] <= y[i - 1] && y[i] < y[i + 1] {
                candidates.push((i, times[i - 1], times[i + 1]));
            }
        }
        let mut zeros = Vec::new();
        for (i, lo, hi) in candidates {
            let (t, v) = golden_min(f, lo, hi, REFINE_TOL);
            let level = match threshold {
                Threshold::Relative(r) => r * running_max[(i + 1).min(y.len() - 1)],
                Threshold::Absolute(a) => a,
            };
            if v < level {
                zeros.push(t);
            }
        }
        Ok(ZeroSearch::Zeros(zeros))
    }

    /// Local maxima `(t, J_NQ)` of the highest-order intensity, strongest first.
    pub fn find_homqc_maxima(&self, initial: &DensityMatrix, t_max: f64, dt: f64) -> Result<Vec<(f64, f64)>> {
        let times = grid(t_max, dt)?;
        let prepared = self.prepare(initial)?;
        let norm = trace_iz_squared(self.basis());
        let last = self.basis().dim() - 1;
        let f = |t: f64| prepared.element(0, last, t).norm_sqr() / norm;
        let y: Vec<f64> = times.par_iter().map(|&t| f(t)).collect();
        let mut maxima: Vec<(f64, f64)> = (1..y.len().saturating_sub(1))
            .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > HOMQC_FLOOR)
            .map(|i| {
                let (t, neg) = golden_min(|t| -f(t), times[i - 1], times[i + 1], REFINE_TOL);
                (t, -neg)
            })
            .collect();
        maxima.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
        Ok(maxima)
    }
}

pub fn run_protocol(system: &SpinSystem, schedule: &ProtocolSchedule) -> Result<ProtocolResult> {
    Model::new(system.clone())?.run_protocol(schedule)
}

/// Sub-threshold local minima of the non-diagonal 0Q intensity on
/// `[0, t_max]`, refined to [`REFINE_TOL`].
pub fn find_nd0q_zeros(
    system: &SpinSystem,
    initial: &DensityMatrix,
    t_max: f64,
    dt: f64,
    threshold: Threshold,
) -> Result<ZeroSearch> {
    Model::new(system.clone())?.find_nd0q_zeros(initial, t_max, dt, threshold)
}

pub fn find_homqc_maxima(system: &SpinSystem, initial: &DensityMatrix, t_max: f64, dt: f64) -> Result<Vec<(f64, f64)>> {
    Model::new(system.clone())?.find_homqc_maxima(initial, t_max, dt)
}

/// Builds a density matrix from real populations and zero coherences.
pub fn diagonal_state(populations: &[f64]) -> DensityMatrix {
    DensityMatrix::from_diagonal(populations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, intermediate_state};
    use crate::geometry::{rectangle_couplings, ring_couplings};

    #[test]
    fn saturation_examples() {
        let b2 = build_basis(2).unwrap();
        let sat = partial_saturate(&intermediate_state(&b2, Sign::Plus));
        let d: Vec<f64> = sat.diagonal().iter().map(|z| z.re).collect();
        for v in &d[..3] {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(d[3], -1.0);
        assert!(sat.trace().norm() < 1e-15);

        let fixed = diagonal_state(&[0.3, 0.3, 0.3, -0.7]);
        assert_eq!(partial_saturate(&fixed), fixed);
        assert_eq!(partial_saturate(&sat), sat);
    }

    #[test]
    fn metric_examples() {
        let b4 = build_basis(4).unwrap();
        for s in [Sign::Plus, Sign::Minus] {
            let m = pseudopure_metrics(&intermediate_state(&b4, s)).unwrap();
            assert_eq!(m.diag_deviation, 0.0);
            assert_eq!(m.offdiag_norm, 0.0);
        }
        let m = pseudopure_metrics(&equilibrium_state(&b4)).unwrap();
        assert_eq!(m.diag_deviation, 0.5);
        assert_eq!(m.sign_pattern, SignPattern::PLUS_MINUS);
        let id = diagonal_state(&[1.0; 8]);
        let m = pseudopure_metrics(&id).unwrap();
        assert_eq!(m.diag_deviation, 1.0);
        assert_eq!(m.sign_pattern, SignPattern::PLUS_PLUS);
        assert!(matches!(
            pseudopure_metrics(&diagonal_state(&[0.0, 1.0, 1.0, 0.0])),
            Err(Error::DegenerateState(_))
        ));
        assert_eq!(SignPattern::MINUS_PLUS.to_string(), "(-,+)");
    }

    #[test]
    fn schedule_validation() {
        assert!(ProtocolSchedule::new(1.0, 5, 1.0).validate(4).is_err());
        assert!(ProtocolSchedule::new(-1.0, 2, 1.0).validate(4).is_err());
        assert!(ProtocolSchedule::new(1.0, 2, f64::NAN).validate(4).is_err());
        assert!(ProtocolSchedule::new(0.0, 4, 0.0).validate(4).is_ok());
    }

    #[test]
    fn zero_coupling_protocol_returns_equilibrium() {
        let sys = SpinSystem::new("zero", 3, vec![0.0; 9]).unwrap();
        let r = run_protocol(&sys, &ProtocolSchedule::new(2.0, 0, 2.0)).unwrap();
        let b = build_basis(3).unwrap();
        assert!(r.intermediate.max_abs_diff(&equilibrium_state(&b)) < 1e-15);
    }

    #[test]
    fn zero_quantum_filter_round_trip() {
        let sys = rectangle_couplings();
        let model = Model::new(sys).unwrap();
        let b = model.basis().clone();
        let tau = 2.5;
        let r = model.run_protocol(&ProtocolSchedule::new(tau, 0, tau)).unwrap();
        let excited = model.evolve(&equilibrium_state(&b), tau, Direction::Forward).unwrap();
        let block = mq_filter(&excited, &b, 0).unwrap();
        let back = model.evolve(&block, tau, Direction::Reversed).unwrap();
        assert!(r.intermediate.max_abs_diff(&back) < 1e-14);
    }

    #[test]
    fn grid_errors() {
        let sys = ring_couplings(4, 1.0).unwrap();
        let b = build_basis(4).unwrap();
        let eq = equilibrium_state(&b);
        assert!(find_nd0q_zeros(&sys, &eq, 0.0, 0.01, Threshold::default()).is_err());
        assert!(find_nd0q_zeros(&sys, &eq, 1.0, -0.01, Threshold::default()).is_err());
        assert!(find_nd0q_zeros(&sys, &eq, 1.0, 0.01, Threshold::Relative(0.0)).is_err());
        assert!(find_homqc_maxima(&sys, &eq, 1.0, 0.0).is_err());
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_min(|t| (t - 0.3).powi(2), 0.0, 1.0, 1e-6);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(fx < 1e-11);
    }
}
