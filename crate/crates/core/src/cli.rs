//! Command-line front end: JSON run configs, flag overrides and CSV output.
//!
//! A run is described by a [`RunConfig`]. It can be read from a JSON file
//! (`--config`), assembled from flags, or both; flags win over file values.
//! `config-dump` prints the resolved configuration so that a run can be
//! committed and replayed.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::basis::{equilibrium_state, intermediate_state, DensityMatrix, Sign, DEFAULT_SPIN_CAP};
use crate::coherence::{CoherenceSpectrum, Normalization};
use crate::error::{Error, Result};
use crate::geometry::{
    chain_couplings, cyclopentane_couplings, load_couplings, rectangle_couplings, ring_couplings, SpinSystem,
};
use crate::model::{Model, ModelOptions};
use crate::protocol::{ProtocolResult, ProtocolSchedule, Threshold, ZeroSearch, DEFAULT_DT, DEFAULT_ZERO_THRESHOLD};

pub const DEFAULT_T_MAX: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SystemSpec {
    Ring {
        n: usize,
        #[serde(default = "one")]
        d1: f64,
    },
    Chain {
        n: usize,
        #[serde(default = "one")]
        d1: f64,
    },
    Rectangle,
    Cyclopentane,
    Custom {
        n: usize,
        file: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

impl SystemSpec {
    pub fn n_spins(&self) -> usize {
        match self {
            SystemSpec::Ring { n, .. } | SystemSpec::Chain { n, .. } | SystemSpec::Custom { n, .. } => *n,
            SystemSpec::Rectangle => 4,
            SystemSpec::Cyclopentane => 10,
        }
    }

    pub fn build(&self) -> Result<SpinSystem> {
        match self {
            SystemSpec::Ring { n, d1 } => ring_couplings(*n, *d1),
            SystemSpec::Chain { n, d1 } => chain_couplings(*n, *d1),
            SystemSpec::Rectangle => Ok(rectangle_couplings()),
            SystemSpec::Cyclopentane => Ok(cyclopentane_couplings()),
            SystemSpec::Custom { n, file } => load_couplings(file, *n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialSpec {
    #[default]
    Equilibrium,
    /// `sign·(|↑…↑⟩⟨↑…↑| − |↓…↓⟩⟨↓…↓|)`
    TwoLevel { sign: Sign },
}

impl InitialSpec {
    pub fn state(&self, basis: &crate::BasisInfo) -> DensityMatrix {
        match self {
            InitialSpec::Equilibrium => equilibrium_state(basis),
            InitialSpec::TwoLevel { sign } => intermediate_state(basis, *sign),
        }
    }
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}

fn default_threshold() -> f64 {
    DEFAULT_ZERO_THRESHOLD
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TaskSpec {
    Scan {
        #[serde(default = "default_t_max")]
        t_max: f64,
        #[serde(default = "default_dt")]
        dt: f64,
    },
    Zeros {
        #[serde(default = "default_t_max")]
        t_max: f64,
        #[serde(default = "default_dt")]
        dt: f64,
        /// Relative to the running maximum of the intensity.
        #[serde(default = "default_threshold")]
        threshold: f64,
    },
    Maxima {
        #[serde(default = "default_t_max")]
        t_max: f64,
        #[serde(default = "default_dt")]
        dt: f64,
    },
    Protocol {
        tau1: f64,
        tau2: f64,
        filter: usize,
        #[serde(default)]
        saturate: bool,
    },
}

impl TaskSpec {
    pub fn kind(&self) -> TaskKind {
        match self {
            TaskSpec::Scan { .. } => TaskKind::Scan,
            TaskSpec::Zeros { .. } => TaskKind::Zeros,
            TaskSpec::Maxima { .. } => TaskKind::Maxima,
            TaskSpec::Protocol { .. } => TaskKind::Protocol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskKind {
    Scan,
    Zeros,
    Maxima,
    Protocol,
}

impl TaskKind {
    fn tag(self) -> &'static str {
        match self {
            TaskKind::Scan => "scan",
            TaskKind::Zeros => "zeros",
            TaskKind::Maxima => "maxima",
            TaskKind::Protocol => "protocol",
        }
    }
}

fn default_max_spins() -> usize {
    DEFAULT_SPIN_CAP
}

/// A fully validated description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub system: SystemSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    pub task: TaskSpec,
    /// CSV destination; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default = "default_max_spins")]
    pub max_spins: usize,
    #[serde(default)]
    pub parity_blocking: bool,
}

const TOP_KEYS: &[&str] = &[
    "system",
    "initial",
    "task",
    "output",
    "normalization",
    "max_spins",
    "parity_blocking",
];

fn allowed_keys(section: &str, tag: &str) -> Option<&'static [&'static str]> {
    Some(match (section, tag) {
        ("system", "ring") | ("system", "chain") => &["type", "n", "d1"],
        ("system", "rectangle") | ("system", "cyclopentane") => &["type"],
        ("system", "custom") => &["type", "n", "file"],
        ("initial", "equilibrium") => &["type"],
        ("initial", "two_level") => &["type", "sign"],
        ("task", "scan") | ("task", "maxima") => &["type", "t_max", "dt"],
        ("task", "zeros") => &["type", "t_max", "dt", "threshold"],
        ("task", "protocol") => &["type", "tau1", "tau2", "filter", "saturate"],
        _ => return None,
    })
}

/// Every key that is not part of the schema, as dotted paths.
fn unknown_keys(root: &Map<String, Value>) -> Vec<String> {
    let mut unknown = Vec::new();
    for (key, value) in root {
        if !TOP_KEYS.contains(&key.as_str()) {
            unknown.push(key.clone());
            continue;
        }
        if let (Some(obj), "system" | "initial" | "task") = (value.as_object(), key.as_str()) {
            let tag = obj.get("type").and_then(Value::as_str).unwrap_or("");
            if let Some(allowed) = allowed_keys(key, tag) {
                unknown.extend(
                    obj.keys()
                        .filter(|k| !allowed.contains(&k.as_str()))
                        .map(|k| format!("{key}.{k}")),
                );
            }
        }
    }
    unknown
}

impl RunConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        Self::from_value(value)
    }

    fn from_value(value: Value) -> Result<Self> {
        let Value::Object(root) = &value else {
            return Err(Error::Config("config must be a JSON object".into()));
        };
        let unknown = unknown_keys(root);
        if !unknown.is_empty() {
            return Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))));
        }
        let config: RunConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        if self.max_spins == 0 {
            return bad("max_spins", "must be ≥ 1".into());
        }
        let n = self.system.n_spins();
        if n > self.max_spins {
            return bad(
                "system.n",
                format!("{n} exceeds the spin cap max_spins = {}", self.max_spins),
            );
        }
        match &self.system {
            SystemSpec::Ring { n, d1 } | SystemSpec::Chain { n, d1 } => {
                if *n < 2 {
                    return bad("system.n", format!("{n} is below the minimum of 2"));
                }
                if !d1.is_finite() {
                    return bad("system.d1", format!("{d1} is not finite"));
                }
            }
            SystemSpec::Custom { n, file } => {
                if *n < 1 {
                    return bad("system.n", "must be ≥ 1".into());
                }
                if !file.is_file() {
                    return bad("system.file", format!("{} does not exist", file.display()));
                }
            }
            SystemSpec::Rectangle | SystemSpec::Cyclopentane => {}
        }
        let positive = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                bad(field, format!("{v} must be > 0"))
            }
        };
        match self.task {
            TaskSpec::Scan { t_max, dt } | TaskSpec::Maxima { t_max, dt } => {
                positive("task.t_max", t_max)?;
                positive("task.dt", dt)?;
                if dt > t_max {
                    return bad("task.dt", format!("{dt} exceeds t_max = {t_max}"));
                }
            }
            TaskSpec::Zeros { t_max, dt, threshold } => {
                positive("task.t_max", t_max)?;
                positive("task.dt", dt)?;
                positive("task.threshold", threshold)?;
                if dt > t_max {
                    return bad("task.dt", format!("{dt} exceeds t_max = {t_max}"));
                }
            }
            TaskSpec::Protocol { tau1, tau2, filter, .. } => {
                for (field, t) in [("task.tau1", tau1), ("task.tau2", tau2)] {
                    if !(t >= 0.0 && t.is_finite()) {
                        return bad(field, format!("{t} must be ≥ 0"));
                    }
                }
                if filter > n {
                    return bad("task.filter", format!("{filter} exceeds the spin count {n}"));
                }
                if self.initial != InitialSpec::Equilibrium {
                    return bad("initial", "the protocol always starts from equilibrium".into());
                }
            }
        }
        Ok(())
    }

    pub fn model_options(&self) -> ModelOptions {
        ModelOptions {
            max_spins: self.max_spins,
            parity_blocking: self.parity_blocking,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    Ring,
    Chain,
    Rectangle,
    Cyclopentane,
    Custom,
}

impl SystemKind {
    fn tag(self) -> &'static str {
        match self {
            SystemKind::Ring => "ring",
            SystemKind::Chain => "chain",
            SystemKind::Rectangle => "rectangle",
            SystemKind::Cyclopentane => "cyclopentane",
            SystemKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialKind {
    Equilibrium,
    /// |↑…↑⟩⟨↑…↑| − |↓…↓⟩⟨↓…↓|
    UpDown,
    /// −|↑…↑⟩⟨↑…↑| + |↓…↓⟩⟨↓…↓|
    DownUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizeKind {
    /// Divide by Tr I_z².
    Eq6,
    /// Divide by Tr ρ(0)².
    Initial,
}

/// Flags shared by every subcommand. Each one overrides the matching
/// config-file field.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub system: Option<SystemKind>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub d1: Option<f64>,
    /// Coupling file of `j,k,value` lines (implies --system custom)
    #[arg(long, global = true)]
    pub couplings: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub initial: Option<InitialKind>,
    #[arg(long, global = true)]
    pub tmax: Option<f64>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub tau1: Option<f64>,
    #[arg(long, global = true)]
    pub tau2: Option<f64>,
    #[arg(long, global = true)]
    pub filter: Option<usize>,
    #[arg(long, global = true)]
    pub saturate: bool,
    #[arg(long, global = true, value_enum)]
    pub normalize: Option<NormalizeKind>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Zero threshold relative to the running maximum
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    #[arg(long, global = true)]
    pub max_spins: Option<usize>,
    /// Diagonalize the two m_z-parity sectors separately
    #[arg(long, global = true)]
    pub parity_blocking: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Coherence intensities on a time grid
    Scan,
    /// Zeros of the non-diagonal zero-quantum intensity
    Zeros,
    /// Maxima of the highest-order coherence intensity
    Maxima,
    /// Excite, filter, time-reverse and optionally saturate
    Protocol,
    /// Print the resolved configuration as JSON
    ConfigDump {
        /// Task to resolve (defaults to the config file's task, else scan)
        #[arg(value_enum)]
        task: Option<TaskKind>,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(name = "mqnmr", version, about = "Multiple-quantum NMR dynamics of dipolar spin clusters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

fn section<'a>(root: &'a mut Map<String, Value>, key: &str, tag: &str) -> &'a mut Map<String, Value> {
    let same = root
        .get(key)
        .and_then(|v| v.get("type"))
        .and_then(Value::as_str)
        .is_some_and(|t| t == tag);
    if !same {
        root.insert(key.to_string(), json!({ "type": tag }));
    }
    root.get_mut(key).and_then(Value::as_object_mut).expect("section object")
}

fn existing_tag(root: &Map<String, Value>, key: &str) -> Option<String> {
    root.get(key)?.get("type")?.as_str().map(str::to_string)
}

/// Resolves a config from an optional file plus flag overrides.
///
/// `task` forces the task type; when `None` the file's task is used, falling
/// back to `scan`.
pub fn parse_config(task: Option<TaskKind>, overrides: &Overrides) -> Result<RunConfig> {
    let mut root = match &overrides.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(map)) => map,
                Ok(_) => return Err(Error::Config(format!("{}: config must be a JSON object", path.display()))),
                Err(e) => return Err(Error::Config(format!("{}: invalid JSON: {e}", path.display()))),
            }
        }
        None => Map::new(),
    };

    let system_tag = match (overrides.system, &overrides.couplings) {
        (Some(kind), _) => Some(kind.tag().to_string()),
        (None, Some(_)) => Some("custom".to_string()),
        (None, None) => existing_tag(&root, "system"),
    };
    let Some(system_tag) = system_tag else {
        return Err(Error::Config("system: no system given (use --system or a config file)".into()));
    };
    {
        let sys = section(&mut root, "system", &system_tag);
        if let Some(n) = overrides.n {
            sys.insert("n".into(), json!(n));
        }
        if let Some(d1) = overrides.d1 {
            sys.insert("d1".into(), json!(d1));
        }
        if let Some(file) = &overrides.couplings {
            sys.insert("file".into(), json!(file));
        }
    }

    if let Some(initial) = overrides.initial {
        let value = match initial {
            InitialKind::Equilibrium => json!({ "type": "equilibrium" }),
            InitialKind::UpDown => json!({ "type": "two_level", "sign": "plus" }),
            InitialKind::DownUp => json!({ "type": "two_level", "sign": "minus" }),
        };
        root.insert("initial".into(), value);
    }

    let task_tag = task
        .map(|k| k.tag().to_string())
        .or_else(|| existing_tag(&root, "task"))
        .unwrap_or_else(|| "scan".to_string());
    {
        let t = section(&mut root, "task", &task_tag);
        let mut set = |key: &str, v: Option<Value>| {
            if let Some(v) = v {
                t.insert(key.into(), v);
            }
        };
        set("t_max", overrides.tmax.map(|v| json!(v)));
        set("dt", overrides.dt.map(|v| json!(v)));
        set("tau1", overrides.tau1.map(|v| json!(v)));
        set("tau2", overrides.tau2.map(|v| json!(v)));
        set("filter", overrides.filter.map(|v| json!(v)));
        set("threshold", overrides.threshold.map(|v| json!(v)));
        set("saturate", overrides.saturate.then(|| json!(true)));
    }

    if let Some(out) = &overrides.out {
        root.insert("output".into(), json!(out));
    }
    if let Some(norm) = overrides.normalize {
        let tag = match norm {
            NormalizeKind::Eq6 => "eq6",
            NormalizeKind::Initial => "initial",
        };
        root.insert("normalization".into(), json!(tag));
    }
    if let Some(cap) = overrides.max_spins {
        root.insert("max_spins".into(), json!(cap));
    }
    if overrides.parity_blocking {
        root.insert("parity_blocking".into(), json!(true));
    }
    RunConfig::from_value(Value::Object(root))
}

fn fmt_num(v: f64) -> String {
    format!("{v:.15e}")
}

pub fn write_scan_csv<W: Write>(mut w: W, spectra: &[CoherenceSpectrum], times: &[f64]) -> io::Result<()> {
    if spectra.len() != times.len() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("{} spectra for {} times", spectra.len(), times.len()),
        ));
    }
    let n = spectra.first().map_or(0, |s| s.n_spins()) as i32;
    let mut header = vec!["t".to_string()];
    header.extend((-n..=n).map(|k| format!("J_{k:+}Q")));
    header.push("J_0Q_diag".into());
    header.push("J_0Q_nondiag".into());
    writeln!(w, "{}", header.join(","))?;
    for (s, &t) in spectra.iter().zip(times) {
        let mut row = vec![fmt_num(t)];
        row.extend(s.orders().map(|(_, v)| fmt_num(v)));
        row.push(fmt_num(s.j0_diag()));
        row.push(fmt_num(s.j0_nondiag()));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_protocol_report<W: Write>(mut w: W, result: &ProtocolResult) -> io::Result<()> {
    let saturated = result.schedule.saturate;
    if saturated {
        writeln!(w, "p,rho_pp,rho_pp_saturated")?;
    } else {
        writeln!(w, "p,rho_pp")?;
    }
    for (p, v) in result.diagonal.iter().enumerate() {
        if saturated {
            let s = result.final_state.get(p, p).re;
            writeln!(w, "{},{},{}", p + 1, fmt_num(*v), fmt_num(s))?;
        } else {
            writeln!(w, "{},{}", p + 1, fmt_num(*v))?;
        }
    }
    writeln!(w, "# summary")?;
    writeln!(w, "# diag_deviation,{}", fmt_num(result.diag_deviation()))?;
    writeln!(w, "# offdiag_norm,{}", fmt_num(result.offdiag_norm()))?;
    writeln!(w, "# sign_pattern,{}", result.sign_pattern())?;
    writeln!(w, "# tau1,{}", fmt_num(result.schedule.tau1))?;
    writeln!(w, "# tau2,{}", fmt_num(result.schedule.tau2))?;
    writeln!(w, "# filter_order,{}", result.schedule.filter_order)?;
    writeln!(w, "# saturate,{}", saturated)?;
    Ok(())
}

fn write_zeros<W: Write>(mut w: W, zeros: &ZeroSearch) -> io::Result<()> {
    writeln!(w, "t")?;
    match zeros {
        ZeroSearch::IdenticallyZero => writeln!(w, "# identically zero"),
        ZeroSearch::Zeros(times) => times.iter().try_for_each(|t| writeln!(w, "{}", fmt_num(*t))),
    }
}

fn write_maxima<W: Write>(mut w: W, maxima: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "t,intensity")?;
    maxima
        .iter()
        .try_for_each(|(t, v)| writeln!(w, "{},{}", fmt_num(*t), fmt_num(*v)))
}

fn write_to(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn emit_scan_csv(spectra: &[CoherenceSpectrum], times: &[f64], path: &Path) -> Result<()> {
    write_to(path, |w| write_scan_csv(w, spectra, times))
}

pub fn emit_protocol_report(result: &ProtocolResult, path: &Path) -> Result<()> {
    write_to(path, |w| write_protocol_report(w, result))
}

fn emit(output: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match output {
        Some(path) => write_to(path, |w| f(w)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn time_grid(t_max: f64, dt: f64) -> Vec<f64> {
    let steps = (t_max / dt + 1e-9).floor() as usize;
    (0..=steps).map(|i| i as f64 * dt).collect()
}

/// Executes a validated configuration and writes its CSV output.
pub fn execute(config: &RunConfig) -> Result<()> {
    let system = config.system.build()?;
    let model = Model::with_options(system, config.model_options())?;
    let initial = config.initial.state(model.basis());
    let out = config.output.as_deref();
    match config.task {
        TaskSpec::Scan { t_max, dt } => {
            let times = time_grid(t_max, dt);
            let norm = config.normalization.value(model.basis(), &initial)?;
            let spectra = model.scan(&initial, &times, norm)?;
            emit(out, |w| write_scan_csv(w, &spectra, &times))
        }
        TaskSpec::Zeros { t_max, dt, threshold } => {
            let zeros = model.find_nd0q_zeros(&initial, t_max, dt, Threshold::Relative(threshold))?;
            emit(out, |w| write_zeros(w, &zeros))
        }
        TaskSpec::Maxima { t_max, dt } => {
            let maxima = model.find_homqc_maxima(&initial, t_max, dt)?;
            emit(out, |w| write_maxima(w, &maxima))
        }
        TaskSpec::Protocol {
            tau1,
            tau2,
            filter,
            saturate,
        } => {
            let schedule = ProtocolSchedule::new(tau1, filter, tau2).with_saturation(saturate);
            let result = model.run_protocol(&schedule)?;
            emit(out, |w| write_protocol_report(w, &result))
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let task = match &cli.command {
        Command::Scan => Some(TaskKind::Scan),
        Command::Zeros => Some(TaskKind::Zeros),
        Command::Maxima => Some(TaskKind::Maxima),
        Command::Protocol => Some(TaskKind::Protocol),
        Command::ConfigDump { task } => *task,
    };
    let config = parse_config(task, &cli.overrides)?;
    if let Command::ConfigDump { .. } = cli.command {
        let text = config.to_json();
        return emit(config.output.as_deref(), |w| writeln!(w, "{text}"));
    }
    execute(&config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Overrides {
        Overrides::default()
    }

    #[test]
    fn minimal_scan_defaults() {
        let cfg = RunConfig::from_json(r#"{"system":{"type":"ring","n":6},"task":{"type":"scan"}}"#).unwrap();
        assert_eq!(cfg.task, TaskSpec::Scan { t_max: DEFAULT_T_MAX, dt: 0.01 });
        assert_eq!(cfg.normalization, Normalization::TraceIzSquared);
        assert_eq!(cfg.initial, InitialSpec::Equilibrium);
        assert_eq!(cfg.system, SystemSpec::Ring { n: 6, d1: 1.0 });
    }

    #[test]
    fn zeros_threshold_default() {
        let cfg = RunConfig::from_json(r#"{"system":{"type":"rectangle"},"task":{"type":"zeros","t_max":14}}"#).unwrap();
        assert_eq!(cfg.task, TaskSpec::Zeros { t_max: 14.0, dt: 0.01, threshold: 1e-3 });
    }

    #[test]
    fn spin_cap_rejects_twenty() {
        let err = RunConfig::from_json(r#"{"system":{"type":"ring","n":20},"task":{"type":"scan"}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("system.n") && msg.contains("12"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_listed() {
        let err = RunConfig::from_json(
            r#"{"system":{"type":"ring","n":4,"radius":2},"task":{"type":"scan","tau1":1},"colour":"red"}"#,
        )
        .unwrap_err()
        .to_string();
        for key in ["system.radius", "task.tau1", "colour"] {
            assert!(err.contains(key), "{err}");
        }
    }

    #[test]
    fn rectangle_protocol_config() {
        let cfg = RunConfig::from_json(
            r#"{"system":{"type":"rectangle"},"task":{"type":"protocol","tau1":7.86,"tau2":7.86,"filter":2}}"#,
        )
        .unwrap();
        assert_eq!(
            cfg.task,
            TaskSpec::Protocol { tau1: 7.86, tau2: 7.86, filter: 2, saturate: false }
        );
    }

    #[test]
    fn constraint_messages_name_fields() {
        let cases = [
            (r#"{"system":{"type":"ring","n":4},"task":{"type":"scan","dt":-1}}"#, "task.dt"),
            (r#"{"system":{"type":"ring","n":1},"task":{"type":"scan"}}"#, "system.n"),
            (r#"{"system":{"type":"rectangle"},"task":{"type":"protocol","tau1":1,"tau2":1,"filter":5}}"#, "task.filter"),
            (r#"{"system":{"type":"custom","n":3,"file":"/nonexistent/x.csv"},"task":{"type":"scan"}}"#, "system.file"),
        ];
        for (json, field) in cases {
            let msg = RunConfig::from_json(json).unwrap_err().to_string();
            assert!(msg.contains(field), "{json} → {msg}");
        }
    }

    #[test]
    fn flags_build_config_and_dump_round_trips() {
        let mut o = flags();
        o.system = Some(SystemKind::Rectangle);
        o.tau1 = Some(12.61);
        o.tau2 = Some(7.86);
        o.filter = Some(2);
        o.saturate = true;
        let cfg = parse_config(Some(TaskKind::Protocol), &o).unwrap();
        let again = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn flags_override_file_and_switch_task() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            r#"{"system":{"type":"ring","n":4},"task":{"type":"scan","t_max":3,"dt":0.5}}"#,
        )
        .unwrap();
        let mut o = flags();
        o.config = Some(path);
        o.dt = Some(0.25);
        let cfg = parse_config(None, &o).unwrap();
        assert_eq!(cfg.task, TaskSpec::Scan { t_max: 3.0, dt: 0.25 });

        o.n = Some(6);
        let cfg = parse_config(Some(TaskKind::Maxima), &o).unwrap();
        assert_eq!(cfg.system, SystemSpec::Ring { n: 6, d1: 1.0 });
        assert_eq!(cfg.task, TaskSpec::Maxima { t_max: DEFAULT_T_MAX, dt: 0.25 });
    }

    #[test]
    fn missing_system_is_config_error() {
        assert!(matches!(parse_config(Some(TaskKind::Scan), &flags()), Err(Error::Config(_))));
    }
}
