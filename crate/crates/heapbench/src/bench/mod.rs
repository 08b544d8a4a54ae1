//! The experiment harness: run size × ordering × arity sweeps that measure
//! the software sort, simulate the accelerator, attach energy estimates and
//! produce comparison rows.

pub mod config;
pub mod measure;
pub mod report;

use std::error::Error;
use std::fmt;
use std::path::PathBuf;

use crate::energy::{
    estimate_energy, improvement_ratios, EnergyContext, EnergyError, PowerModel,
};
use crate::fit::fit_through_origin;
use crate::hwsim::{simulate, CycleCostModel, HwConfig, SimError, DEFAULT_CLOCK_HZ};
use crate::workload::{generate, OrderingKind, Workload, WorkloadError};

#[derive(Debug)]
pub enum BenchError {
    Sim(SimError),
    Energy(EnergyError),
    Workload(WorkloadError),
    Io(std::io::Error),
    Report(report::ReportError),
    Config(config::ConfigError),
    /// A malformed experiment spec (empty axes, zero repetitions, ...).
    InvalidSpec(String),
    /// A sort under measurement produced output that does not match the
    /// reference sort — measurements of wrong code are worthless.
    SortMismatch { size: usize, arity: usize },
    /// An analysis needs more rows than it was given.
    NotEnoughData { needed: usize, got: usize },
    /// An analysis got rows that must agree on some axis but do not.
    MixedRows(String),
    NoRows,
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Sim(e) => write!(f, "simulation failed: {e}"),
            BenchError::Energy(e) => write!(f, "energy model failed: {e}"),
            BenchError::Workload(e) => write!(f, "workload generation failed: {e}"),
            BenchError::Io(e) => write!(f, "io error: {e}"),
            BenchError::Report(e) => write!(f, "report error: {e}"),
            BenchError::Config(e) => write!(f, "config error: {e}"),
            BenchError::InvalidSpec(msg) => write!(f, "invalid experiment spec: {msg}"),
            BenchError::SortMismatch { size, arity } => write!(
                f,
                "sort under measurement disagrees with reference sort (size {size}, arity {arity})"
            ),
            BenchError::NotEnoughData { needed, got } => {
                write!(f, "analysis needs at least {needed} rows, got {got}")
            }
            BenchError::MixedRows(msg) => write!(f, "rows are not comparable: {msg}"),
            BenchError::NoRows => write!(f, "no result rows to analyze"),
        }
    }
}

impl Error for BenchError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            BenchError::Sim(e) => Some(e),
            BenchError::Energy(e) => Some(e),
            BenchError::Workload(e) => Some(e),
            BenchError::Io(e) => Some(e),
            BenchError::Report(e) => Some(e),
            BenchError::Config(e) => Some(e),
            _ => None,
        }
    }
}

impl From<SimError> for BenchError {
    fn from(e: SimError) -> Self {
        BenchError::Sim(e)
    }
}

impl From<EnergyError> for BenchError {
    fn from(e: EnergyError) -> Self {
        BenchError::Energy(e)
    }
}

impl From<WorkloadError> for BenchError {
    fn from(e: WorkloadError) -> Self {
        BenchError::Workload(e)
    }
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        BenchError::Io(e)
    }
}

impl From<report::ReportError> for BenchError {
    fn from(e: report::ReportError) -> Self {
        BenchError::Report(e)
    }
}

impl From<config::ConfigError> for BenchError {
    fn from(e: config::ConfigError) -> Self {
        BenchError::Config(e)
    }
}

/// Everything one sweep needs. `Default` gives the desk-scale setup:
/// the seven reference sizes, random inputs, binary heap, 100 reps with
/// 100 ms cooldown, 100 MHz clock, and the bundled power models (3.4 W
/// constant for the CPU, 1 W + 10 mW/k for the accelerator).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub sizes: Vec<usize>,
    pub orderings: Vec<OrderingKind>,
    pub arities: Vec<usize>,
    pub repetitions: u32,
    pub cooldown_ms: u64,
    pub seed: u64,
    pub clock_hz: f64,
    pub cost_model: CycleCostModel,
    pub sw_power: PowerModel,
    pub hw_power: PowerModel,
    pub output_dir: PathBuf,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            sizes: crate::workload::reference_size_sweep(),
            orderings: vec![OrderingKind::Random],
            arities: vec![2],
            repetitions: 100,
            cooldown_ms: 100,
            seed: 42,
            clock_hz: DEFAULT_CLOCK_HZ,
            cost_model: CycleCostModel::default(),
            sw_power: PowerModel::Constant { watts: 3.4 },
            hw_power: PowerModel::AffineInArity {
                base_watts: 1.0,
                watts_per_k: 0.01,
            },
            output_dir: PathBuf::from("results"),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() {
            return Err(BenchError::InvalidSpec("no input sizes".into()));
        }
        if self.orderings.is_empty() {
            return Err(BenchError::InvalidSpec("no orderings".into()));
        }
        if self.arities.is_empty() {
            return Err(BenchError::InvalidSpec("no arities".into()));
        }
        if self.repetitions == 0 {
            return Err(BenchError::InvalidSpec("repetitions must be at least 1".into()));
        }
        for &arity in &self.arities {
            // reuse the simulator's arity rules
            HwConfig::new(arity, 0)?;
        }
        if !(self.clock_hz.is_finite() && self.clock_hz > 0.0) {
            return Err(BenchError::Sim(SimError::InvalidClock {
                clock_hz: self.clock_hz,
            }));
        }
        self.cost_model.validate()?;
        Ok(())
    }

    /// The sweep points in canonical (size, ordering, arity) order,
    /// deduplicated — the order rows appear in reports.
    fn points(&self) -> Vec<(usize, OrderingKind, usize)> {
        let mut sizes = self.sizes.clone();
        sizes.sort_unstable();
        sizes.dedup();
        let mut orderings = self.orderings.clone();
        orderings.sort_unstable();
        orderings.dedup();
        let mut arities = self.arities.clone();
        arities.sort_unstable();
        arities.dedup();

        let mut points = Vec::with_capacity(sizes.len() * orderings.len() * arities.len());
        for &size in &sizes {
            for &ordering in &orderings {
                for &arity in &arities {
                    points.push((size, ordering, arity));
                }
            }
        }
        points
    }
}

/// One sweep point: measured software side, simulated hardware side, and
/// the derived comparisons. Field order matches the CSV column order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub size: usize,
    pub ordering: OrderingKind,
    pub arity: usize,
    pub sw_time_s: f64,
    pub sw_time_stddev: f64,
    pub hw_cycles: u64,
    pub hw_time_s: f64,
    pub sw_energy_j: f64,
    pub hw_energy_j: f64,
    pub time_ratio: f64,
    pub energy_ratio: f64,
}

/// Execute the full sweep. Points run serially (concurrent software
/// timing would contend for cores and corrupt the measurement); rows come
/// back in canonical order.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, BenchError> {
    spec.validate()?;
    let mut rows = Vec::new();
    for (size, ordering, arity) in spec.points() {
        let input = generate(&Workload::new(size, ordering.with_seed(spec.seed)));
        let mut expected = input.clone();
        expected.sort_unstable();

        let (sw_time_s, sw_time_stddev) =
            measure::measure_software(&input, arity, spec.repetitions, spec.cooldown_ms)?;

        let hw_config = HwConfig::new(arity, size)?
            .with_clock_hz(spec.clock_hz)?
            .with_cost_model(spec.cost_model)?;
        let sim = simulate(&input, &hw_config)?;
        if sim.output != expected {
            return Err(BenchError::SortMismatch { size, arity });
        }

        let context = EnergyContext::new(size, arity);
        let sw_energy = estimate_energy(&spec.sw_power, sw_time_s, &context)?;
        let hw_energy = estimate_energy(&spec.hw_power, sim.wall_time_s, &context)?;
        let (time_ratio, energy_ratio) = improvement_ratios(
            (sw_time_s, sw_energy.energy_j),
            (sim.wall_time_s, hw_energy.energy_j),
        )?;

        rows.push(ResultRow {
            size,
            ordering,
            arity,
            sw_time_s,
            sw_time_stddev,
            hw_cycles: sim.total_cycles,
            hw_time_s: sim.wall_time_s,
            sw_energy_j: sw_energy.energy_j,
            hw_energy_j: hw_energy.energy_j,
            time_ratio,
            energy_ratio,
        });
    }
    Ok(rows)
}

/// Fit hardware cycles to `n * log_k(n)` across rows that share one arity
/// and ordering. Returns `(cycles_per_unit, r_squared)`.
pub fn fit_complexity(rows: &[ResultRow]) -> Result<(f64, f64), BenchError> {
    if rows.len() < 3 {
        return Err(BenchError::NotEnoughData {
            needed: 3,
            got: rows.len(),
        });
    }
    let arity = rows[0].arity;
    let ordering = rows[0].ordering;
    for row in rows {
        if row.arity != arity || row.ordering != ordering {
            return Err(BenchError::MixedRows(format!(
                "complexity fit needs one arity and ordering, saw k={arity}/{ordering} and k={}/{}",
                row.arity, row.ordering
            )));
        }
    }
    let log_k = (arity as f64).ln();
    let xs: Vec<f64> = rows
        .iter()
        .map(|r| {
            let n = r.size as f64;
            if r.size < 2 {
                0.0
            } else {
                n * n.ln() / log_k
            }
        })
        .collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.hw_cycles as f64).collect();
    Ok(fit_through_origin(&xs, &ys))
}

fn argmin_by<F: Fn(&ResultRow) -> f64>(rows: &[ResultRow], value: F) -> Result<usize, BenchError> {
    rows.iter()
        .min_by(|a, b| {
            value(a)
                .total_cmp(&value(b))
                .then(a.arity.cmp(&b.arity))
        })
        .map(|row| row.arity)
        .ok_or(BenchError::NoRows)
}

/// Arity of the row with the lowest simulated energy (ties go to the
/// smaller arity). Meaningful on rows sharing a size and ordering.
pub fn argmin_energy_arity(rows: &[ResultRow]) -> Result<usize, BenchError> {
    argmin_by(rows, |r| r.hw_energy_j)
}

/// Arity of the row with the lowest simulated time (ties go to the
/// smaller arity).
pub fn argmin_time_arity(rows: &[ResultRow]) -> Result<usize, BenchError> {
    argmin_by(rows, |r| r.hw_time_s)
}
