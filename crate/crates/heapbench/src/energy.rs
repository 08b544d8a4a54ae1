//! Power models and energy accounting.
//!
//! Neither platform reports energy directly, so energy is always
//! `E = P * t`: a power model supplies the watts, the measurement or the
//! simulator supplies the seconds.

use std::error::Error;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum EnergyError {
    /// Power values must be positive watts.
    NonPositivePower(f64),
    /// A per-size table needs at least one entry.
    EmptyTable,
    /// Two table entries share a size.
    DuplicateSize(usize),
    /// Lookup outside the table's size span; extrapolation would be a
    /// silent guess, so it is an error instead.
    SizeOutOfRange { size: usize, min: usize, max: usize },
    /// The model needs a piece of context (size or arity) the caller
    /// did not provide.
    MissingContext(&'static str),
    NegativeTime(f64),
    /// Fitting needs at least one sample.
    EmptyFit,
    /// Fitting requires strictly positive durations.
    NonPositiveTime(f64),
    /// Improvement ratios divide by the hardware numbers.
    ZeroReference(&'static str),
}

impl fmt::Display for EnergyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyError::NonPositivePower(w) => write!(f, "power must be positive, got {w} W"),
            EnergyError::EmptyTable => write!(f, "per-size power table is empty"),
            EnergyError::DuplicateSize(n) => write!(f, "duplicate power table entry for size {n}"),
            EnergyError::SizeOutOfRange { size, min, max } => write!(
                f,
                "size {size} outside the power table span {min}..={max}; refusing to extrapolate"
            ),
            EnergyError::MissingContext(what) => {
                write!(f, "power model needs {what} but none was provided")
            }
            EnergyError::NegativeTime(t) => write!(f, "cannot estimate energy for negative duration {t} s"),
            EnergyError::EmptyFit => write!(f, "cannot fit power to zero samples"),
            EnergyError::NonPositiveTime(t) => {
                write!(f, "power fit requires positive durations, got {t} s")
            }
            EnergyError::ZeroReference(what) => {
                write!(f, "improvement ratio undefined: hardware {what} is zero")
            }
        }
    }
}

impl Error for EnergyError {}

/// How much power a platform draws while sorting.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerModel {
    /// One fixed draw, e.g. a CPU board whose load power barely moves.
    Constant { watts: f64 },
    /// Measured draw per input size, linearly interpolated between the
    /// measured sizes. Entries are kept sorted by size.
    PerSizeTable { entries: Vec<(usize, f64)> },
    /// Draw grows with heap arity: wider comparator trees and more banks
    /// switch more logic. `watts = base_watts + watts_per_k * k`.
    AffineInArity { base_watts: f64, watts_per_k: f64 },
}

impl PowerModel {
    pub fn constant(watts: f64) -> Result<Self, EnergyError> {
        if !(watts.is_finite() && watts > 0.0) {
            return Err(EnergyError::NonPositivePower(watts));
        }
        Ok(PowerModel::Constant { watts })
    }

    pub fn per_size_table(mut entries: Vec<(usize, f64)>) -> Result<Self, EnergyError> {
        if entries.is_empty() {
            return Err(EnergyError::EmptyTable);
        }
        for &(_, watts) in &entries {
            if !(watts.is_finite() && watts > 0.0) {
                return Err(EnergyError::NonPositivePower(watts));
            }
        }
        entries.sort_by_key(|&(size, _)| size);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(EnergyError::DuplicateSize(pair[0].0));
            }
        }
        Ok(PowerModel::PerSizeTable { entries })
    }

    pub fn affine_in_arity(base_watts: f64, watts_per_k: f64) -> Result<Self, EnergyError> {
        if !(base_watts.is_finite() && base_watts > 0.0) {
            return Err(EnergyError::NonPositivePower(base_watts));
        }
        if !(watts_per_k.is_finite() && watts_per_k > 0.0) {
            return Err(EnergyError::NonPositivePower(watts_per_k));
        }
        Ok(PowerModel::AffineInArity {
            base_watts,
            watts_per_k,
        })
    }

    /// Resolve the draw for a run, given whatever context the model needs.
    pub fn power_at(&self, context: &EnergyContext) -> Result<f64, EnergyError> {
        match self {
            PowerModel::Constant { watts } => Ok(*watts),
            PowerModel::PerSizeTable { entries } => {
                let size = context.size.ok_or(EnergyError::MissingContext("an input size"))?;
                let (min, _) = entries[0];
                let (max, _) = entries[entries.len() - 1];
                if size < min || size > max {
                    return Err(EnergyError::SizeOutOfRange { size, min, max });
                }
                match entries.binary_search_by_key(&size, |&(s, _)| s) {
                    Ok(hit) => Ok(entries[hit].1),
                    Err(above) => {
                        let (s0, w0) = entries[above - 1];
                        let (s1, w1) = entries[above];
                        let frac = (size - s0) as f64 / (s1 - s0) as f64;
                        Ok(w0 + frac * (w1 - w0))
                    }
                }
            }
            PowerModel::AffineInArity {
                base_watts,
                watts_per_k,
            } => {
                let arity = context.arity.ok_or(EnergyError::MissingContext("a heap arity"))?;
                Ok(base_watts + watts_per_k * arity as f64)
            }
        }
    }
}

/// Run parameters a power model may depend on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnergyContext {
    pub size: Option<usize>,
    pub arity: Option<usize>,
}

impl EnergyContext {
    pub fn for_size(size: usize) -> Self {
        EnergyContext {
            size: Some(size),
            arity: None,
        }
    }

    pub fn for_arity(arity: usize) -> Self {
        EnergyContext {
            size: None,
            arity: Some(arity),
        }
    }

    pub fn new(size: usize, arity: usize) -> Self {
        EnergyContext {
            size: Some(size),
            arity: Some(arity),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub time_s: f64,
    pub power_w: f64,
    pub energy_j: f64,
}

/// `E = P * t` for one run.
pub fn estimate_energy(
    model: &PowerModel,
    time_s: f64,
    context: &EnergyContext,
) -> Result<EnergyEstimate, EnergyError> {
    if !(time_s.is_finite() && time_s >= 0.0) {
        return Err(EnergyError::NegativeTime(time_s));
    }
    let power_w = model.power_at(context)?;
    Ok(EnergyEstimate {
        time_s,
        power_w,
        energy_j: power_w * time_s,
    })
}

/// Least-squares constant power through the origin: the `P` minimizing
/// `sum((P * t_i - E_i)^2)` over `(time_s, energy_j)` samples, i.e.
/// `sum(t * E) / sum(t^2)`.
pub fn fit_constant_power(samples: &[(f64, f64)]) -> Result<f64, EnergyError> {
    if samples.is_empty() {
        return Err(EnergyError::EmptyFit);
    }
    for &(t, _) in samples {
        if !(t.is_finite() && t > 0.0) {
            return Err(EnergyError::NonPositiveTime(t));
        }
    }
    let sum_te: f64 = samples.iter().map(|&(t, e)| t * e).sum();
    let sum_tt: f64 = samples.iter().map(|&(t, _)| t * t).sum();
    Ok(sum_te / sum_tt)
}

/// `(time_ratio, energy_ratio)` of software over hardware — how many times
/// faster and more frugal the accelerator is.
pub fn improvement_ratios(
    sw: (f64, f64),
    hw: (f64, f64),
) -> Result<(f64, f64), EnergyError> {
    let (sw_time_s, sw_energy_j) = sw;
    let (hw_time_s, hw_energy_j) = hw;
    if hw_time_s == 0.0 {
        return Err(EnergyError::ZeroReference("time"));
    }
    if hw_energy_j == 0.0 {
        return Err(EnergyError::ZeroReference("energy"));
    }
    Ok((sw_time_s / hw_time_s, sw_energy_j / hw_energy_j))
}
