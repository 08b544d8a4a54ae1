//! Transaction-level simulator of a hardware heap accelerator.
//!
//! The model follows a simple datapath: heap nodes live in `k` memory banks
//! so that all `k` children of a node can be fetched in one transaction, a
//! comparator tree reduces those children to a maximum in `log2(k)` rounds,
//! and a small FSM sequences load → insert* → (extract, sift-down,
//! write-back)* → done. The simulator executes real inputs at transaction
//! granularity and charges every step from a [`CycleCostModel`], yielding
//! exact cycle counts rather than wall-clock estimates.

mod calibrate;
mod memory;
mod simulator;

pub use calibrate::{calibrate, Calibration};
pub use memory::BankedHeapMemory;
pub use simulator::{
    simulate, validate_trace, EventCounts, FsmPhase, SimResult, TraceError,
};

use std::error::Error;
use std::fmt;

pub const MIN_ARITY: usize = 2;
pub const MAX_ARITY: usize = 256;

/// 100 MHz, the clock the bundled reference cycle costs were fitted at.
pub const DEFAULT_CLOCK_HZ: f64 = 100_000_000.0;

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    /// Arity must be a power of two in `MIN_ARITY..=MAX_ARITY` — the
    /// comparator tree and bank addressing are built around that.
    InvalidArity { arity: usize },
    InvalidClock { clock_hz: f64 },
    InvalidCostModel(String),
    CapacityExceeded { len: usize, capacity: usize },
    /// Calibration needs at least one reference point.
    EmptyReference,
    /// Reference times must be positive for relative error to make sense.
    InvalidReferenceTime { size: usize, time_s: f64 },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::InvalidArity { arity } => write!(
                f,
                "arity {arity} unsupported: must be a power of two in {MIN_ARITY}..={MAX_ARITY}"
            ),
            SimError::InvalidClock { clock_hz } => {
                write!(f, "clock must be a positive, finite frequency, got {clock_hz} Hz")
            }
            SimError::InvalidCostModel(msg) => write!(f, "invalid cost model: {msg}"),
            SimError::CapacityExceeded { len, capacity } => {
                write!(f, "input of {len} elements exceeds heap capacity {capacity}")
            }
            SimError::EmptyReference => {
                write!(f, "calibration requires at least one reference measurement")
            }
            SimError::InvalidReferenceTime { size, time_s } => {
                write!(f, "reference time for size {size} must be positive, got {time_s}")
            }
        }
    }
}

impl Error for SimError {}

fn validate_arity(arity: usize) -> Result<(), SimError> {
    if (MIN_ARITY..=MAX_ARITY).contains(&arity) && arity.is_power_of_two() {
        Ok(())
    } else {
        Err(SimError::InvalidArity { arity })
    }
}

/// Memory bank holding heap node `i`: the root gets bank 0, every other
/// node `(i - 1) % k`. Children of any node are `k*i + 1 ..= k*i + k`,
/// whose indices are consecutive, so they always land in `k` distinct
/// banks and can be read in a single transaction.
pub fn bank_of(i: usize, k: usize) -> usize {
    debug_assert!(k >= 2);
    if i == 0 {
        0
    } else {
        (i - 1) % k
    }
}

/// Rounds a `k`-leaf comparator tree needs to reduce the children of one
/// node to a single maximum: `log2(k)`.
pub fn reduction_rounds(arity: usize) -> Result<u32, SimError> {
    validate_arity(arity)?;
    Ok(arity.trailing_zeros())
}

pub fn cycles_to_seconds(cycles: u64, clock_hz: f64) -> f64 {
    cycles as f64 / clock_hz
}

/// Per-transaction cycle costs of the datapath. All values are full cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleCostModel {
    /// One banked read of all k children of a node.
    pub child_read_cycles: u64,
    /// Comparing the reduced child maximum against its parent.
    pub parent_compare_cycles: u64,
    /// Exchanging two nodes (read both, write both).
    pub swap_cycles: u64,
    /// One parent comparison + conditional move while sifting up.
    pub sift_up_level_cycles: u64,
    /// FSM dispatch overhead charged once per insert and once per extract.
    pub fsm_overhead_cycles_per_op: u64,
    /// Streaming one element in (load) or out (write-back).
    pub io_cycles_per_element: u64,
}

impl Default for CycleCostModel {
    fn default() -> Self {
        CycleCostModel {
            child_read_cycles: 1,
            parent_compare_cycles: 1,
            swap_cycles: 1,
            sift_up_level_cycles: 1,
            fsm_overhead_cycles_per_op: 1,
            io_cycles_per_element: 1,
        }
    }
}

impl CycleCostModel {
    /// Memory transactions (reads, swaps, sift-up steps) take at least one
    /// cycle; pure control costs may be zero.
    pub fn validate(&self) -> Result<(), SimError> {
        if self.child_read_cycles == 0 {
            return Err(SimError::InvalidCostModel(
                "child_read_cycles must be at least 1".into(),
            ));
        }
        if self.swap_cycles == 0 {
            return Err(SimError::InvalidCostModel(
                "swap_cycles must be at least 1".into(),
            ));
        }
        if self.sift_up_level_cycles == 0 {
            return Err(SimError::InvalidCostModel(
                "sift_up_level_cycles must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Static configuration of one simulated accelerator instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HwConfig {
    arity: usize,
    capacity: usize,
    clock_hz: f64,
    cost_model: CycleCostModel,
}

impl HwConfig {
    /// Defaults to the 100 MHz clock and the all-ones cost model.
    pub fn new(arity: usize, capacity: usize) -> Result<Self, SimError> {
        validate_arity(arity)?;
        Ok(HwConfig {
            arity,
            capacity,
            clock_hz: DEFAULT_CLOCK_HZ,
            cost_model: CycleCostModel::default(),
        })
    }

    pub fn with_clock_hz(mut self, clock_hz: f64) -> Result<Self, SimError> {
        if !(clock_hz.is_finite() && clock_hz > 0.0) {
            return Err(SimError::InvalidClock { clock_hz });
        }
        self.clock_hz = clock_hz;
        Ok(self)
    }

    pub fn with_cost_model(mut self, cost_model: CycleCostModel) -> Result<Self, SimError> {
        cost_model.validate()?;
        self.cost_model = cost_model;
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn clock_hz(&self) -> f64 {
        self.clock_hz
    }

    pub fn cost_model(&self) -> &CycleCostModel {
        &self.cost_model
    }

    /// Cycles one sift-down level costs when it ends in a swap: fetch the
    /// children, reduce them through the comparator tree, compare against
    /// the parent, exchange.
    pub fn sift_down_level_cycles(&self) -> u64 {
        let rounds = reduction_rounds(self.arity).expect("arity validated on construction");
        self.cost_model.child_read_cycles
            + u64::from(rounds)
            + self.cost_model.parent_compare_cycles
            + self.cost_model.swap_cycles
    }

    pub fn cycles_to_seconds(&self, cycles: u64) -> f64 {
        cycles_to_seconds(cycles, self.clock_hz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_must_be_power_of_two_in_range() {
        for good in [2usize, 4, 8, 16, 32, 64, 128, 256] {
            assert!(HwConfig::new(good, 16).is_ok(), "arity {good}");
        }
        for bad in [0usize, 1, 3, 6, 12, 100, 512, 1024] {
            assert_eq!(
                HwConfig::new(bad, 16).unwrap_err(),
                SimError::InvalidArity { arity: bad },
                "arity {bad}"
            );
        }
    }

    #[test]
    fn default_clock_is_100_mhz() {
        let cfg = HwConfig::new(2, 8).unwrap();
        assert_eq!(cfg.clock_hz(), 100_000_000.0);
        assert_eq!(cfg.cycles_to_seconds(100_000_000), 1.0);
    }

    #[test]
    fn clock_must_be_positive_and_finite() {
        let cfg = HwConfig::new(2, 8).unwrap();
        assert!(cfg.with_clock_hz(50e6).is_ok());
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(cfg.with_clock_hz(bad).is_err(), "clock {bad}");
        }
    }

    #[test]
    fn reduction_rounds_is_log2() {
        assert_eq!(reduction_rounds(2), Ok(1));
        assert_eq!(reduction_rounds(4), Ok(2));
        assert_eq!(reduction_rounds(16), Ok(4));
        assert_eq!(reduction_rounds(256), Ok(8));
        assert!(reduction_rounds(3).is_err());
        assert!(reduction_rounds(512).is_err());
    }

    #[test]
    fn root_is_bank_zero_and_siblings_spread() {
        assert_eq!(bank_of(0, 4), 0);
        // children of node 0 with k = 4 are 1..=4 -> banks 0..=3
        assert_eq!(
            (1..=4).map(|i| bank_of(i, 4)).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn children_of_any_node_hit_distinct_banks() {
        use crate::heap::child_indices;
        use std::collections::HashSet;
        for k in [2usize, 4, 16, 64] {
            for node in 0..100 {
                let banks: HashSet<usize> =
                    child_indices(node, k).map(|c| bank_of(c, k)).collect();
                assert_eq!(banks.len(), k, "k={k} node={node}");
            }
        }
    }

    #[test]
    fn zero_transaction_costs_are_rejected() {
        let zeroed = |field: fn(&mut CycleCostModel)| {
            let mut m = CycleCostModel::default();
            field(&mut m);
            m
        };
        assert!(zeroed(|m| m.child_read_cycles = 0).validate().is_err());
        assert!(zeroed(|m| m.swap_cycles = 0).validate().is_err());
        assert!(zeroed(|m| m.sift_up_level_cycles = 0).validate().is_err());
        // Control costs may legitimately be free.
        let free_control = CycleCostModel {
            parent_compare_cycles: 0,
            fsm_overhead_cycles_per_op: 0,
            io_cycles_per_element: 0,
            ..CycleCostModel::default()
        };
        assert!(free_control.validate().is_ok());
    }

    #[test]
    fn sift_down_level_cost_includes_tree_depth() {
        // defaults: child read 1 + log2(16)=4 rounds + compare 1 + swap 1
        let cfg = HwConfig::new(16, 8).unwrap();
        assert_eq!(cfg.sift_down_level_cycles(), 7);
        let cfg = HwConfig::new(2, 8).unwrap();
        assert_eq!(cfg.sift_down_level_cycles(), 4);
    }
}
