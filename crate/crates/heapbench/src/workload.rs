//! Deterministic benchmark inputs.
//!
//! Random data comes from ChaCha8 (via `rand_chacha`), seeded with
//! `seed_from_u64`. ChaCha8 is a portable, platform-independent stream
//! cipher, so the same seed yields the same input vector on every
//! architecture and in every future run — that is what makes sweep results
//! reproducible byte for byte.

use std::error::Error;
use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random values are drawn from the full `i32` range by default (widened to
/// `i64` storage). A four-billion-value span keeps duplicates rare at the
/// benchmark sizes without exercising `i64` overflow corners.
pub const DEFAULT_VALUE_RANGE: (i64, i64) = (i32::MIN as i64, i32::MAX as i64);

/// The seven input sizes covered by the bundled reference measurements:
/// 4096 up to 16384 in steps of 2048.
pub fn reference_size_sweep() -> Vec<usize> {
    (2..=8).map(|i| i * 2048).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorkloadError {
    /// `value_range.0 > value_range.1`.
    EmptyValueRange { lo: i64, hi: i64 },
    /// Unrecognized ordering name in a config file or CLI flag.
    UnknownOrdering(String),
}

impl fmt::Display for WorkloadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorkloadError::EmptyValueRange { lo, hi } => {
                write!(f, "empty value range: lo {lo} > hi {hi}")
            }
            WorkloadError::UnknownOrdering(s) => {
                write!(f, "unknown ordering {s:?} (expected random, sorted or reversed)")
            }
        }
    }
}

impl Error for WorkloadError {}

/// Input ordering, with the RNG seed attached where one is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputOrdering {
    Random { seed: u64 },
    Sorted,
    Reversed,
}

impl InputOrdering {
    pub fn kind(&self) -> OrderingKind {
        match self {
            InputOrdering::Random { .. } => OrderingKind::Random,
            InputOrdering::Sorted => OrderingKind::Sorted,
            InputOrdering::Reversed => OrderingKind::Reversed,
        }
    }
}

/// Ordering without its seed — what a result row or a config file names.
/// The derived `Ord` (variant order = alphabetical of the display names)
/// is the canonical sort order used in emitted reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderingKind {
    Random,
    Reversed,
    Sorted,
}

impl OrderingKind {
    pub const ALL: [OrderingKind; 3] = [
        OrderingKind::Random,
        OrderingKind::Reversed,
        OrderingKind::Sorted,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OrderingKind::Random => "random",
            OrderingKind::Reversed => "reversed",
            OrderingKind::Sorted => "sorted",
        }
    }

    /// Attach `seed` where the ordering needs one.
    pub fn with_seed(&self, seed: u64) -> InputOrdering {
        match self {
            OrderingKind::Random => InputOrdering::Random { seed },
            OrderingKind::Reversed => InputOrdering::Reversed,
            OrderingKind::Sorted => InputOrdering::Sorted,
        }
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderingKind {
    type Err = WorkloadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(OrderingKind::Random),
            "sorted" => Ok(OrderingKind::Sorted),
            "reversed" => Ok(OrderingKind::Reversed),
            other => Err(WorkloadError::UnknownOrdering(other.to_string())),
        }
    }
}

/// A fully specified benchmark input. Two equal `Workload`s always generate
/// identical vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workload {
    pub size: usize,
    pub ordering: InputOrdering,
    /// Inclusive bounds for *random* values. Sorted and reversed inputs are
    /// always the permutation `0..size` regardless of this range.
    pub value_range: (i64, i64),
}

impl Workload {
    pub fn new(size: usize, ordering: InputOrdering) -> Self {
        Workload {
            size,
            ordering,
            value_range: DEFAULT_VALUE_RANGE,
        }
    }

    pub fn with_value_range(mut self, lo: i64, hi: i64) -> Result<Self, WorkloadError> {
        if lo > hi {
            return Err(WorkloadError::EmptyValueRange { lo, hi });
        }
        self.value_range = (lo, hi);
        Ok(self)
    }
}

/// Materialize the input vector for `workload`.
pub fn generate(workload: &Workload) -> Vec<i64> {
    let n = workload.size;
    match workload.ordering {
        InputOrdering::Sorted => (0..n as i64).collect(),
        InputOrdering::Reversed => (0..n as i64).rev().collect(),
        InputOrdering::Random { seed } => {
            let (lo, hi) = workload.value_range;
            // Span fits in u128 even for the full i64 range. Plain modulo
            // reduction: bias is zero for power-of-two spans (the default is
            // 2^32) and irrelevant for benchmarking otherwise.
            let span = (hi as i128 - lo as i128 + 1) as u128;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let offset = (rng.next_u64() as u128) % span;
                    (lo as i128 + offset as i128) as i64
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_sizes_run_from_4096_to_16384() {
        assert_eq!(
            reference_size_sweep(),
            vec![4096, 6144, 8192, 10240, 12288, 14336, 16384]
        );
    }

    #[test]
    fn sorted_and_reversed_are_permutations_of_0_to_n() {
        let sorted = generate(&Workload::new(5, InputOrdering::Sorted));
        assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        let reversed = generate(&Workload::new(5, InputOrdering::Reversed));
        assert_eq!(reversed, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn random_respects_value_range() {
        let w = Workload::new(1000, InputOrdering::Random { seed: 7 })
            .with_value_range(-3, 3)
            .unwrap();
        let values = generate(&w);
        assert_eq!(values.len(), 1000);
        assert!(values.iter().all(|&v| (-3..=3).contains(&v)));
        // A 7-value range over 1000 draws should hit every value.
        for v in -3..=3 {
            assert!(values.contains(&v), "value {v} never generated");
        }
    }

    #[test]
    fn degenerate_range_is_constant() {
        let w = Workload::new(16, InputOrdering::Random { seed: 1 })
            .with_value_range(42, 42)
            .unwrap();
        assert_eq!(generate(&w), vec![42; 16]);
    }

    #[test]
    fn inverted_range_is_rejected() {
        let err = Workload::new(4, InputOrdering::Sorted)
            .with_value_range(10, 9)
            .unwrap_err();
        assert_eq!(err, WorkloadError::EmptyValueRange { lo: 10, hi: 9 });
    }

    #[test]
    fn full_i64_range_does_not_overflow() {
        let w = Workload::new(64, InputOrdering::Random { seed: 3 })
            .with_value_range(i64::MIN, i64::MAX)
            .unwrap();
        let values = generate(&w);
        assert_eq!(values.len(), 64);
    }

    #[test]
    fn seed_42_prefix_is_frozen() {
        // Golden values pinned at first release. If this test breaks, the
        // generator is no longer reproducing historical workloads — that
        // invalidates every archived result, so think twice.
        let w = Workload::new(8, InputOrdering::Random { seed: 42 });
        assert_eq!(
            generate(&w),
            vec![
                -1185064031,
                -1518759544,
                1169576844,
                -669620398,
                1018577584,
                610108062,
                -796454124,
                -1441650556,
            ]
        );
    }

    #[test]
    fn ordering_names_round_trip() {
        for kind in OrderingKind::ALL {
            assert_eq!(kind.as_str().parse::<OrderingKind>().unwrap(), kind);
        }
        assert!("shuffled".parse::<OrderingKind>().is_err());
    }

    #[test]
    fn canonical_ordering_is_alphabetical() {
        let mut kinds = vec![OrderingKind::Sorted, OrderingKind::Random, OrderingKind::Reversed];
        kinds.sort();
        assert_eq!(
            kinds,
            vec![OrderingKind::Random, OrderingKind::Reversed, OrderingKind::Sorted]
        );
    }
}
