//! k-ary max-heap over `i64` and the insertion-based heapsort built on it.
//!
//! The heap lives in a flat array with the root at index 0: the parent of
//! node `i > 0` is `(i - 1) / k` and the children of node `i` are
//! `k*i + 1 ..= k*i + k`. Every comparison between two elements is counted,
//! which is what the benchmark layer regresses against `n * log_k(n)`.

use std::error::Error;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeapError {
    /// Arity must be at least 2 for the index arithmetic to make sense.
    InvalidArity { arity: usize },
    /// Insert on a heap that already holds `capacity` elements.
    CapacityExceeded { capacity: usize },
    /// Extract on an empty heap.
    Empty,
}

impl fmt::Display for HeapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeapError::InvalidArity { arity } => {
                write!(f, "heap arity must be >= 2, got {arity}")
            }
            HeapError::CapacityExceeded { capacity } => {
                write!(f, "heap capacity of {capacity} elements exceeded")
            }
            HeapError::Empty => write!(f, "extract from an empty heap"),
        }
    }
}

impl Error for HeapError {}

/// Index of the parent of node `i` in a k-ary heap.
///
/// `i` must not be the root; the root has no parent.
///
/// ```
/// use heapbench::heap::parent_index;
/// assert_eq!(parent_index(12, 3), 3);
/// assert_eq!(parent_index(1, 2), 0);
/// ```
pub fn parent_index(i: usize, k: usize) -> usize {
    debug_assert!(k >= 2);
    assert!(i > 0, "root node has no parent");
    (i - 1) / k
}

/// Indices of the k potential children of node `i` (not clipped to the
/// current heap size).
///
/// ```
/// use heapbench::heap::child_indices;
/// assert_eq!(child_indices(3, 2).collect::<Vec<_>>(), vec![7, 8]);
/// ```
pub fn child_indices(i: usize, k: usize) -> std::ops::Range<usize> {
    debug_assert!(k >= 2);
    k * i + 1..k * i + k + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeapConfig {
    arity: usize,
    capacity: usize,
}

impl HeapConfig {
    pub fn new(arity: usize, capacity: usize) -> Result<Self, HeapError> {
        if arity < 2 {
            return Err(HeapError::InvalidArity { arity });
        }
        Ok(HeapConfig { arity, capacity })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

/// A bounded k-ary max-heap that counts element comparisons.
#[derive(Debug, Clone)]
pub struct KHeap {
    elements: Vec<i64>,
    config: HeapConfig,
    comparisons: u64,
}

impl KHeap {
    pub fn new(config: HeapConfig) -> Self {
        KHeap {
            elements: Vec::with_capacity(config.capacity),
            config,
            comparisons: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn config(&self) -> HeapConfig {
        self.config
    }

    /// Number of element comparisons performed so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    pub fn peek(&self) -> Option<i64> {
        self.elements.first().copied()
    }

    /// Current array layout, root first. Mostly useful for tests.
    pub fn as_slice(&self) -> &[i64] {
        &self.elements
    }

    /// Append `value` and sift it up until its parent is at least as large.
    pub fn insert(&mut self, value: i64) -> Result<(), HeapError> {
        if self.elements.len() >= self.config.capacity {
            return Err(HeapError::CapacityExceeded {
                capacity: self.config.capacity,
            });
        }
        self.elements.push(value);
        self.sift_up(self.elements.len() - 1);
        Ok(())
    }

    /// Remove and return the maximum. The last element moves to the root and
    /// sifts down.
    pub fn extract_max(&mut self) -> Result<i64, HeapError> {
        if self.elements.is_empty() {
            return Err(HeapError::Empty);
        }
        let max = self.elements.swap_remove(0);
        if !self.elements.is_empty() {
            self.sift_down();
        }
        Ok(max)
    }

    fn sift_up(&mut self, mut i: usize) {
        let k = self.config.arity;
        while i > 0 {
            let p = parent_index(i, k);
            self.comparisons += 1;
            if self.elements[p] >= self.elements[i] {
                break;
            }
            self.elements.swap(p, i);
            i = p;
        }
    }

    fn sift_down(&mut self) {
        let k = self.config.arity;
        let len = self.elements.len();
        let mut i = 0;
        loop {
            let first = k * i + 1;
            if first >= len {
                break;
            }
            let end = (first + k).min(len);
            // Tournament among the children: keep the first of any tied
            // maxima, so the swap target is deterministic.
            let mut best = first;
            for c in first + 1..end {
                self.comparisons += 1;
                if self.elements[c] > self.elements[best] {
                    best = c;
                }
            }
            self.comparisons += 1;
            if self.elements[best] > self.elements[i] {
                self.elements.swap(i, best);
                i = best;
            } else {
                break;
            }
        }
    }

    /// Full scan of the heap property; used by tests and debug assertions.
    pub fn is_valid_heap(&self) -> bool {
        let k = self.config.arity;
        (1..self.elements.len()).all(|i| self.elements[parent_index(i, k)] >= self.elements[i])
    }
}

/// Sort ascending by inserting every element into a k-ary max-heap and then
/// draining it with `extract_max`, filling the output back to front.
///
/// Panics if `arity < 2`; arity is a configuration value, not data.
pub fn heapsort(input: &[i64], arity: usize) -> Vec<i64> {
    let (sorted, _) = heapsort_with_stats(input, arity);
    sorted
}

/// Like [`heapsort`], but also returns the total number of element
/// comparisons (sift-up during the build plus sift-down during the drain).
pub fn heapsort_with_stats(input: &[i64], arity: usize) -> (Vec<i64>, u64) {
    let config = HeapConfig::new(arity, input.len()).expect("arity must be >= 2");
    let mut heap = KHeap::new(config);
    for &v in input {
        heap.insert(v).expect("heap sized to hold the whole input");
    }
    let mut sorted = vec![0i64; input.len()];
    for slot in sorted.iter_mut().rev() {
        *slot = heap.extract_max().expect("one extract per insert");
    }
    (sorted, heap.comparisons())
}
