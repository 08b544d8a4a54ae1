//! Benchmarking harness for k-ary heapsort.
//!
//! The crate has three layers:
//!
//! * [`heap`] — the algorithm itself: a k-ary max-heap over `i64` and an
//!   insertion-based heapsort, instrumented with a comparison counter.
//! * [`hwsim`] — a transaction-level simulator of a hardware heap accelerator
//!   (banked sibling memory, tournament comparator tree, FSM phases) that
//!   reports cycle counts, plus calibration of its cost model against
//!   reference timings.
//! * [`bench`] / [`energy`] / [`workload`] / [`fit`] — the experiment harness:
//!   deterministic input generation, wall-clock measurement of the software
//!   sort, energy estimation for both sides, complexity fitting, and report
//!   emission (CSV / markdown / plot data).

pub mod bench;
pub mod energy;
pub mod fit;
pub mod heap;
pub mod hwsim;
pub mod workload;
