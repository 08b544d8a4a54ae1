//! Wall-clock measurement of the software sort.
//!
//! Timing uses the monotonic clock (`Instant`); each repetition is
//! validated against a reference sort so a broken build cannot produce
//! plausible-looking numbers, and repetitions are separated by a cooldown
//! sleep so thermal state from one run bleeds less into the next.

use std::thread;
use std::time::{Duration, Instant};

use super::BenchError;
use crate::heap::heapsort;

/// Time `repetitions` runs of the k-ary heapsort over `input`, sleeping
/// `cooldown_ms` between runs. Returns `(mean_s, stddev_s)` — sample
/// standard deviation, zero for a single repetition.
pub fn measure_software(
    input: &[i64],
    arity: usize,
    repetitions: u32,
    cooldown_ms: u64,
) -> Result<(f64, f64), BenchError> {
    if arity < 2 {
        return Err(BenchError::InvalidSpec(format!(
            "software sort needs arity >= 2, got {arity}"
        )));
    }
    let mut expected = input.to_vec();
    expected.sort_unstable();

    measure_with(repetitions, cooldown_ms, || {
        let started = Instant::now();
        let sorted = heapsort(input, arity);
        let elapsed = started.elapsed().as_secs_f64();
        if sorted != expected {
            return Err(BenchError::SortMismatch {
                size: input.len(),
                arity,
            });
        }
        Ok(elapsed)
    })
}

/// The repetition/cooldown/statistics loop with the timed operation
/// injected, so the statistics are testable without a real clock.
pub(crate) fn measure_with<F>(
    repetitions: u32,
    cooldown_ms: u64,
    mut run_once: F,
) -> Result<(f64, f64), BenchError>
where
    F: FnMut() -> Result<f64, BenchError>,
{
    if repetitions == 0 {
        return Err(BenchError::InvalidSpec(
            "measurement needs at least one repetition".into(),
        ));
    }
    let mut times = Vec::with_capacity(repetitions as usize);
    for rep in 0..repetitions {
        if rep > 0 && cooldown_ms > 0 {
            thread::sleep(Duration::from_millis(cooldown_ms));
        }
        times.push(run_once()?);
    }
    Ok(mean_stddev(&times))
}

fn mean_stddev(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
