//! Tiny least-squares helper used for complexity and power fits.

/// Fit `y = c * x` (a line through the origin) by least squares.
///
/// Returns `(c, r_squared)` where `r_squared = 1 - SS_res / SS_tot` with
/// `SS_tot` centered on the mean of `y`. When all `y` are identical
/// (`SS_tot == 0`) the fit either explains everything (`SS_res == 0`,
/// r² = 1) or nothing (r² = 0).
///
/// Panics if the slices are empty or of different lengths; callers own the
/// "enough data" check.
pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len(), "x/y length mismatch");
    assert!(!xs.is_empty(), "cannot fit an empty data set");

    let sum_xx: f64 = xs.iter().map(|x| x * x).sum();
    let sum_xy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let c = if sum_xx == 0.0 { 0.0 } else { sum_xy / sum_xx };

    let mean_y: f64 = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - c * x).powi(2))
        .sum();

    let r_squared = if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    (c, r_squared)
}
