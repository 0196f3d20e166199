//! Composite Simpson rule, used for norms and overlaps of sampled functions.

use crate::error::{domain, Result};

/// Simpson integral of uniformly spaced samples `values` with spacing `h`.
///
/// An odd panel count closes with Simpson's 3/8 rule on the last three
/// panels, so any sample count from 3 upward is accepted.
pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 {
        return Err(domain(format!(
            "Simpson rule needs at least 3 samples, got {n}"
        )));
    }
    let panels = n - 1;
    if panels.is_multiple_of(2) {
        return Ok(simpson_even(values, h));
    }
    let split = n - 4;
    let head = if split >= 2 {
        simpson_even(&values[..=split], h)
    } else {
        0.0
    };
    let t = &values[split..];
    let tail = 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
    Ok(head + tail)
}

fn simpson_even(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let interior: f64 = values[1..n - 1]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h / 3.0 * (values[0] + interior + values[n - 1])
}

/// Simpson integral of `f` over `[a, b]` with `panels` subintervals.
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> Result<f64> {
    let panels = panels.max(2);
    let h = (b - a) / panels as f64;
    let values: Vec<f64> = (0..=panels).map(|i| f(a + i as f64 * h)).collect();
    simpson(&values, h)
}
