//! Recursion polynomials of the sinusoidal well.
//!
//! The expansion coefficients `f_n = ω(ε)Q_n(ε)` of an eigenstate satisfy
//!
//! ```text
//! ε f_0 = f_0 + ½C f_1
//! ε f_n = (n+1)² f_n + ½C (f_{n−1} + f_{n+1}),   n ≥ 1
//! ```
//!
//! With `Q_0 = 1` every `Q_n` is a degree-`n` polynomial in `ε`, and
//! `ω(ε) = K(ε)^(−½)` with the kernel `K = Σ Q_n²`. The zeros of `Q_N` are the
//! eigenvalues of the `N × N` truncation of the Hamiltonian.
//!
//! Forward evaluation follows the dominant solution of the recursion, so
//! past the classical turning point it loses accuracy quickly. Besides the
//! plain `f64` recurrence this module offers a backward (minimal-solution)
//! generator and a double-double evaluation at a double-double refined zero.

use twofloat::TwoFloat;

use crate::error::{domain, Error, Result};
use crate::jacobi_basis::hamiltonian_matrix;

/// Forward recurrence gives up once `|Q_n|` exceeds this.
pub const GROWTH_LIMIT: f64 = 1e150;

/// `Q_0(ε) … Q_{N−1}(ε)` for one coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct QSequence {
    pub coupling: f64,
    pub epsilon: f64,
    pub values: Vec<f64>,
}

impl QSequence {
    /// Residual of the recursion at row `n` (`1 ≤ n ≤ len − 2`).
    pub fn residual(&self, n: usize) -> f64 {
        let q = &self.values;
        let np1 = (n + 1) as f64;
        (self.epsilon - np1 * np1) * q[n] - 0.5 * self.coupling * (q[n - 1] + q[n + 1])
    }
}

/// `K(ε)` truncated at `N` terms and `ω = K^(−½)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub kernel: f64,
    pub omega: f64,
}

fn check_coupling(c: f64) -> Result<()> {
    if c == 0.0 || !c.is_finite() {
        return Err(domain(format!(
            "recursion polynomials need a finite nonzero coupling, got C = {c}"
        )));
    }
    Ok(())
}

/// Forward recurrence for `Q_0 … Q_{N−1}`.
pub fn q_sequence(epsilon: f64, c: f64, len: usize) -> Result<QSequence> {
    check_coupling(c)?;
    if len == 0 {
        return Err(domain("sequence length must be >= 1"));
    }
    let factor = 2.0 / c;
    let mut values = Vec::with_capacity(len);
    values.push(1.0);
    if len > 1 {
        values.push(factor * (epsilon - 1.0));
    }
    for n in 1..len.saturating_sub(1) {
        let np1 = (n + 1) as f64;
        let next = factor * ((epsilon - np1 * np1) * values[n]) - values[n - 1];
        if next.is_nan() || next.abs() > GROWTH_LIMIT {
            return Err(Error::Growth {
                index: n + 1,
                magnitude: next.abs(),
            });
        }
        values.push(next);
    }
    if let Some(&q1) = values.get(1) {
        if q1.is_nan() || q1.abs() > GROWTH_LIMIT {
            return Err(Error::Growth {
                index: 1,
                magnitude: q1.abs(),
            });
        }
    }
    Ok(QSequence {
        coupling: c,
        epsilon,
        values,
    })
}

pub fn kernel(epsilon: f64, c: f64, len: usize) -> Result<KernelValue> {
    let q = q_sequence(epsilon, c, len)?;
    let kernel: f64 = q.values.iter().map(|v| v * v).sum();
    Ok(KernelValue {
        kernel,
        omega: kernel.sqrt().recip(),
    })
}

/// The `N` zeros of `Q_N`, as eigenvalues of the `N × N` Hamiltonian.
pub fn qn_zeros(len: usize, c: f64) -> Result<Vec<f64>> {
    check_coupling(c)?;
    hamiltonian_matrix(c, 0.5, 0.5, len)?.all_eigenvalues()
}

/// `Q_N(ε)` by forward recurrence.
pub fn q_value(n: usize, epsilon: f64, c: f64) -> Result<f64> {
    Ok(*q_sequence(epsilon, c, n + 1)?.values.last().unwrap_or(&1.0))
}

/// Zeros of `Q_N` located without any eigensolver: a uniform scan of the
/// Gershgorin interval for sign changes of the forward-recurred `Q_N`,
/// refined by bisection on the sign of `Q_N`.
///
/// Only meaningful while forward recurrence is accurate (small `N`).
pub fn qn_zeros_by_sign_change(len: usize, c: f64) -> Result<Vec<f64>> {
    check_coupling(c)?;
    if len == 0 {
        return Err(domain("polynomial degree must be >= 1"));
    }
    let spread = c.abs();
    let lo = 1.0 - spread - 1.0;
    let hi = (len * len) as f64 + spread + 1.0;
    let eval = |e: f64| q_value(len, e, c);

    let mut panels = 64 * len;
    while panels <= 1 << 22 {
        let h = (hi - lo) / panels as f64;
        let mut roots = Vec::with_capacity(len);
        let mut left = lo;
        let mut f_left = eval(left)?;
        for i in 1..=panels {
            let right = lo + i as f64 * h;
            let f_right = eval(right)?;
            if f_right == 0.0 {
                roots.push(right);
            } else if f_left != 0.0 && (f_left < 0.0) != (f_right < 0.0) {
                roots.push(bisect_sign(&eval, left, right, f_left)?);
            }
            left = right;
            f_left = f_right;
        }
        if roots.len() == len {
            return Ok(roots);
        }
        panels *= 4;
    }
    Err(Error::NonConvergence {
        what: "sign-change scan of Q_N",
        iterations: 1 << 22,
    })
}

fn bisect_sign(
    eval: &impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
) -> Result<f64> {
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f = eval(mid)?;
        if f == 0.0 {
            return Ok(mid);
        }
        if (f < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Backward recurrence for the coefficients, started from `f_start = 0`,
/// `f_{start−1} = 1` and run down to `f_0`, then rescaled so that `f_0 = 1`.
///
/// With `start = len` this is the exact truncated problem; a larger `start`
/// approximates the minimal solution of the untruncated recursion (Miller's
/// algorithm). Returns the first `len` values.
pub fn backward_sequence(epsilon: f64, c: f64, len: usize, start: usize) -> Result<QSequence> {
    check_coupling(c)?;
    if len == 0 || start < len {
        return Err(domain(format!(
            "backward recurrence needs 1 <= len <= start, got len = {len}, start = {start}"
        )));
    }
    let factor = 2.0 / c;
    let mut f = vec![0.0; start + 1];
    f[start - 1] = 1.0;
    for m in (1..start).rev() {
        let mp1 = (m + 1) as f64;
        f[m - 1] = factor * ((epsilon - mp1 * mp1) * f[m]) - f[m + 1];
        if f[m - 1].abs() > 1e100 {
            let s = f[m - 1].abs();
            f[m - 1..].iter_mut().for_each(|v| *v /= s);
        }
    }
    let f0 = f[0];
    if f0 == 0.0 || !f0.is_finite() {
        return Err(Error::NonConvergence {
            what: "backward recurrence normalization",
            iterations: start,
        });
    }
    f.truncate(len);
    f.iter_mut().for_each(|v| *v /= f0);
    Ok(QSequence {
        coupling: c,
        epsilon,
        values: f,
    })
}

/// Number of leading forward-recurrence terms worth keeping at `epsilon`.
///
/// Past the turning point `(m+1)² ≥ ε` the true `|Q_m|` decays while rounding
/// noise grows with the dominant solution; the count ends at the index where
/// the computed `|Q_m|` is smallest. Returns `len` if the decay reaches the
/// end of the sequence.
pub fn forward_stable_len(epsilon: f64, c: f64, len: usize) -> Result<usize> {
    let values = match q_sequence(epsilon, c, len) {
        Ok(q) => q.values,
        Err(Error::Growth { index, .. }) => q_sequence(epsilon, c, index)?.values,
        Err(e) => return Err(e),
    };
    let turning = if epsilon <= 1.0 {
        0
    } else {
        (epsilon.sqrt().ceil() as usize).saturating_sub(1)
    };
    if turning >= values.len() {
        return Ok(values.len());
    }
    let (argmin, _) =
        values[turning..]
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bv), (i, v)| {
                if v.abs() < bv {
                    (i, v.abs())
                } else {
                    (bi, bv)
                }
            });
    Ok(turning + argmin + 1)
}

/// `Q_0 … Q_{N−1}` in double-double arithmetic.
pub fn q_sequence_extended(epsilon: TwoFloat, c: f64, len: usize) -> Result<Vec<TwoFloat>> {
    check_coupling(c)?;
    if len == 0 {
        return Err(domain("sequence length must be >= 1"));
    }
    let factor = TwoFloat::from(2.0) / c;
    let mut values = vec![TwoFloat::from(1.0)];
    if len > 1 {
        values.push(factor * (epsilon - 1.0));
    }
    for n in 1..len - 1 {
        let np1 = ((n + 1) * (n + 1)) as f64;
        let next = factor * ((epsilon - np1) * values[n]) - values[n - 1];
        values.push(next);
    }
    Ok(values)
}

/// Newton refinement of a zero of `Q_N` in double-double, starting from an
/// `f64` estimate (typically an eigenvalue of the `N × N` Hamiltonian).
pub fn refine_zero_extended(len: usize, c: f64, guess: f64) -> Result<TwoFloat> {
    check_coupling(c)?;
    let factor = TwoFloat::from(2.0) / c;
    let mut eps = TwoFloat::from(guess);
    for _ in 0..8 {
        // Q_N and dQ_N/dε together.
        let mut q_prev = TwoFloat::from(1.0);
        let mut d_prev = TwoFloat::from(0.0);
        let mut q = factor * (eps - 1.0);
        let mut d = factor;
        for n in 1..len {
            let np1 = ((n + 1) * (n + 1)) as f64;
            let shift = eps - np1;
            let q_next = factor * (shift * q) - q_prev;
            let d_next = factor * (q + shift * d) - d_prev;
            q_prev = q;
            d_prev = d;
            q = q_next;
            d = d_next;
        }
        if len == 0 || d == 0.0 {
            break;
        }
        let step = q / d;
        eps -= step;
        if step.hi().abs() <= 1e-31 * eps.hi().abs().max(1.0) {
            break;
        }
    }
    if !eps.hi().is_finite() {
        return Err(Error::NonConvergence {
            what: "double-double Newton refinement",
            iterations: 8,
        });
    }
    Ok(eps)
}

/// `ω(ε_j)Q_m(ε_j)`, `m < N`, for the `level`-th zero of `Q_N`, evaluated in
/// double-double at a double-double zero and rounded to `f64`.
pub fn normalized_coefficients_extended(len: usize, c: f64, level: usize) -> Result<Vec<f64>> {
    let zeros = qn_zeros(len, c)?;
    let guess = *zeros
        .get(level)
        .ok_or_else(|| domain(format!("level {level} outside 0..{len}")))?;
    let eps = refine_zero_extended(len, c, guess)?;
    let q = q_sequence_extended(eps, c, len)?;
    let kernel = q.iter().fold(TwoFloat::from(0.0), |acc, v| acc + *v * *v);
    let omega = TwoFloat::from(1.0) / kernel.sqrt();
    Ok(q.iter().map(|v| (*v * omega).hi()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TABLE1_E0: f64 = -0.5955395589892;

    #[test]
    fn q_sequence_examples() {
        let q = q_sequence(0.3, 1.7, 1).unwrap();
        assert_eq!(q.values, vec![1.0]);

        let q = q_sequence(1.0, 5.0, 3).unwrap();
        assert_eq!(q.values, vec![1.0, 0.0, -1.0]);

        let q = q_sequence(0.0, 2.0, 3).unwrap();
        assert_eq!(q.values, vec![1.0, -1.0, 3.0]);
    }

    #[test]
    fn q_sequence_rejects_zero_coupling() {
        assert!(matches!(q_sequence(1.0, 0.0, 4), Err(Error::Domain(_))));
        assert!(q_sequence(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn q_sequence_growth_guard() {
        let err = q_sequence(1e6, 0.1, 200).unwrap_err();
        assert!(matches!(err, Error::Growth { .. }));
    }

    #[test]
    fn q_sequence_satisfies_recursion() {
        let q = q_sequence(7.3, 5.0, 12).unwrap();
        for n in 1..11 {
            let scale = q.values[n - 1..=n + 1]
                .iter()
                .fold(1.0_f64, |m, v| m.max(v.abs()));
            assert!(q.residual(n).abs() <= 1e-12 * scale * 100.0);
        }
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(3.0, 4.0, 1).unwrap();
        assert_eq!((k.kernel, k.omega), (1.0, 1.0));

        let k = kernel(1.0, 5.0, 3).unwrap();
        assert_eq!(k.kernel, 2.0);
        assert!((k.omega - 0.5f64.sqrt()).abs() < 4e-16);

        let k = kernel(TABLE1_E0, 5.0, 13).unwrap();
        assert!(k.kernel.is_finite() && k.kernel > 1.0);
        assert!((k.omega - k.kernel.sqrt().recip()).abs() < 4e-16);
    }

    #[test]
    fn qn_zero_examples() {
        assert_eq!(qn_zeros(1, 3.0).unwrap(), vec![1.0]);
        let z = qn_zeros(2, 5.0).unwrap();
        let r = 34f64.sqrt();
        assert!((z[0] - (5.0 - r) / 2.0).abs() < 1e-14);
        assert!((z[1] - (5.0 + r) / 2.0).abs() < 1e-14);
        let z = qn_zeros(20, 5.0).unwrap();
        assert_eq!(z.len(), 20);
        assert!(z.windows(2).all(|w| w[0] < w[1]));
        assert!((z[0] - TABLE1_E0).abs() < 1e-12);
    }

    #[test]
    fn sign_change_route_matches_eigenvalues() {
        for len in 1..=12 {
            let a = qn_zeros(len, 5.0).unwrap();
            let b = qn_zeros_by_sign_change(len, 5.0).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-8, "N={len}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn zeros_of_q_n_are_zeros() {
        let z = qn_zeros(6, 2.0).unwrap();
        for e in z {
            let scale = q_sequence(e, 2.0, 7)
                .unwrap()
                .values
                .iter()
                .fold(1.0_f64, |m, v| m.max(v.abs()));
            assert!(q_value(6, e, 2.0).unwrap().abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn leading_coefficient_behaviour() {
        let c = 5.0;
        let e = 1e6;
        let q = q_sequence(e, c, 9).unwrap();
        for n in 1..=8 {
            let predicted = n as f64 * (2.0 * e / c).ln();
            let got = q.values[n].abs().ln();
            assert!((got - predicted).abs() <= 0.01 * predicted.abs());
        }
    }

    #[test]
    fn backward_matches_forward_at_truncated_eigenvalue() {
        let len = 10;
        let z = qn_zeros(len, 5.0).unwrap();
        for &e in &z[..4] {
            let fwd = q_sequence(e, 5.0, len).unwrap();
            let bwd = backward_sequence(e, 5.0, len, len).unwrap();
            assert_eq!(bwd.values[0], 1.0);
            for (a, b) in fwd.values.iter().zip(&bwd.values).take(6) {
                assert!((a - b).abs() < 1e-8 * a.abs().max(1e-3), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn miller_start_beyond_truncation_is_stable() {
        let e = qn_zeros(40, 5.0).unwrap()[0];
        let a = backward_sequence(e, 5.0, 20, 20).unwrap();
        let b = backward_sequence(e, 5.0, 20, 60).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(backward_sequence(e, 5.0, 20, 10).is_err());
    }

    #[test]
    fn stable_length_detects_noise_floor() {
        let e = qn_zeros(40, 5.0).unwrap()[0];
        let n_star = forward_stable_len(e, 5.0, 40).unwrap();
        assert!((8..=14).contains(&n_star), "N* = {n_star}");
        // Short sequences decay all the way.
        let e = qn_zeros(6, 5.0).unwrap()[0];
        assert_eq!(forward_stable_len(e, 5.0, 6).unwrap(), 6);
    }

    #[test]
    fn extended_refinement_is_a_zero() {
        let z = qn_zeros(13, 5.0).unwrap();
        let e = refine_zero_extended(13, 5.0, z[0]).unwrap();
        assert!((e.hi() - z[0]).abs() < 1e-14);
        let f = normalized_coefficients_extended(13, 5.0, 0).unwrap();
        let norm: f64 = f.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-15);
        assert!(normalized_coefficients_extended(13, 5.0, 13).is_err());
    }

    proptest! {
        #[test]
        fn coupling_sign_parity(e in -50.0f64..200.0, c in 0.1f64..20.0, n in 1usize..15) {
            let plus = q_sequence(e, c, n).unwrap();
            let minus = q_sequence(e, -c, n).unwrap();
            for (m, (p, q)) in plus.values.iter().zip(&minus.values).enumerate() {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                prop_assert_eq!(*q, sign * p);
            }
            let kp = kernel(e, c, n).unwrap();
            let km = kernel(e, -c, n).unwrap();
            prop_assert_eq!(kp, km);
        }
    }
}
