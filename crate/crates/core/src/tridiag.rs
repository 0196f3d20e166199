//! Symmetric tridiagonal eigensolver.
//!
//! Eigenvalues are located one index at a time by Sturm-sequence bisection,
//! eigenvectors by shifted inverse iteration with a partially pivoted
//! tridiagonal LU factorization.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};

const BISECTION_CAP: usize = 512;
const INVERSE_ITERATION_CAP: usize = 8;
/// Replacement for exactly zero Sturm pivots.
const PIVOT_FLOOR: f64 = 1e-300;

/// Symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

/// Unit eigenvector with its Rayleigh-quotient eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(domain("tridiagonal matrix needs at least one row"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(domain(format!(
                "off-diagonal has {} entries, expected {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(domain("tridiagonal entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Leading principal `n × n` block.
    pub fn leading(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(domain(format!(
                "leading block size {n} outside 1..={}",
                self.len()
            )));
        }
        Ok(Self {
            diag: self.diag[..n].to_vec(),
            offdiag: self.offdiag[..n - 1].to_vec(),
        })
    }

    /// Interval containing the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// `‖diag‖∞ + 2‖offdiag‖∞`, the reference magnitude for tolerances.
    pub fn scale(&self) -> f64 {
        let d = self.diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let e = self.offdiag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        d + 2.0 * e
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Number of eigenvalues strictly below `x`.
    ///
    /// Counts negative pivots of the LDLᵀ factorization of `T − xI`. An
    /// exactly zero pivot means `x` is an eigenvalue of a leading block and is
    /// replaced by `+1e-300`, so an eigenvalue equal to `x` is not counted.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 1..self.len() {
            if q < 0.0 {
                count += 1;
            }
            let pivot = if q == 0.0 { PIVOT_FLOOR } else { q };
            let e = self.offdiag[i - 1];
            q = (self.diag[i] - x) - e * (e / pivot);
        }
        if q < 0.0 {
            count += 1;
        }
        count
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        self.check_count(count)?;
        (0..count).map(|j| self.bisect(j)).collect()
    }

    /// Same as [`eigenvalues`](Self::eigenvalues) with each index refined on
    /// the rayon pool. Every index starts from the same bracket, so the
    /// output does not depend on scheduling.
    pub fn eigenvalues_parallel(&self, count: usize) -> Result<Vec<f64>> {
        self.check_count(count)?;
        (0..count).into_par_iter().map(|j| self.bisect(j)).collect()
    }

    pub fn all_eigenvalues(&self) -> Result<Vec<f64>> {
        self.eigenvalues(self.len())
    }

    fn check_count(&self, count: usize) -> Result<()> {
        if count == 0 || count > self.len() {
            return Err(domain(format!(
                "eigenvalue count {count} outside 1..={}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Bisection for the `index`-th eigenvalue (0-based), carried down to
    /// adjacent floating-point numbers.
    fn bisect(&self, index: usize) -> Result<f64> {
        let (glo, ghi) = self.gershgorin_bounds();
        let scale = self.scale().max(f64::MIN_POSITIVE);
        let pad = f64::EPSILON * scale + f64::MIN_POSITIVE;
        // count(lo) <= index < count(hi)
        let mut lo = glo - pad;
        let mut hi = ghi + pad;
        let floor = 1e-3 * f64::EPSILON * scale;
        for _ in 0..BISECTION_CAP {
            let mid = 0.5 * (lo + hi);
            let width = hi - lo;
            if mid <= lo || mid >= hi || width <= floor.max(2.0 * f64::EPSILON * mid.abs()) {
                return Ok(mid);
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NonConvergence {
            what: "Sturm bisection",
            iterations: BISECTION_CAP,
        })
    }

    /// Unit eigenvector for an eigenvalue estimate `value` by inverse
    /// iteration.
    ///
    /// Fails with [`Error::DegenerateCluster`] when a second eigenvalue lies
    /// within `1e-12·scale` of `value`, since the eigenvector is then not
    /// determined by the shift.
    pub fn eigenvector(&self, value: f64) -> Result<EigenPair> {
        let n = self.len();
        if n == 1 {
            return Ok(EigenPair {
                value: self.diag[0],
                vector: vec![1.0],
            });
        }
        let scale = self.scale().max(f64::MIN_POSITIVE);
        let window = 1e-12 * scale;
        let multiplicity = self.sturm_count(value + window) - self.sturm_count(value - window);
        if multiplicity >= 2 {
            return Err(Error::DegenerateCluster {
                value,
                multiplicity,
                width: window,
            });
        }

        let lu = ShiftedLu::factor(self, value, scale);
        let tolerance = 1e-10 * scale;
        let mut best: Option<(f64, EigenPair)> = None;
        for seed in 0..3 {
            let mut x = start_vector(n, seed);
            for iteration in 0..INVERSE_ITERATION_CAP {
                let mut y = x.clone();
                lu.solve(&mut y);
                let norm = l2_norm(&y);
                if !norm.is_finite() || norm == 0.0 {
                    break;
                }
                y.iter_mut().for_each(|v| *v /= norm);
                let growth = norm / l2_norm(&x);
                x = y;
                let (rho, residual) = self.rayleigh_residual(&x);
                if best.as_ref().is_none_or(|(r, _)| residual < *r) {
                    best = Some((
                        residual,
                        EigenPair {
                            value: rho,
                            vector: x.clone(),
                        },
                    ));
                }
                if residual <= 1e-3 * tolerance {
                    break;
                }
                // A start vector nearly orthogonal to the target shows up as
                // weak amplification; move on to the next seed.
                if iteration >= 1 && growth < 1.0 / (1e-6 * scale) && residual > tolerance {
                    break;
                }
            }
            if let Some((residual, _)) = &best {
                if *residual <= tolerance {
                    break;
                }
            }
        }

        match best {
            Some((residual, mut pair)) if residual <= tolerance => {
                fix_sign(&mut pair.vector);
                Ok(pair)
            }
            _ => Err(Error::NonConvergence {
                what: "inverse iteration",
                iterations: 3 * INVERSE_ITERATION_CAP,
            }),
        }
    }

    /// Eigenpairs for the `count` smallest eigenvalues.
    pub fn eigenpairs(&self, count: usize) -> Result<Vec<EigenPair>> {
        self.eigenvalues(count)?
            .into_iter()
            .map(|v| self.eigenvector(v))
            .collect()
    }

    fn rayleigh_residual(&self, x: &[f64]) -> (f64, f64) {
        let tx = self.mul_vec(x);
        let rho: f64 = tx.iter().zip(x).map(|(a, b)| a * b).sum();
        let residual = tx
            .iter()
            .zip(x)
            .map(|(t, v)| (t - rho * v).abs())
            .fold(0.0_f64, f64::max);
        (rho, residual)
    }
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    let raw: Vec<f64> = match seed {
        0 => vec![1.0; n],
        1 => (0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
        _ => (0..n).map(|i| (1.0 + i as f64).sin() + 0.5).collect(),
    };
    let norm = l2_norm(&raw);
    raw.into_iter().map(|v| v / norm).collect()
}

/// First component of magnitude above `1e-12` made positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// LU factors of `T − σI` with partial pivoting: unit lower bidiagonal `L`
/// and upper triangular `U` with two superdiagonals.
struct ShiftedLu {
    lower: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiag, shift: f64, scale: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut lower = t.offdiag.clone();
        let mut du = t.offdiag.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        for i in 0..n - 1 {
            if d[i].abs() >= lower[i].abs() {
                if d[i] != 0.0 {
                    let fact = lower[i] / d[i];
                    lower[i] = fact;
                    d[i + 1] -= fact * du[i];
                } else {
                    lower[i] = 0.0;
                }
            } else {
                let fact = d[i] / lower[i];
                d[i] = lower[i];
                lower[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let floor = f64::EPSILON * scale;
        for p in d.iter_mut() {
            if p.abs() < floor {
                *p = if *p < 0.0 { -floor } else { floor };
            }
        }
        Self {
            lower,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.lower[i] * b[i];
            } else {
                b[i + 1] -= self.lower[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table1_matrix(n: usize) -> SymTridiag {
        SymTridiag::new(
            (0..n).map(|i| ((i + 1) * (i + 1)) as f64).collect(),
            vec![2.5; n - 1],
        )
        .unwrap()
    }

    fn diag149() -> SymTridiag {
        SymTridiag::new(vec![1.0, 4.0, 9.0], vec![0.0, 0.0]).unwrap()
    }

    #[test]
    fn construction_validates_shape() {
        assert!(SymTridiag::new(vec![], vec![]).is_err());
        assert!(SymTridiag::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiag::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
        assert!(SymTridiag::new(vec![1.0], vec![]).is_ok());
    }

    #[test]
    fn sturm_count_examples() {
        assert_eq!(diag149().sturm_count(5.0), 2);
        assert_eq!(diag149().sturm_count(4.0), 1);
        assert_eq!(table1_matrix(20).sturm_count(0.0), 1);
        let t = table1_matrix(20);
        let (lo, _) = t.gershgorin_bounds();
        assert_eq!(t.sturm_count(lo - 1e-9), 0);
        assert_eq!(t.sturm_count(1e6), 20);
    }

    #[test]
    fn sturm_count_handles_zero_pivot() {
        // [[0,1],[1,0]] has eigenvalues ±1; the first pivot at x = 0 is zero.
        let t = SymTridiag::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(t.sturm_count(0.0), 1);
        assert_eq!(t.sturm_count(-1.0), 0);
        assert_eq!(t.sturm_count(1.0 + 1e-15), 2);
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(diag149().eigenvalues(3).unwrap(), vec![1.0, 4.0, 9.0]);

        let t = SymTridiag::new(vec![1.0, 4.0], vec![2.5]).unwrap();
        let ev = t.eigenvalues(2).unwrap();
        let r = 34f64.sqrt();
        assert!((ev[0] - (5.0 - r) / 2.0).abs() < 1e-14);
        assert!((ev[1] - (5.0 + r) / 2.0).abs() < 1e-14);
        assert!((ev[0] - -0.4154759474226502).abs() < 1e-14);
    }

    #[test]
    fn eigenvalue_count_is_checked() {
        assert!(diag149().eigenvalues(0).is_err());
        assert!(diag149().eigenvalues(4).is_err());
    }

    #[test]
    fn clean_chain_matches_closed_form() {
        let n = 60;
        let t = SymTridiag::new(vec![0.0; n], vec![-1.0; n - 1]).unwrap();
        let ev = t.all_eigenvalues().unwrap();
        for (j, v) in ev.iter().enumerate() {
            let exact = -2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-13, "j={j}: {v} vs {exact}");
        }
    }

    #[test]
    fn eigenvector_of_diagonal_matrix_is_coordinate_vector() {
        let t = diag149();
        let p = t.eigenvector(4.0).unwrap();
        assert!((p.vector[1] - 1.0).abs() < 1e-14);
        assert!(p.vector[0].abs() < 1e-14 && p.vector[2].abs() < 1e-14);
    }

    #[test]
    fn eigenvector_two_by_two() {
        let t = SymTridiag::new(vec![1.0, 4.0], vec![2.5]).unwrap();
        let e0 = (5.0 - 34f64.sqrt()) / 2.0;
        let p = t.eigenvector(e0).unwrap();
        // Null space of [[1-e0, 2.5], [2.5, 4-e0]] is spanned by (2.5, e0-1).
        let norm = (2.5f64.powi(2) + (e0 - 1.0).powi(2)).sqrt();
        let expected = [2.5 / norm, (e0 - 1.0) / norm];
        for (a, b) in p.vector.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn degenerate_cluster_is_reported() {
        let t = SymTridiag::new(vec![2.0, 2.0, 5.0], vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            t.eigenvector(2.0),
            Err(Error::DegenerateCluster {
                multiplicity: 2,
                ..
            })
        ));
    }

    #[test]
    fn eigenvector_orthogonal_to_ones_start() {
        // Antisymmetric eigenvector of a persymmetric matrix is orthogonal to
        // the all-ones start vector.
        let t = SymTridiag::new(vec![0.0; 4], vec![1.0; 3]).unwrap();
        let ev = t.all_eigenvalues().unwrap();
        for v in ev {
            let p = t.eigenvector(v).unwrap();
            assert!((p.value - v).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenpairs_satisfy_invariants() {
        let t = table1_matrix(20);
        let scale = t.scale();
        for p in t.eigenpairs(20).unwrap() {
            let tx = t.mul_vec(&p.vector);
            let res = tx
                .iter()
                .zip(&p.vector)
                .map(|(a, b)| (a - p.value * b).abs())
                .fold(0.0, f64::max);
            assert!(res <= 1e-10 * scale);
            assert!((l2_norm(&p.vector) - 1.0).abs() < 1e-14);
            let first = p.vector.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn parallel_refinement_is_deterministic() {
        let t = table1_matrix(40);
        assert_eq!(
            t.eigenvalues(40).unwrap(),
            t.eigenvalues_parallel(40).unwrap()
        );
    }

    #[test]
    fn table1_matrix_interlaces() {
        let t = table1_matrix(20);
        let full = t.all_eigenvalues().unwrap();
        let sub = t.leading(19).unwrap().all_eigenvalues().unwrap();
        for j in 0..19 {
            let slack = 1e-12 * full[j + 1].abs();
            assert!(
                full[j] <= sub[j] + slack && sub[j] <= full[j + 1] + slack,
                "{j}"
            );
        }
    }

    fn random_matrix() -> impl Strategy<Value = SymTridiag> {
        (2usize..24).prop_flat_map(|n| {
            (
                proptest::collection::vec(-10.0f64..10.0, n),
                proptest::collection::vec(0.05f64..5.0, n - 1),
                proptest::collection::vec(any::<bool>(), n - 1),
            )
                .prop_map(|(d, e, s)| {
                    let e = e
                        .into_iter()
                        .zip(s)
                        .map(|(v, neg)| if neg { -v } else { v })
                        .collect();
                    SymTridiag::new(d, e).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn sturm_count_is_monotone(t in random_matrix(), xs in proptest::collection::vec(-30.0f64..30.0, 8)) {
            let mut xs = xs;
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let counts: Vec<usize> = xs.iter().map(|&x| t.sturm_count(x)).collect();
            prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(t.sturm_count(1e9), t.len());
        }

        #[test]
        fn spectrum_lies_in_gershgorin_interval(t in random_matrix()) {
            let (lo, hi) = t.gershgorin_bounds();
            for v in t.all_eigenvalues().unwrap() {
                prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }

        #[test]
        fn leading_block_interlaces(t in random_matrix()) {
            let n = t.len();
            let full = t.all_eigenvalues().unwrap();
            let sub = t.leading(n - 1).unwrap().all_eigenvalues().unwrap();
            for j in 0..n - 1 {
                prop_assert!(full[j] <= sub[j] + 1e-12 && sub[j] <= full[j + 1] + 1e-12);
            }
        }

        #[test]
        fn off_diagonal_sign_flip_keeps_spectrum(t in random_matrix()) {
            let flipped = SymTridiag::new(
                t.diag().to_vec(),
                t.offdiag().iter().map(|v| -v).collect(),
            ).unwrap();
            let a = t.all_eigenvalues().unwrap();
            let b = flipped.all_eigenvalues().unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-13 * t.scale().max(1.0));
            }
        }

        #[test]
        fn eigenpair_residuals_are_small(t in random_matrix()) {
            let scale = t.scale();
            let values = t.all_eigenvalues().unwrap();
            for (j, &v) in values.iter().enumerate() {
                let gap_ok = values.iter().enumerate().all(|(i, w)| i == j || (w - v).abs() > 1e-12 * scale);
                if !gap_ok { continue; }
                let p = t.eigenvector(v).unwrap();
                let tx = t.mul_vec(&p.vector);
                let res = tx.iter().zip(&p.vector).map(|(a, b)| (a - p.value * b).abs()).fold(0.0, f64::max);
                prop_assert!(res <= 1e-10 * scale);
                prop_assert!((l2_norm(&p.vector) - 1.0).abs() <= 1e-14);
            }
        }
    }
}
