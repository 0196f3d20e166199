//! Eigenfunctions of the sinusoidal well,
//! `ψ_n(x) = Σ_m f_m √(2/L) sin((m+1)kλx)` with `f_m = ω(ε_n)Q_m(ε_n)`.

use std::f64::consts::PI;
use std::fmt;

use crate::dipole_poly::{backward_sequence, forward_stable_len, q_sequence};
use crate::error::{domain, Error, Result};
use crate::jacobi_basis::{hamiltonian_matrix, Normalization};
use crate::model::PotentialSpec;
use crate::quadrature::simpson;

/// Couplings at or below this magnitude are treated as zero: the mixing they
/// cause is far below double precision.
pub const NEGLIGIBLE_COUPLING: f64 = 1e-100;

/// How the expansion coefficients are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientMethod {
    /// `ω(ε)Q_m(ε)` by forward recurrence, cut at the stability guard.
    Forward,
    /// Backward recurrence from the truncation boundary, `f_N = 0`.
    Backward,
    /// Inverse iteration on the truncated Hamiltonian.
    #[default]
    Eigenvector,
}

impl fmt::Display for CoefficientMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientMethod::Forward => "forward",
            CoefficientMethod::Backward => "backward",
            CoefficientMethod::Eigenvector => "eigenvector",
        })
    }
}

/// Expansion coefficients of one eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenstateExpansion {
    pub level: usize,
    pub epsilon: f64,
    /// `f_m` for `m < synthesis_len`, unit Euclidean norm.
    pub coefficients: Vec<f64>,
    pub synthesis_len: usize,
    pub method: CoefficientMethod,
    /// Number of forward-recurrence terms that stay above the rounding
    /// noise at this level (`None` when the coupling is negligible).
    pub stable_len: Option<usize>,
    pub warnings: Vec<String>,
}

impl EigenstateExpansion {
    /// Coefficients padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut v = self.coefficients.clone();
        v.resize(len.max(v.len()), 0.0);
        v
    }
}

/// Sampled eigenfunction on a uniform grid including both walls.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSamples {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub level: usize,
    pub spec: PotentialSpec,
    pub expansion: EigenstateExpansion,
    pub warnings: Vec<String>,
}

impl WavefunctionSamples {
    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    /// `∫₀ᴸ ψ² dx` by composite Simpson.
    pub fn norm_squared(&self) -> Result<f64> {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        simpson(&sq, self.spacing())
    }

    /// `∫₀ᴸ ψ_a ψ_b dx` for two samplings on the same grid.
    pub fn overlap(&self, other: &WavefunctionSamples) -> Result<f64> {
        if self.grid != other.grid {
            return Err(domain("overlap needs identical grids"));
        }
        let prod: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        simpson(&prod, self.spacing())
    }

    /// Sign changes strictly inside the well, skipping samples below
    /// `1e-10·max|ψ|`.
    pub fn interior_sign_changes(&self) -> usize {
        let peak = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let threshold = 1e-10 * peak;
        let mut last: Option<bool> = None;
        let mut changes = 0;
        for v in &self.values[1..self.values.len() - 1] {
            if v.abs() <= threshold {
                continue;
            }
            let positive = *v > 0.0;
            if let Some(prev) = last {
                if prev != positive {
                    changes += 1;
                }
            }
            last = Some(positive);
        }
        changes
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

// ψ'(0) ∝ Σ (m+1) f_m; make it positive.
fn orient(v: &mut [f64]) {
    let slope: f64 = v.iter().enumerate().map(|(m, f)| (m + 1) as f64 * f).sum();
    if slope < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Coefficients of level `level` in an `N`-term sine basis.
pub fn eigenstate_coefficients(
    c: f64,
    size: usize,
    level: usize,
    method: CoefficientMethod,
) -> Result<EigenstateExpansion> {
    if size == 0 || level >= size {
        return Err(domain(format!(
            "need level < N, got level = {level}, N = {size}"
        )));
    }
    if !c.is_finite() {
        return Err(domain(format!("coupling must be finite, got {c}")));
    }
    if c.abs() <= NEGLIGIBLE_COUPLING {
        let mut coefficients = vec![0.0; size];
        coefficients[level] = 1.0;
        return Ok(EigenstateExpansion {
            level,
            epsilon: ((level + 1) * (level + 1)) as f64,
            coefficients,
            synthesis_len: size,
            method,
            stable_len: None,
            warnings: Vec::new(),
        });
    }

    let matrix = hamiltonian_matrix(c, 0.5, 0.5, size)?;
    let epsilon = matrix.eigenvalues(level + 1)?[level];
    let stable_len = forward_stable_len(epsilon, c, size)?;
    let mut warnings = Vec::new();

    let mut coefficients = match method {
        CoefficientMethod::Forward => {
            let len = stable_len.min(size);
            if len < size {
                warnings.push(format!(
                    "forward recurrence at level {level} is only stable for {len} terms; \
                     synthesis truncated from N = {size}"
                ));
            }
            q_sequence(epsilon, c, len)?.values
        }
        CoefficientMethod::Backward => backward_sequence(epsilon, c, size, size)?.values,
        CoefficientMethod::Eigenvector => matrix.eigenvector(epsilon)?.vector,
    };
    normalize(&mut coefficients);
    orient(&mut coefficients);
    Ok(EigenstateExpansion {
        level,
        epsilon,
        synthesis_len: coefficients.len(),
        coefficients,
        method,
        stable_len: Some(stable_len),
        warnings,
    })
}

/// `ψ_level` on `grid_points` uniform points of `[0, L]`, coefficients from
/// inverse iteration.
pub fn sample_wavefunction(
    c: f64,
    k: u32,
    width: f64,
    size: usize,
    level: usize,
    grid_points: usize,
) -> Result<WavefunctionSamples> {
    sample_wavefunction_with(
        c,
        k,
        width,
        size,
        level,
        grid_points,
        CoefficientMethod::default(),
    )
}

pub fn sample_wavefunction_with(
    c: f64,
    k: u32,
    width: f64,
    size: usize,
    level: usize,
    grid_points: usize,
    method: CoefficientMethod,
) -> Result<WavefunctionSamples> {
    let spec = PotentialSpec::sinusoidal(c, k, width)?;
    if grid_points < 2 {
        return Err(domain(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    let expansion = eigenstate_coefficients(c, size, level, method)?;
    let mut warnings = expansion.warnings.clone();
    if let Some(stable) = expansion.stable_len {
        if method != CoefficientMethod::Forward && size > stable {
            warnings.push(format!(
                "N = {size} exceeds the forward-recurrence guard N* = {stable} at level {level}; \
                 {method} coefficients are unaffected"
            ));
        }
    }

    let amplitude = Normalization::Orthonormal.constant(width);
    let wave = f64::from(k) * PI / width;
    let last = grid_points - 1;
    let grid: Vec<f64> = (0..grid_points)
        .map(|j| {
            if j == last {
                width
            } else {
                width * j as f64 / last as f64
            }
        })
        .collect();
    let values = grid
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            if j == 0 || j == last {
                return 0.0;
            }
            expansion
                .coefficients
                .iter()
                .enumerate()
                .map(|(m, f)| f * (((m + 1) as f64) * wave * x).sin())
                .sum::<f64>()
                * amplitude
        })
        .collect();
    Ok(WavefunctionSamples {
        grid,
        values,
        level,
        spec,
        expansion,
        warnings,
    })
}

/// Share of the truncated kernel carried by the upper half of the
/// coefficients, `Σ_{m ≥ N/2} Q_m² / K`.
///
/// Close to zero at an eigenvalue, close to one away from the spectrum where
/// the forward recurrence grows without bound. Overflow counts as 1.
pub fn off_spectrum_tail(c: f64, size: usize, epsilon: f64) -> Result<f64> {
    if c == 0.0 {
        return Err(domain("off-spectrum diagnostic needs C != 0"));
    }
    let q = match q_sequence(epsilon, c, size) {
        Ok(q) => q,
        Err(Error::Growth { .. }) => return Ok(1.0),
        Err(e) => return Err(e),
    };
    let squares: Vec<f64> = q.values.iter().map(|v| v * v).collect();
    let total: f64 = squares.iter().sum();
    let tail: f64 = squares[size / 2..].iter().sum();
    Ok(tail / total)
}
