//! Potential family, basis parameters and energy unit conversions.
//!
//! The family covered here is
//!
//! ```text
//! 2V(x)/(k²λ²) = A/cos²(kλx/2) + B/sin²(kλx/2) + C cos(kλx),   λ = π/L,
//! ```
//!
//! on `x ∈ [0, L]`, with `ħ = m = 1`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Smallest admissible `A` or `B`: below it `4A + ¼ < 0` and the basis
/// parameters turn complex.
pub const MIN_COUPLING: f64 = -1.0 / 16.0;

/// Default pole guard for [`potential_value`], as a fraction of the width.
pub const DEFAULT_POLE_GUARD: f64 = 1e-12;

/// Couplings, harmonic index and width of one member of the potential family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    /// Strength of the `1/cos²(kλx/2)` term.
    pub a: f64,
    /// Strength of the `1/sin²(kλx/2)` term.
    pub b: f64,
    /// Strength of the `cos(kλx)` term.
    pub c: f64,
    /// Harmonic index, `k ≥ 1`.
    pub k: u32,
    /// Well width `L`.
    pub width: f64,
}

impl PotentialSpec {
    pub fn new(a: f64, b: f64, c: f64, k: u32, width: f64) -> Result<Self> {
        check_harmonic(k, width)?;
        for (name, value) in [("A", a), ("B", b), ("C", c)] {
            if !value.is_finite() {
                return Err(domain(format!("{name} must be finite, got {value}")));
            }
        }
        if a < MIN_COUPLING || b < MIN_COUPLING {
            return Err(domain(format!(
                "A and B must be >= -1/16, got A = {a}, B = {b}"
            )));
        }
        Ok(Self { a, b, c, k, width })
    }

    /// Sinusoidal-bottom well: `A = B = 0`.
    pub fn sinusoidal(c: f64, k: u32, width: f64) -> Result<Self> {
        Self::new(0.0, 0.0, c, k, width)
    }

    pub fn lambda(&self) -> f64 {
        PI / self.width
    }

    /// `½k²λ²`, the factor between reduced and physical energies.
    pub fn energy_scale(&self) -> f64 {
        energy_scale(self.k, self.width)
    }

    pub fn is_sinusoidal(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    /// The constant `D = A + B − ε` that completes the tridiagonal
    /// potential configuration for a given reduced energy.
    pub fn d_constant(&self, epsilon: f64) -> f64 {
        self.a + self.b - epsilon
    }
}

/// Jacobi parameters `(μ, ν)` and weight exponents `(α, β)` of the basis
/// `(1+y)^α (1−y)^β P_n^(μ,ν)(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    pub mu: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// A reduced energy `ε = 2E/(k²λ²)` together with the physical energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedEnergy {
    pub epsilon: f64,
    pub energy: f64,
}

fn check_harmonic(k: u32, width: f64) -> Result<()> {
    if k < 1 {
        return Err(domain("harmonic index k must be >= 1"));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(domain(format!(
            "well width L must be positive, got {width}"
        )));
    }
    Ok(())
}

// Evaluated as ((½k²)λ²) so that power-of-two k give exactly scaled results.
fn energy_scale(k: u32, width: f64) -> f64 {
    let lambda = PI / width;
    let k2 = f64::from(k) * f64::from(k);
    0.5 * k2 * (lambda * lambda)
}

pub fn reduced_energy(energy: f64, k: u32, width: f64) -> Result<ReducedEnergy> {
    check_harmonic(k, width)?;
    Ok(ReducedEnergy {
        epsilon: energy / energy_scale(k, width),
        energy,
    })
}

pub fn physical_energy(epsilon: f64, k: u32, width: f64) -> Result<f64> {
    check_harmonic(k, width)?;
    Ok(energy_scale(k, width) * epsilon)
}

/// `V(x)` with the default pole guard of `1e-12·L`.
pub fn potential_value(spec: &PotentialSpec, x: f64) -> Result<f64> {
    potential_value_guarded(spec, x, DEFAULT_POLE_GUARD * spec.width)
}

/// `V(x)`, refusing points closer than `guard` to a pole of an active
/// `A` or `B` term.
///
/// Poles of `1/cos²(kλx/2)` sit at odd multiples of `L/k`, those of
/// `1/sin²(kλx/2)` at even multiples (including both endpoints when `k` is
/// even, and `x = 0` always).
pub fn potential_value_guarded(spec: &PotentialSpec, x: f64, guard: f64) -> Result<f64> {
    if !(0.0..=spec.width).contains(&x) {
        return Err(domain(format!(
            "x = {x} lies outside the well [0, {}]",
            spec.width
        )));
    }
    let k = f64::from(spec.k);
    let t = k * x / spec.width;
    let nearest = t.round();
    let pole_active = if (nearest as u64).is_multiple_of(2) {
        spec.b != 0.0
    } else {
        spec.a != 0.0
    };
    let pole = nearest * spec.width / k;
    if pole_active && (x - pole).abs() <= guard {
        return Err(Error::Singularity { x, pole });
    }

    let half = 0.5 * spec.k as f64 * spec.lambda() * x;
    let mut reduced = spec.c * (2.0 * half).cos();
    if spec.a != 0.0 {
        reduced += spec.a / half.cos().powi(2);
    }
    if spec.b != 0.0 {
        reduced += spec.b / half.sin().powi(2);
    }
    Ok(spec.energy_scale() * reduced)
}

/// Maps couplings to basis parameters through `ν² = 4A + ¼`, `μ² = 4B + ¼`,
/// `2α = ν + ½`, `2β = μ + ½`, keeping the nonnegative roots.
pub fn basis_params_from_couplings(a: f64, b: f64) -> Result<BasisParams> {
    let nu_sq = 4.0 * a + 0.25;
    let mu_sq = 4.0 * b + 0.25;
    if !(nu_sq >= 0.0 && mu_sq >= 0.0) {
        return Err(domain(format!(
            "couplings give complex basis parameters: A = {a}, B = {b}"
        )));
    }
    let nu = nu_sq.sqrt();
    let mu = mu_sq.sqrt();
    Ok(BasisParams {
        mu,
        nu,
        alpha: 0.5 * (nu + 0.5),
        beta: 0.5 * (mu + 0.5),
    })
}
