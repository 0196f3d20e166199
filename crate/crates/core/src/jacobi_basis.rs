//! Jacobi polynomials, the matrix of `y` in the orthonormal Jacobi basis,
//! and the sine basis functions of the sinusoidal well.
//!
//! In the basis `φ_n ∝ (1+y)^α (1−y)^β P_n^(μ,ν)(y)` with `y = cos(kλx)` the
//! reduced wave operator is `ε − H` where
//!
//! ```text
//! H_nm = (n + (μ+ν+1)/2)² δ_nm + C ⟨n|y|m⟩
//! ```
//!
//! and `⟨n|y|m⟩` is the (tridiagonal) Jacobi matrix of the orthonormal
//! polynomials.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::model::BasisParams;
use crate::tridiag::SymTridiag;

fn check_jacobi_params(mu: f64, nu: f64) -> Result<()> {
    if !(mu > -1.0 && nu > -1.0) {
        return Err(domain(format!(
            "Jacobi parameters must exceed -1, got mu = {mu}, nu = {nu}"
        )));
    }
    Ok(())
}

/// `P_n^(μ,ν)(y)` by forward three-term recurrence.
pub fn jacobi_eval(n: usize, mu: f64, nu: f64, y: f64) -> Result<f64> {
    check_jacobi_params(mu, nu)?;
    let (a, b) = (mu, nu);
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut curr = 0.5 * ((a - b) + (a + b + 2.0) * y);
    for j in 2..=n {
        let j = j as f64;
        let s = 2.0 * j + a + b;
        let lead = 2.0 * j * (j + a + b) * (s - 2.0);
        let mid = (s - 1.0) * (s * (s - 2.0) * y + a * a - b * b);
        let back = 2.0 * (j + a - 1.0) * (j + b - 1.0) * s;
        let next = (mid * curr - back * prev) / lead;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// `⟨n|y|m⟩` in the orthonormal Jacobi basis; zero unless `|n − m| ≤ 1`.
pub fn y_matrix_element(n: usize, m: usize, mu: f64, nu: f64) -> Result<f64> {
    check_jacobi_params(mu, nu)?;
    Ok(if n == m {
        y_diagonal(n, mu, nu)
    } else if m + 1 == n {
        y_lower(n, mu, nu)
    } else if n + 1 == m {
        y_upper(n, mu, nu)
    } else {
        0.0
    })
}

fn y_diagonal(n: usize, mu: f64, nu: f64) -> f64 {
    if nu == mu {
        return 0.0;
    }
    let s = 2.0 * n as f64 + mu + nu;
    if n == 0 {
        // (ν² − μ²)/((μ+ν)(μ+ν+2)) with the (μ+ν) factor cancelled, which
        // stays finite at μ + ν = 0.
        (nu - mu) / (s + 2.0)
    } else {
        (nu * nu - mu * mu) / (s * (s + 2.0))
    }
}

// Coefficient of δ_{n,m+1}: couples n to n − 1.
fn y_lower(n: usize, mu: f64, nu: f64) -> f64 {
    let nf = n as f64;
    let s = 2.0 * nf + mu + nu;
    let ratio = (nf / (s - 1.0)) * ((nf + mu + nu) / (s + 1.0));
    let root = (ratio * ((nf + mu) * (nf + nu))).sqrt();
    2.0 * root / s
}

// Coefficient of δ_{n,m−1}: couples n to n + 1. Grouped so that μ = ν = ½
// gives exactly ½.
fn y_upper(n: usize, mu: f64, nu: f64) -> f64 {
    let nf = n as f64;
    let s = 2.0 * nf + mu + nu;
    let ratio = ((nf + 1.0) / (s + 1.0)) * ((nf + mu + nu + 1.0) / (s + 3.0));
    let root = (ratio * ((nf + mu + 1.0) * (nf + nu + 1.0))).sqrt();
    2.0 * root / (s + 2.0)
}

/// `N × N` truncation of `H_nm = (n + (μ+ν+1)/2)² δ_nm + C⟨n|y|m⟩`.
pub fn hamiltonian_matrix(c: f64, mu: f64, nu: f64, size: usize) -> Result<SymTridiag> {
    check_jacobi_params(mu, nu)?;
    if size == 0 {
        return Err(domain("basis size must be >= 1"));
    }
    let shift = 0.5 * (mu + nu + 1.0);
    let diag = (0..size)
        .map(|n| {
            let centre = n as f64 + shift;
            centre * centre + c * y_diagonal(n, mu, nu)
        })
        .collect();
    let offdiag = (0..size - 1).map(|n| c * y_upper(n, mu, nu)).collect();
    SymTridiag::new(diag, offdiag)
}

/// Normalization convention of the sine basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `√(2/L)`: orthonormal under `∫₀ᴸ dx`.
    #[default]
    Orthonormal,
    /// Fixed `1/√π`, orthonormal only for `L = 2π`.
    InversePi,
}

impl Normalization {
    pub fn constant(self, width: f64) -> f64 {
        match self {
            Normalization::Orthonormal => (2.0 / width).sqrt(),
            Normalization::InversePi => 1.0 / PI.sqrt(),
        }
    }
}

/// One member of the basis, with its parameters fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunctionSpec {
    pub n: usize,
    pub params: BasisParams,
    pub k: u32,
    pub width: f64,
    pub normalization: f64,
}

impl BasisFunctionSpec {
    /// Sine basis member `sin((n+1)kλx)` of the `A = B = 0` case.
    pub fn sine(n: usize, k: u32, width: f64, convention: Normalization) -> Result<Self> {
        if k < 1 || width.is_nan() || width <= 0.0 {
            return Err(domain(format!(
                "need k >= 1 and L > 0, got k = {k}, L = {width}"
            )));
        }
        Ok(Self {
            n,
            params: BasisParams {
                mu: 0.5,
                nu: 0.5,
                alpha: 0.5,
                beta: 0.5,
            },
            k,
            width,
            normalization: convention.constant(width),
        })
    }

    /// Value at `x ∈ [0, L]`; the endpoints return exactly zero.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=self.width).contains(&x) {
            return Err(domain(format!("x = {x} lies outside [0, {}]", self.width)));
        }
        if x == 0.0 || x == self.width {
            return Ok(0.0);
        }
        let wave = (self.n + 1) as f64 * f64::from(self.k) * PI / self.width;
        Ok(self.normalization * (wave * x).sin())
    }
}

/// `√(2/L)·sin((n+1)kλx)`.
pub fn basis_function(n: usize, k: u32, width: f64, x: f64) -> Result<f64> {
    basis_function_with(n, k, width, x, Normalization::Orthonormal)
}

pub fn basis_function_with(
    n: usize,
    k: u32,
    width: f64,
    x: f64,
    convention: Normalization,
) -> Result<f64> {
    BasisFunctionSpec::sine(n, k, width, convention)?.eval(x)
}
