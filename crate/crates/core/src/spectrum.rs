//! Spectra of the sinusoidal well and of the general family, closed forms,
//! convergence tables, coupling sweeps and the `C → 0` limit.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::jacobi_basis::hamiltonian_matrix;
use crate::model::{basis_params_from_couplings, PotentialSpec};

pub const DEFAULT_COUPLING: f64 = 5.0;
pub const DEFAULT_BASIS_SIZE: usize = 20;
pub const DEFAULT_LEVELS: usize = 11;

/// One bound state: index, reduced energy and physical energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    pub epsilon: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    /// Truncation size, `None` for closed-form spectra.
    pub basis_size: Option<usize>,
    pub spec: PotentialSpec,
}

impl Spectrum {
    fn from_reduced(spec: PotentialSpec, basis_size: Option<usize>, eps: Vec<f64>) -> Self {
        let scale = spec.energy_scale();
        let levels = eps
            .into_iter()
            .enumerate()
            .map(|(n, epsilon)| Level {
                n,
                epsilon,
                energy: scale * epsilon,
            })
            .collect();
        Self {
            levels,
            basis_size,
            spec,
        }
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.epsilon).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// Largest level count recommended for general `(μ, ν)` runs at basis size
/// `size`.
pub fn general_level_cap(size: usize) -> usize {
    size.saturating_sub(2).max(1)
}

fn check_sizes(size: usize, levels: usize) -> Result<()> {
    if levels == 0 || levels > size {
        return Err(domain(format!(
            "need 1 <= levels <= N, got levels = {levels}, N = {size}"
        )));
    }
    Ok(())
}

/// Lowest `levels` states of the sinusoidal well from the `N × N` matrix
/// `diag((n+1)²) + ½C·offdiag`. `C = 0` returns the exact `(n+1)²`.
pub fn solve_sinusoidal_well(
    c: f64,
    k: u32,
    width: f64,
    size: usize,
    levels: usize,
) -> Result<Spectrum> {
    let spec = PotentialSpec::sinusoidal(c, k, width)?;
    check_sizes(size, levels)?;
    let eps = if c == 0.0 {
        (1..=levels).map(|m| (m * m) as f64).collect()
    } else {
        hamiltonian_matrix(c, 0.5, 0.5, size)?.eigenvalues(levels)?
    };
    Ok(Spectrum::from_reduced(spec, Some(size), eps))
}

/// Lowest `levels` states of the full family with `1/cos²`, `1/sin²` and
/// cosine terms.
pub fn solve_general(
    a: f64,
    b: f64,
    c: f64,
    k: u32,
    width: f64,
    size: usize,
    levels: usize,
) -> Result<Spectrum> {
    let spec = PotentialSpec::new(a, b, c, k, width)?;
    check_sizes(size, levels)?;
    let params = basis_params_from_couplings(a, b)?;
    let eps = if c == 0.0 {
        closed_form(params.mu, params.nu, levels)
    } else {
        hamiltonian_matrix(c, params.mu, params.nu, size)?.eigenvalues(levels)?
    };
    Ok(Spectrum::from_reduced(spec, Some(size), eps))
}

fn closed_form(mu: f64, nu: f64, count: usize) -> Vec<f64> {
    let shift = 0.5 * (mu + nu + 1.0);
    (0..count)
        .map(|n| {
            let centre = n as f64 + shift;
            centre * centre
        })
        .collect()
}

/// Trigonometric Pöschl-Teller levels `ε_n = (n + (μ+ν+1)/2)²` for
/// `n = 0..=n_max`.
pub fn poschl_teller_spectrum(
    a: f64,
    b: f64,
    k: u32,
    width: f64,
    n_max: usize,
) -> Result<Spectrum> {
    let spec = PotentialSpec::new(a, b, 0.0, k, width)?;
    let params = basis_params_from_couplings(a, b)?;
    Ok(Spectrum::from_reduced(
        spec,
        None,
        closed_form(params.mu, params.nu, n_max + 1),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub basis_size: usize,
    pub n: usize,
    pub epsilon: f64,
}

/// Sinusoidal-well spectra for each basis size in `sizes`.
pub fn convergence_report(
    c: f64,
    k: u32,
    width: f64,
    sizes: &[usize],
    levels: usize,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(sizes.len() * levels);
    for &size in sizes {
        let spectrum = solve_sinusoidal_well(c, k, width, size, levels)?;
        rows.extend(spectrum.levels.iter().map(|l| ConvergenceRow {
            basis_size: size,
            n: l.n,
            epsilon: l.epsilon,
        }));
    }
    Ok(rows)
}

/// Largest `|ε_n(N_i) − ε_n(N_j)|` over all pairs of sizes in a report.
pub fn max_level_spread(rows: &[ConvergenceRow]) -> f64 {
    let mut spread = 0.0_f64;
    for a in rows {
        for b in rows.iter().filter(|b| b.n == a.n) {
            spread = spread.max((a.epsilon - b.epsilon).abs());
        }
    }
    spread
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub c: f64,
    pub n: usize,
    pub epsilon: f64,
    pub energy: f64,
}

/// One spectrum per coupling, flattened and ordered by `(C, n)` in input
/// order. Couplings are solved on the rayon pool.
pub fn sweep_coupling(
    couplings: &[f64],
    k: u32,
    width: f64,
    size: usize,
    levels: usize,
) -> Result<Vec<SweepRow>> {
    let spectra: Vec<Spectrum> = couplings
        .par_iter()
        .map(|&c| solve_sinusoidal_well(c, k, width, size, levels))
        .collect::<Result<_>>()?;
    Ok(spectra
        .iter()
        .flat_map(|s| {
            s.levels.iter().map(move |l| SweepRow {
                c: s.spec.c,
                n: l.n,
                epsilon: l.epsilon,
                energy: l.energy,
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlauderRow {
    pub n: usize,
    /// `C → 0` limit of the sinusoidal-well spectrum, `½k²λ²(n+1)²`.
    pub e_limit: f64,
    /// Flat-bottom well, `½λ²(n+1)²`.
    pub e_flat: f64,
}

/// Compares the switched-off sinusoidal well with the genuinely flat well.
/// The two agree only for `k = 1`.
pub fn klauder_gap(k: u32, width: f64, size: usize, levels: usize) -> Result<Vec<KlauderRow>> {
    let limit = solve_sinusoidal_well(0.0, k, width, size, levels)?;
    let flat = solve_sinusoidal_well(0.0, 1, width, size, levels)?;
    Ok(limit
        .levels
        .iter()
        .zip(&flat.levels)
        .map(|(l, f)| KlauderRow {
            n: l.n,
            e_limit: l.energy,
            e_flat: f.energy,
        })
        .collect())
}
