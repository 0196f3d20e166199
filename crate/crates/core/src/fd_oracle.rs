//! Second-order finite differences for `−½ψ'' + V(x)ψ = Eψ` on `[0, L]`
//! with `ψ(0) = ψ(L) = 0`, plus Richardson extrapolation.
//!
//! This solver knows nothing about the sine basis or the recursion and is
//! used to cross-check the spectral results. Only the bounded `A = B = 0`
//! potentials are supported.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::model::PotentialSpec;
use crate::spectrum::solve_sinusoidal_well;
use crate::tridiag::SymTridiag;

/// Smallest accepted number of interior points.
pub const MIN_POINTS: usize = 16;

/// Uniform grid of `points` interior nodes, spacing `L/(points+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    pub points: usize,
    pub h: f64,
}

impl FdGrid {
    pub fn new(width: f64, points: usize) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(domain(format!(
                "finite-difference grid needs at least {MIN_POINTS} interior points, got {points}"
            )));
        }
        if width.is_nan() || width <= 0.0 {
            return Err(domain(format!("well width must be positive, got {width}")));
        }
        Ok(Self {
            points,
            h: width / (points + 1) as f64,
        })
    }

    /// Grid with exactly half the spacing.
    pub fn refined(&self, width: f64) -> Result<Self> {
        Self::new(width, 2 * self.points + 1)
    }

    pub fn node(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.h
    }
}

fn check_bounded(spec: &PotentialSpec) -> Result<()> {
    if !spec.is_sinusoidal() {
        return Err(domain(
            "finite-difference oracle only handles A = B = 0 potentials",
        ));
    }
    Ok(())
}

/// Diagonal `1/h² + V(x_i)`, off-diagonal `−1/(2h²)`.
pub fn fd_matrix(spec: &PotentialSpec, points: usize) -> Result<SymTridiag> {
    check_bounded(spec)?;
    let grid = FdGrid::new(spec.width, points)?;
    let kinetic = 1.0 / (grid.h * grid.h);
    let wave = f64::from(spec.k) * spec.lambda();
    let amplitude = spec.energy_scale() * spec.c;
    let diag = (0..points)
        .map(|i| kinetic + amplitude * (wave * grid.node(i)).cos())
        .collect();
    SymTridiag::new(diag, vec![-0.5 * kinetic; points - 1])
}

/// Lowest `count` finite-difference energies on `points` interior nodes.
pub fn fd_spectrum(spec: &PotentialSpec, points: usize, count: usize) -> Result<Vec<f64>> {
    if count > points {
        return Err(domain(format!(
            "cannot extract {count} levels from {points} grid points"
        )));
    }
    fd_matrix(spec, points)?.eigenvalues_parallel(count)
}

/// Coarse, fine and extrapolated energies of one Richardson step.
#[derive(Debug, Clone, PartialEq)]
pub struct RichardsonRun {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
}

/// Solves on `points` and on the grid of half the spacing (`2·points + 1`
/// interior nodes) and combines them as `(4E_fine − E_coarse)/3`.
pub fn richardson_run(spec: &PotentialSpec, points: usize, count: usize) -> Result<RichardsonRun> {
    let coarse = fd_spectrum(spec, points, count)?;
    let fine = fd_spectrum(spec, 2 * points + 1, count)?;
    let extrapolated = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    Ok(RichardsonRun {
        coarse,
        fine,
        extrapolated,
    })
}

pub fn richardson_pair(spec: &PotentialSpec, points: usize, count: usize) -> Result<Vec<f64>> {
    Ok(richardson_run(spec, points, count)?.extrapolated)
}

/// Observed convergence order of level `level` from grids with spacings
/// `h`, `h/2`, `h/4`.
pub fn observed_order(spec: &PotentialSpec, points: usize, level: usize) -> Result<f64> {
    let m1 = points;
    let m2 = 2 * m1 + 1;
    let m3 = 2 * m2 + 1;
    let e: Vec<f64> = [m1, m2, m3]
        .iter()
        .map(|&m| fd_spectrum(spec, m, level + 1).map(|v| v[level]))
        .collect::<Result<_>>()?;
    Ok(((e[0] - e[1]) / (e[1] - e[2])).abs().log2())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMatch {
    pub n: usize,
    pub spectral: f64,
    pub fd: f64,
}

/// Outcome of matching spectral-method energies against the FD spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetReport {
    pub matched: Vec<LevelMatch>,
    /// Spectral energies with no FD partner within the tolerance.
    pub unmatched: Vec<f64>,
    /// FD energies up to the highest matched one that the spectral method
    /// does not produce.
    pub missing: Vec<f64>,
}

impl SubsetReport {
    pub fn all_matched(&self) -> bool {
        self.unmatched.is_empty()
    }
}

/// Checks that the spectral energies form a subset of the (Richardson
/// extrapolated) FD spectrum and lists the FD levels left out.
///
/// For `k ≥ 2` the sine basis `sin((n+1)kλx)` spans an invariant subspace of
/// the Hamiltonian, so the remaining FD levels are not reachable from it.
pub fn subset_check(
    c: f64,
    k: u32,
    width: f64,
    size: usize,
    levels: usize,
    points: usize,
    tol: f64,
) -> Result<SubsetReport> {
    let spectral = solve_sinusoidal_well(c, k, width, size, levels)?;
    let spec = spectral.spec;
    let energies = spectral.energies();
    let top = energies.last().copied().unwrap_or(0.0);
    let margin = (0.05 * top.abs()).max(1.0) + tol;
    let count = fd_matrix(&spec, points)?
        .sturm_count(top + margin)
        .clamp(1, points);
    let fd = richardson_pair(&spec, points, count)?;

    let mut used = vec![false; fd.len()];
    let mut matched = Vec::new();
    let mut unmatched = Vec::new();
    for (n, &e) in energies.iter().enumerate() {
        let best = fd
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|a, b| (a.1 - e).abs().total_cmp(&(b.1 - e).abs()));
        match best {
            Some((i, &f)) if (f - e).abs() <= tol => {
                used[i] = true;
                matched.push(LevelMatch {
                    n,
                    spectral: e,
                    fd: f,
                });
            }
            _ => unmatched.push(e),
        }
    }
    let ceiling = matched
        .iter()
        .map(|m| m.fd)
        .fold(f64::NEG_INFINITY, f64::max);
    let missing = fd
        .iter()
        .zip(&used)
        .filter(|(f, u)| !**u && **f <= ceiling)
        .map(|(f, _)| *f)
        .collect();
    Ok(SubsetReport {
        matched,
        unmatched,
        missing,
    })
}

/// FD Hamiltonian projected on the grid vectors `sin(m·kλx_i)`, `m = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SineProjection {
    pub matrix: SymTridiag,
    /// Largest `|P_mn|` with `|m − n| ≥ 2`.
    pub max_off_band: f64,
}

/// Galerkin projection of the FD matrix onto the discrete sine modes that
/// mirror the spectral basis.
pub fn project_onto_sine_modes(
    spec: &PotentialSpec,
    points: usize,
    size: usize,
) -> Result<SineProjection> {
    let h = fd_matrix(spec, points)?;
    if size == 0 || size * spec.k as usize > points {
        return Err(domain(format!(
            "need 1 <= N·k < M + 1, got N = {size}, k = {}, M = {points}",
            spec.k
        )));
    }
    let modes: Vec<Vec<f64>> = (1..=size)
        .map(|m| {
            let wave = (m * spec.k as usize) as f64 * PI / (points + 1) as f64;
            let v: Vec<f64> = (1..=points).map(|i| (wave * i as f64).sin()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    let applied: Vec<Vec<f64>> = modes.iter().map(|v| h.mul_vec(v)).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let mut diag = Vec::with_capacity(size);
    let mut offdiag = Vec::with_capacity(size - 1);
    let mut max_off_band = 0.0_f64;
    for (i, row) in modes.iter().enumerate() {
        for (j, col) in applied.iter().enumerate().skip(i) {
            let value = dot(row, col);
            match j - i {
                0 => diag.push(value),
                1 => offdiag.push(value),
                _ => max_off_band = max_off_band.max(value.abs()),
            }
        }
    }
    Ok(SineProjection {
        matrix: SymTridiag::new(diag, offdiag)?,
        max_off_band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1_E0: f64 = -0.5955395589892;

    fn flat(width: f64) -> PotentialSpec {
        PotentialSpec::sinusoidal(0.0, 1, width).unwrap()
    }

    #[test]
    fn grid_checks() {
        assert!(FdGrid::new(PI, 15).is_err());
        let g = FdGrid::new(PI, 16).unwrap();
        assert!((g.h - PI / 17.0).abs() < 1e-16);
        assert_eq!(g.refined(PI).unwrap().points, 33);
        let spec = PotentialSpec::new(0.5, 0.0, 1.0, 1, PI).unwrap();
        assert!(fd_spectrum(&spec, 64, 2).is_err());
        assert!(fd_spectrum(&flat(PI), 32, 33).is_err());
    }

    #[test]
    fn matrix_shape() {
        let spec = PotentialSpec::sinusoidal(5.0, 2, PI).unwrap();
        let m = fd_matrix(&spec, 100).unwrap();
        let h = PI / 101.0;
        assert!(m.offdiag().iter().all(|&e| e == -0.5 / (h * h)));
        let x = h * 10.0;
        let v = 0.5 * 4.0 * 5.0 * (2.0 * x).cos();
        assert!((m.diag()[9] - (1.0 / (h * h) + v)).abs() < 1e-9);
    }

    #[test]
    fn flat_well_levels() {
        let e = fd_spectrum(&flat(PI), 4096, 3).unwrap();
        for (n, v) in e.iter().enumerate() {
            let exact = 0.5 * ((n + 1) * (n + 1)) as f64;
            assert!((v - exact).abs() < 5e-6, "{v} vs {exact}");
        }
    }

    #[test]
    fn richardson_flat_well() {
        let e = richardson_pair(&flat(PI), 1024, 1).unwrap();
        assert!((e[0] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn richardson_matches_table1() {
        let spec = PotentialSpec::sinusoidal(5.0, 1, PI).unwrap();
        let e = richardson_pair(&spec, 2048, 1).unwrap();
        assert!((e[0] - 0.5 * TABLE1_E0).abs() < 1e-6);
    }

    #[test]
    fn richardson_reduces_error() {
        for (c, k) in [(5.0, 1), (-3.0, 2), (10.0, 3)] {
            let spec = PotentialSpec::sinusoidal(c, k, 2.0).unwrap();
            let run = richardson_run(&spec, 256, 4).unwrap();
            let finer = fd_spectrum(&spec, 2 * (2 * 256 + 1) + 1, 4).unwrap();
            for (i, reference) in finer.iter().enumerate() {
                let extrapolated_err = (run.extrapolated[i] - reference).abs();
                let coarse_err = (run.coarse[i] - reference).abs();
                assert!(extrapolated_err <= coarse_err);
            }
        }
    }

    #[test]
    fn second_order_convergence() {
        let spec = PotentialSpec::sinusoidal(5.0, 1, PI).unwrap();
        let p = observed_order(&spec, 256, 0).unwrap();
        assert!((p - 2.0).abs() < 0.1, "order {p}");
    }

    #[test]
    fn subset_k1_has_nothing_missing() {
        let r = subset_check(5.0, 1, PI, 20, 5, 2048, 1e-4).unwrap();
        assert!(r.all_matched());
        assert_eq!(r.matched.len(), 5);
        assert!(r.missing.is_empty());

        let r = subset_check(0.0, 1, PI, 20, 4, 2048, 1e-6).unwrap();
        assert!(r.all_matched() && r.missing.is_empty());
    }

    #[test]
    fn subset_k2_leaves_levels_out() {
        let r = subset_check(5.0, 2, PI, 20, 5, 2048, 1e-4).unwrap();
        assert!(r.all_matched());
        assert!(r.missing.len() >= 4, "missing {:?}", r.missing);
    }

    #[test]
    fn sine_projection_is_tridiagonal_and_reproduces_spectrum() {
        for k in [1u32, 2, 3] {
            let spec = PotentialSpec::sinusoidal(5.0, k, PI).unwrap();
            let p = project_onto_sine_modes(&spec, 2048, 20).unwrap();
            assert!(p.max_off_band < 1e-8, "k={k}: {}", p.max_off_band);
            let projected = p.matrix.eigenvalues(5).unwrap();
            let spectral = solve_sinusoidal_well(5.0, k, PI, 20, 5).unwrap().energies();
            for (a, b) in projected.iter().zip(&spectral) {
                // FD discretization error only.
                assert!((a - b).abs() < 1e-3 * b.abs().max(1.0), "k={k}: {a} vs {b}");
            }
        }
    }
}
