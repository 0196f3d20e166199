//! Spectral solver for the one-dimensional infinite potential well whose
//! bottom is reshaped into `V(x) = ½Ck²λ² cos(kλx)`, together with the wider
//! trigonometric Pöschl-Teller + cosine family it belongs to.
//!
//! The wave operator is represented in a Jacobi-polynomial basis in which it
//! is symmetric and tridiagonal. For the sinusoidal well the basis collapses to
//! the sine functions of the flat well and the problem reduces to the
//! universal matrix `H = diag((n+1)²) + ½C (shift + shift†)` in the reduced
//! energy `ε = 2E/(k²λ²)`. Eigenvalues come from Sturm bisection, expansion
//! coefficients from the three-term recursion polynomials `Q_n(ε)`, and an
//! independent finite-difference solver acts as the cross-check.
//!
//! Atomic units (`ħ = m = 1`) are used throughout.

pub mod dipole_poly;
pub mod error;
pub mod fd_oracle;
pub mod jacobi_basis;
pub mod model;
pub mod quadrature;
pub mod spectrum;
pub mod tridiag;
pub mod validation;
pub mod wavefunction;

pub use error::{Error, Result};
pub use model::{BasisParams, PotentialSpec, ReducedEnergy};
pub use spectrum::{Level, Spectrum};
pub use tridiag::{EigenPair, SymTridiag};
pub use wavefunction::{CoefficientMethod, EigenstateExpansion, WavefunctionSamples};
