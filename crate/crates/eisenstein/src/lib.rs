//! Classification of integer polynomials by the Eisenstein criterion and its
//! shift/affine generalizations, with exact density computations and seeded
//! Monte Carlo experiments.
//!
//! A degree-n polynomial f = Σ α_k x^k is *Eisenstein at p* when p ∤ α_n,
//! p | α_k for all k < n, and p² ∤ α_0 (hence irreducible over ℚ). It is
//! *shifted Eisenstein* when some f(x+i) is Eisenstein, and *affine
//! Eisenstein* when some (cx+d)^n f((ax+b)/(cx+d)) is Eisenstein of the same
//! degree. This crate decides all three with explicit witnesses, computes the
//! natural densities of the three classes as certified interval enclosures of
//! the governing Euler products, and reproduces the classic density tables by
//! simulation.
//!
//! Start with the runnable examples:
//!
//! - `classify` — witness reports for hand-picked polynomials
//! - `densities` — enclosures and expected counts for degrees 2 through 6
//! - `simulate` — a seeded Monte Carlo run against the expected counts
//! - `local_census` — exhaustive mod-p² counts vs. the local measure formulas
//! - `affine_action` — the 2x2 matrix action and its coset structure
//!
//! The same functionality is scriptable through the thin `eisenstein` binary
//! (`classify`, `density`, `simulate`, `verify` subcommands).

pub mod density;
pub mod detect;
pub mod error;
pub mod factor;
pub mod oracle;
pub mod poly;
pub mod sim;

pub use density::{density, expected_count, local_measure, DensityInterval, Kind};
pub use detect::{classify, discriminant, Classification, CosetRep};
pub use error::{Error, Result};
pub use factor::{factorize, FactorBudget, FactorResult};
pub use poly::{IntPoly, Matrix2};
pub use sim::{run_experiment, render_table, SimConfig, SimResult, TableFormat, DEFAULT_SEED};
