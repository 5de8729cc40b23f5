//! Stationary measures of three-state discrete-time quantum walks.
//!
//! A walk on the line (or on a cycle) is driven by a 3×3 unitary coin `A`.
//! Eliminating the staying component `Ψ^O` from the eigenvalue problem
//! `U_A Ψ = λΨ` leaves a 2×2 *reduced matrix* acting on `(Ψ^L, Ψ^R)`. When
//! that matrix is diagonal (Type 1) or anti-diagonal (Type 2) at some
//! unimodular `λ`, the eigenstates can be written down in closed form and
//! their sitewise squared norms are stationary measures of the walk.
//!
//! The crate is split into:
//!
//! - [`coin`]: coin matrices, the built-in Grover/Fourier/Stefanák families,
//!   the row split `A = P + R + Q` and the four 2×2 minors.
//! - [`reduced`]: the reduced matrix and the Type 1 / Type 2 classification.
//! - [`stationary`]: closed-form eigenstates, their measures, the published
//!   closed-form measure formulas and period detection.
//! - [`evolve`]: a brute-force time-evolution oracle used to check every
//!   closed-form claim.
//! - [`export`]: CSV and JSON encodings of measures, states and reports.
//!
//! ```
//! use qwstat_core::{coin, reduced, stationary, evolve, Topology, C64};
//!
//! let a = coin::fourier();
//! let params = reduced::type1_params(&a, reduced::DEFAULT_CONSISTENCY_TOL).unwrap();
//! let w = coin::omega();
//! let state = stationary::type1_state(&a, &params, w, w * w, Topology::Cycle(12)).unwrap();
//! assert!(evolve::eigen_residual(&a, &state, params.lambda) < 1e-12);
//! let mu = stationary::measure_of(&state);
//! assert_eq!(stationary::detect_period(&mu, 6), Some(3));
//! # let _ = C64::new(0.0, 0.0);
//! ```

pub mod chebyshev;
pub mod coin;
pub mod cpx;
pub mod error;
pub mod evolve;
pub mod export;
pub mod reduced;
pub mod stationary;

pub use coin::{CoinFamily, CoinMatrix, Minors, ShiftSplit};
pub use error::{Error, Result};
pub use evolve::{StationarityReport, Topology};
pub use reduced::{ReducedMatrix, ReducedParams, WalkType};
pub use stationary::{Measure, SeedSequence, WaveState};

/// Double-precision complex number used throughout.
pub type C64 = num_complex::Complex64;
