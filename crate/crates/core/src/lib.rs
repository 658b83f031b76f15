//! Margin valuation adjustment for interest-rate swap portfolios.
//!
//! The engine simulates a one-factor Hull-White short rate, estimates the
//! expected initial-margin profile with Longstaff-Schwartz Augmented
//! Compression (a whole-portfolio regression trained on shock-augmented
//! states), and integrates the CVA/DVA/FCA/COLVA/MVA adjustment integrals
//! over the simulated profiles. A brute-force full-revaluation engine is
//! provided as an accuracy and performance reference.
//!
//! Module map:
//!
//! - [`market`]: zero curves, relative VAR shocks, shock ingestion and synthesis
//! - [`instruments`]: swap and annuity pricing, randomized test portfolios
//! - [`simulation`]: Hull-White path generation and curve reconstruction
//! - [`lsac`]: basis functions, regression fitting, in-simulation VAR/ES margin
//! - [`xva`]: quadrature of the adjustment integrals
//! - [`oracle`]: brute-force margin profiles and accuracy reports
//! - [`pipeline`]: run configuration, end-to-end runs, benchmarks, diagnostics

pub mod error;
pub mod instruments;
pub mod lsac;
pub mod market;
pub mod oracle;
pub mod pipeline;
pub mod quantile;
pub mod rng;
pub mod simulation;
pub mod xva;

pub use error::{Error, Result};
