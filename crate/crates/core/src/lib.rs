//! Ricci pinching `F = scal^2 / |Ric|^2` of left-invariant metrics on
//! solvable Lie groups.
//!
//! - [`lie`]: general brackets given by structure constants.
//! - [`almost_abelian`]: closed forms for brackets `mu_A`.
//! - [`flow`], [`beta`], [`table1`]: orbit flows, nilsolitons and the
//!   beta-operator bounds.

// `!(x > 0.0)` is how NaN gets rejected along with the rest
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod almost_abelian;
pub mod batch;
pub mod beta;
pub mod error;
pub mod flow;
pub mod lie;
pub mod linalg;
pub mod table1;

pub use almost_abelian::AAData;
pub use beta::BetaType;
pub use error::{Error, Result};
pub use flow::{FlowConfig, FlowResult};
pub use lie::{CurvatureData, DerivationSpace, MetricLieAlgebra};
