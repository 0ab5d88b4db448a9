//! From-scratch tabular credit-score classification toolkit.
//!
//! The pipeline runs end to end on raw CSV: cleaning ([`tabular`]), z-score
//! and IQR row filters plus balancing transforms ([`preprocess`]), SMOTE-ENN
//! resampling ([`resample`]), tree-ensemble and baseline learners
//! ([`learners`]), stacked generalization ([`stacking`]) and multiclass
//! evaluation metrics with comparison tables ([`metrics`]). Everything is
//! deterministic given a master seed; parallel and serial runs produce
//! identical bytes.

pub mod error;
pub mod learners;
pub mod metrics;
pub mod preprocess;
pub mod resample;
pub mod seeding;
pub mod stacking;
pub mod synth;
pub mod tabular;

pub use error::{Error, Result};
