//! Entropy, periodic orbits, well-alignedness certificates and conjugacies for
//! closed relations on compact intervals, computed in exact arithmetic over a
//! real quadratic field.

pub mod classify;
pub mod commands;
pub mod conjugacy;
pub mod gallery;
pub mod homeo;
pub mod interval;
pub mod mahavier;
pub mod orbits;
pub mod plot;
pub mod relation;
pub mod scalar;
pub mod wellaligned;

pub use homeo::Homeomorphism;
pub use interval::{AmbientInterval, ClosedInterval};
pub use relation::{Relation, Segment};
pub use scalar::Scalar;
