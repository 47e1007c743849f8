//! Positive functionals, supports and GNS representations.

mod functional;
mod model;
mod support;

pub use functional::{iota_star, FunctionalKind, PositiveFunctional};
pub use model::{truncate_degree, FaithfulnessReport, GelfandReport, Gns, ModelKind};
pub use support::SupportDescriptor;
