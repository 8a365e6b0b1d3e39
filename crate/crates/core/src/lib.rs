//! Isoparametric hypersurfaces of OT-FKM type and the submanifolds they
//! contain, with numerical checks of their curvature identities and of the
//! exact mean curvature flow of the focal family.

// `!(x > 0.0)` and friends are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clifford;
pub mod error;
pub mod flow;
pub mod focal;
pub mod geometry;
pub mod numerics;
pub mod polynomial;
pub mod report;
pub mod suite;

pub use clifford::{build_skew_generators, delta_dim, CliffordSystem, SkewGeneratorSet};
pub use error::{Error, Result};
pub use polynomial::FkmPolynomial;
