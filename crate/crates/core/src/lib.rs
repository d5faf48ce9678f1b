//! Secure degrees-of-freedom regions of the K-user Gaussian MAC wiretap
//! channel and the K-user interference channel with secrecy constraints.
//!
//! The polytope side ([`region`], [`vertex`], [`ops`], [`slice`]) is exact
//! rational arithmetic throughout. [`mac_sim`] is a floating-point Monte
//! Carlo of the cooperative-jamming scheme, and [`dimensions`] builds the
//! asymptotic alignment dimension sets as exponent vectors.

pub mod dimensions;
pub mod error;
pub mod mac_sim;
pub mod ops;
pub mod rational;
pub mod region;
pub mod slice;
pub mod verify;
pub mod vertex;

pub use error::{Error, Result};
pub use rational::{RatMatrix, RatVector, Rational};
pub use region::{build_system, ChannelFamily, ConstraintTag, FamilyKind, HalfspaceSystem};
pub use vertex::{enumerate_extreme_points, ExtremePoint};
