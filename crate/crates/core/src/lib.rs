//! Exact-arithmetic toolkit for joints of line and curve arrangements.
//!
//! Everything is computed over the rationals: joint detection, vanishing
//! polynomials, the derivative-annihilation chain, line pruning, joint
//! colorings and the polynomial-curve variant. Every bound is checked as an
//! exact integer inequality.

pub mod coloring;
pub mod curves;
pub mod error;
pub mod generators;
pub mod io;
pub mod geometry;
pub mod lemma;
pub mod linalg;
pub mod poly;
pub mod pruning;
pub mod rational;
pub mod report;
pub mod vanishing;

pub use error::{JointsError, Result};
pub use geometry::{
    brute_force_joints, detect_joints, direction_rank, intersect, Arrangement, DirectionN,
    JointRecord, Line, LineId, PointN,
};
pub use poly::{Monomial, MultiPoly, UniPoly};
pub use rational::Rational;
pub use vanishing::{min_vanishing_degree, vanishing_polynomial};
