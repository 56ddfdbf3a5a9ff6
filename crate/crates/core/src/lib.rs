//! Denominator bounds for rational solutions of multivariate linear
//! difference equations with polynomial coefficients.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod equation;
pub mod factored;
pub mod geometry;
pub mod lattice;
mod linalg;
pub mod polyring;
pub mod spread;
pub mod transform;
pub mod verify;
