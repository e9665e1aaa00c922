//! Point interactions on two-dimensional manifolds.
//!
//! A finite set of delta-type impurities on the flat plane or a hyperbolic
//! plane is described through its principal operator `Phi(nu)`, an `N x N`
//! symmetric matrix whose lowest zero in `nu` locates the ground-state
//! energy `E_gr = -nu_gr^2`. The crate assembles `Phi`, locates bound
//! states, and produces a-priori lower bounds on `E_gr` that hold for every
//! configuration with a given minimal separation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kernels;
pub mod principal;
pub mod special;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{Center, Configuration, GenericBounds, ManifoldModel, Point};
pub use units::PhysicalConstants;
