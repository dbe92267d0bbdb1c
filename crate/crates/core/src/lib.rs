//! Random Leja-type interpolation nodes on compact sets of the complex plane.
//!
//! [`generators::generate`] builds a [`nodes::NodeSequence`] on a
//! [`domain::CompactDomain`]; [`interp`] and [`diagnostics`] measure how good
//! it is; [`cli`] wraps both into file-producing runs.

pub mod cli;
pub mod diagnostics;
pub mod domain;
pub mod error;
pub mod functions;
pub mod generators;
pub mod interp;
pub mod nodes;
pub mod polyeval;
pub mod rng;
