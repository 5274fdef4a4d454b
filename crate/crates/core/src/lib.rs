//! Monochromatic crossings of k-edge-colored straight-line drawings of `K_n`,
//! the doubling construction and certified upper bounds on the k-colored
//! crossing constant.

pub mod asymptotics;
pub mod coloring;
pub mod commands;
pub mod doubling;
pub mod error;
pub mod geom;
pub mod instance;
pub mod matchopt;
pub mod report;

pub use error::{Error, Result};
