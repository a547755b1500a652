//! Frank-Wolfe and Jacobi-accelerated Frank-Wolfe over norm balls.

pub mod cli;
pub mod data;
pub mod error;
pub mod linalg;
pub mod objectives;
pub mod oracles;
pub mod point;
pub mod polynomials;
pub mod solvers;

pub use error::{Error, Result};
pub use point::{Point, Shape};
