//! Weighted traces, Wodzicki residues and Lie-algebra cocycles for banded
//! pseudo-differential operators on the circle, with the loop-group curvature
//! computations built on them.

pub mod asym;
pub mod cocycles;
pub mod compute;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod lie;
pub mod modes;
pub mod parse;
pub mod report;
pub mod suites;
pub mod symbol;
pub mod traces;
pub mod weight;
pub mod zeta;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
pub type CMat = nalgebra::DMatrix<C64>;
pub type CVec = nalgebra::DVector<C64>;
