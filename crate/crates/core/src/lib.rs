//! Rational parameter-ray combinatorics of Multibrot sets.

pub mod angle;
pub mod cli;
pub mod error;
pub mod lamination;
pub mod numerics;
pub mod queries;
pub mod render;
pub mod symbolic;

pub use angle::{classify, map_d, periodic_angles, preperiodic_angles, Angle, AngleClass, Degree};
pub use error::{Error, Result};
pub use lamination::{Lamination, Leaf, NodeId};
