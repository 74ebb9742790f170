//! Exact computational toolkit for intersecting families of triangles
//! spanned by planar point sets.
//!
//! Everything combinatorial runs on arbitrary-precision rational
//! arithmetic; the only floating-point module is [`mc`], the Monte Carlo
//! estimator for the continuous measure bound.

pub mod bound;
pub mod clique;
pub mod error;
pub mod family;
pub mod geom;
pub mod inductive;
pub mod mc;
pub mod pointset;
pub mod replacement;
pub mod strips;

pub use error::{Error, Result};
pub use family::{Family, Mode, TriangleId};
pub use geom::{Orientation, Point, Rat};
pub use pointset::{AnchorPoint, Kind, PointSet};
