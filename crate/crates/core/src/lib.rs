//! Curvature measures of parallel sets of fractal sets in the line and the
//! plane, and the scaling exponents they define.
//!
//! - [`ifs`]: similarities, iterated function systems, attractor samples.
//! - [`string`]: exact curvature of subsets of the line from their gaps.
//! - [`arcs`]: exact boundary of unions of equal disks and curvature sweeps.
//! - [`exponents`]: direct and average scaling exponents.
//! - [`structure`]: clusters, complement components, flatness, tilings.
//! - [`catalog`]: named constructions with expected values.
//! - [`cli`]: the command-line driver.

pub mod arcs;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod exponents;
pub mod geom;
pub mod ifs;
pub mod string;
pub mod structure;

pub use error::{Error, Result};
pub use geom::{BBox, Point};
pub use ifs::{Ifs, PointSample, Similarity, Word};
