//! Signed graph divides presented as tangle products.
//!
//! A divide is drawn in the plane as a left-to-right product of tangles
//! (endpoints, folds, signed branch vertices, double points). This crate
//! validates such products, recovers the underlying graph, doubles the
//! divide into an oriented curve system, resolves it into a link diagram,
//! and computes invariants: the Thurston-Bennequin number by three
//! independent routes, slice Euler characteristic and 4-genus, PD and
//! Gauss codes, the Kauffman bracket and Jones polynomial, and a
//! Dehn-surgery tightness report.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `graphdivide` binary for the command-line interface.

pub mod diagram;
pub mod doubling;
pub mod dsl;
pub mod fuzz;
pub mod geom;
pub mod invariants;
pub mod poly;
pub mod render;
pub mod braid;
pub mod tangle;
pub mod templates;

pub use dsl::{emit, parse};
pub use tangle::{validate_product, Sign, TangleKind, TangleProduct};
