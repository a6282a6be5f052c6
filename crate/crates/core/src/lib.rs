//! Intrinsic and extrinsic diameters and radii of tetrahedron surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] holds the tetrahedron model, surface addressing, planar
//!   unfolding and triangle predicates.
//! * [`geodesic`] computes exact shortest paths on the surface by
//!   branch-and-bound over unfolded face sequences, plus a graph oracle.
//! * [`intrinsic`] builds star unfoldings, cut loci and source unfoldings,
//!   and derives the intrinsic diameter and radius.
//! * [`extrinsic`] computes the chord-distance diameter and radius.
//! * [`generators`] constructs the special families (regular, isosceles,
//!   ε-thick) and seeded random instances.
//! * [`report`], [`campaign`] and [`svg`] are the verification front end used
//!   by the `tetra` binary.

pub mod campaign;
pub mod config;
pub mod error;
pub mod extrinsic;
pub mod generators;
pub mod geodesic;
pub mod geometry;
pub mod intrinsic;
pub mod json;
pub mod optimize;
pub mod report;
pub mod svg;

pub use config::{Config, ToleranceConfig};
pub use error::{Result, TetraError};
pub use geometry::{SurfacePoint, Tetrahedron, Vec2, Vec3};
