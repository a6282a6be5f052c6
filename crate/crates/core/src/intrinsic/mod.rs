//! Star unfoldings, cut loci, antipodes and the intrinsic diameter and
//! radius.

mod cut_locus;
mod radius;
mod source;
mod star;

pub use cut_locus::{cut_locus, CutEdge, CutLocus, CutNode};
pub use radius::{
    antipodes_from_cut_locus, intrinsic_diameter, intrinsic_radius, intrinsic_radius_at, intrinsic_radius_value,
    AntipodeSet, DiameterWitness, RadiusWitness,
};
pub use source::{source_unfold, SourceCell, SourceUnfolding};
pub use star::{star_unfold, StarUnfolding, CUT_TIE_ABS, CUT_TIE_SLACK};
