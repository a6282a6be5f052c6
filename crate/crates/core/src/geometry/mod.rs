//! Tetrahedron model, surface addressing and planar unfolding.

pub mod planar;
pub mod point;
pub mod tetrahedron;
pub mod vec;

pub use planar::{
    circumcenter, longest_side, triangle_is_acute, unfold_faces, FacePlacement, Isometry2, Triangle2,
    UnfoldedStrip,
};
pub use point::SurfacePoint;
pub use tetrahedron::{
    face_angle_sum, is_isosceles, total_angle_defect, validate_tetrahedron, Tetrahedron, EDGES, FACES,
    OPPOSITE_EDGES,
};
pub use vec::{Vec2, Vec3};
