//! Domains, distance to the boundary, convex descriptors and triangulation.

pub mod clip;
mod convex;
mod mesh;
mod polygon;
mod shapes;

pub use convex::{
    convex_descriptors, inner_offset, inner_offset_area, max_admissible_radius, min_enclosing_circle, ConvexDescriptors,
};
pub use mesh::{ladder_mesh, ladder_triangles, refine_red, triangulate, triangulate_with_corners, MeshParams, TriMesh};
pub use polygon::{
    make_l_shape, make_rectangle, make_regular_polygon, make_truncated_triangle, polygon_distance, segment_distance,
    unit_square, Polygon,
};
pub use shapes::{
    make_curvilinear_triangle, make_cusp_domain, make_sector, sector_arc_segments, sector_inscribed_radius, Closure,
    CuspFamily, CuspProfile, Domain, DomainSpec, Layout, SectorSpec, CUSP_SPEC_RESOLUTION,
};
