//! Exact rational polyhedral kernel: feasibility, vertices, faces, tangent
//! cones and Euler characteristics of finite unions of convex polytopes.

mod dd;
pub mod faces;
pub mod lp;
mod polytope;
mod union;

pub use faces::{Face, FaceLattice, Volume};
pub use polytope::{ConvexPolytope, Halfspace};
pub use union::{
    box_around, cone_in_box, euler, euler_with_halfspace, ie_cap, nerve, nerve_euler, tangent_cone, NerveCell,
    PolyCone, PolyUnion, DEFAULT_IE_CAP,
};

/// Feasibility of a convex polytope, decided exactly.
pub fn feasible(p: &ConvexPolytope) -> bool {
    p.feasible()
}

/// Exact vertex list of a bounded nonempty polytope.
pub fn vertices(p: &ConvexPolytope) -> crate::Result<Vec<Vec<crate::Rat>>> {
    p.vertices().map(<[_]>::to_vec)
}
