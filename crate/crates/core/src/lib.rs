//! Thick geodesic Delaunay meshes of point sets in hyperbolic 3-space.
//!
//! The pipeline samples a maximal `eps`-separated set in a hyperbolic ball,
//! triangulates it with an empty-circumsphere guarantee, and perturbs each
//! vertex once inside its `delta`-ball so that no tetrahedron near it is a
//! sliver. The explicit bounds that make the perturbation feasible live in
//! [`quality`]; [`audit`] checks them against randomized geometry.

// Negated comparisons below are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod delaunay;
pub mod desliver;
pub mod error;
pub mod hyperbolic;
pub mod quality;
pub mod report;
pub mod tolerance;

pub use error::{Error, Result};
