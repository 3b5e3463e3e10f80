//! Scale parameters, explicit bounds and sliver predicates.

mod bounds;
mod params;
mod tet;

pub use bounds::{
    choose_sigma, h0_bound, h1_bound, j_bound, k_bound, n_bound, neighbor_cap, theta_bound, v_bound, Constants,
    SigmaChoice,
};
pub use params::{derive_params, Scale, ThickParams};
pub use tet::{in_sliver_region, is_sliver, SliverRegionSpec, TetQuality};
