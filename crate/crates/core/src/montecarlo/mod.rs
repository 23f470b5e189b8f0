//! Monte Carlo simulation of the typical user.

pub mod association;
pub mod estimate;
pub mod loads;
pub mod scene;

pub use association::{
    associate, sinr_fap, sinr_rrh, Association, Interference, MinDelayState, Policy, PolicyState,
};
pub use estimate::{estimate_metrics, simulate};
pub use loads::{per_bs_loads, BsLoads, SpatialGrid};
pub use scene::{
    draw_request, mark_caches, sample_ppp, sample_ppp_annulus, stream, Node, Polar, Popularity,
    Purpose, Realization, SceneModel,
};
