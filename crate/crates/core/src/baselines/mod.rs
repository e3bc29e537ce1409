//! Comparison algorithms sharing BSSO's evaluation budget (`n_sol * n_gen`
//! calls, initial population included) and its archive rules.

mod mopso;
mod mosso;
mod nsga2;

pub use mopso::{run_mopso, MopsoParams};
pub use mosso::{run_mosso, sso_branch, sso_update_with, LinearThreshold, MossoParams, SsoBranch, SsoThresholds};
pub use nsga2::{fast_nondominated_sort, nsga_crowding, run_nsga2, NsgaParams};
