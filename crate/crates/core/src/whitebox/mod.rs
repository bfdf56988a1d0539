//! SDP, LP and zero-sum-game solvers built on the eigenvalue reduction
//! min over ỹ of λmax(C/r_d − Σỹᵢ·Aᵢ) + b̃ᵀỹ, solved by mirror descent.

mod dual;
pub mod io;
mod lp;
mod sdp;
mod zsg;

pub use dual::{DualCertificate, DualSet, FeasibilityReport, QueryMeter};
pub use lp::{lp_objective, solve_lp, LpInstance};
pub use sdp::{check_dual_feasibility, eigen_objective, sdp_eig_objective, solve_sdp_dual, SdpInstance};
pub use zsg::{solve_zsg, solve_zsg_with, ZsgInstance, ZsgSolution};

/// Default absolute tolerance on the certificate's slack.
pub const FEASIBILITY_TOL: f64 = 1e-8;
