//! Mirror maps, Bregman divergences and symmetric matrix functions.

pub mod linalg;
pub mod mirror;

pub use linalg::{spd_exp, spd_log, sym_eig, SymEig};
pub use mirror::{MirrorGeometry, Setup};
