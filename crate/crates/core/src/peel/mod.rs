//! Bottom-up decomposition: peel vertices level by level.

mod bz;
mod gpp;
mod peel_one;
mod pp_dyn;

pub use bz::bz_serial;
pub(crate) use bz::bz_serial_traced;
pub use gpp::gpp;
pub use peel_one::{peel_one, peel_one_dynamic};
pub use pp_dyn::pp_dynamic;
