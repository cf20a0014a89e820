pub mod config;
pub mod designers;
pub mod domains;
pub mod duality;
pub mod error;
pub mod io;
pub mod poly;
pub mod roots;
pub mod schur;
pub mod simulator;

pub use config::Config;
pub use duality::{build_chi, build_duality, in_stability_domain, omission_test, AveragingSet};
pub use error::{Error, Result};
pub use poly::Poly;
pub use schur::{schur_test, SchurVerdict};
