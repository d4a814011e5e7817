//! HTTP session service and batch command line for the inference diff
//! workbench.

pub mod api;
pub mod cli;
pub mod session;

pub use api::router;
pub use session::{Session, SessionError, SessionStore};
