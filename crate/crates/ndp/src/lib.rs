//! File formats, scripts, command line and HTTP session service around
//! [`ndp_core`].

pub mod cli;
pub mod persist;
pub mod script;
pub mod server;
pub mod wire;
