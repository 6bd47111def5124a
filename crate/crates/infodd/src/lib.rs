//! File formats, benchmark harness, HTTP navigator service and command-line
//! front end for [`infodd_core`].

pub mod bench;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod diagram_json;
pub mod error;
pub mod fetch;
pub mod monks;
pub mod report;
pub mod service;
pub mod tabular;

pub use error::{Error, Result};
