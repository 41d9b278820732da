pub mod cli;
pub mod clique;
pub mod config;
pub mod error;
pub mod form;
pub mod orthoset;
pub mod report;
pub mod ring;
pub mod vector;

pub use error::{Error, Result};
