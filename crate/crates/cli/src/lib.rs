//! Library side of the `hcs-lab` command-line tool.

pub mod commands;
pub mod compute;
pub mod config;
pub mod error;
pub mod figures;
pub mod parse;
pub mod svg;
pub mod table;
