//! Text formats and subcommands behind the `ttm` binary.

pub mod commands;
pub mod parse;
