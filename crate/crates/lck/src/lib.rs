//! DSL front end for the Lie conformal algebra verification kernel: parser,
//! workspace resolution, check execution, canonical emission, and JSON
//! reports.

#![allow(clippy::needless_range_loop)]

pub mod ast;
pub mod emit;
pub mod jsonout;
pub mod lex;
pub mod parse;
pub mod workspace;

pub use emit::emit_object;
pub use parse::parse_file;
pub use workspace::{CheckOutcome, RunOptions, Workspace};
