//! Documentation-consistency engine for labeled, hierarchical code comments.
//!
//! Comments tagged `CS1:`, `AS2.1:` and so on are extracted from source,
//! organized per file into a forest keyed by their dotted numbering, linked
//! to the code they describe, and tracked across edits. A pluggable HTTP
//! backend can be asked whether a comment and its code agree.

pub mod checker;
pub mod config;
pub mod corpus;
pub mod error;
mod hash;
pub mod lexer;
pub mod linker;
pub mod model;
pub mod parser;
pub mod select;
pub mod structure;
pub mod tracker;

pub use config::{Config, PatternConfig, SyntaxProfile};
pub use error::{Error, Result};
