//! Rendering helpers for the `dere` command-line tool.

mod diagram;

pub use diagram::Diagram;
