//! Autodoc engine: parse source files, analyze and repair docstrings,
//! synthesize missing ones, and rewrite files without touching anything
//! outside the docstring slots.

pub mod docstyle;
pub mod source_model;
