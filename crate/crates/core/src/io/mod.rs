//! Reading and writing instance files, and DOT export.

mod dot;
mod json;

pub use dot::to_dot;
pub use json::{
    parse, read_file, serialize, to_value, write_file, Document, IoError, SCHEMA_VERSION,
};
