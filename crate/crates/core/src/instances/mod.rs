//! Instance and solution files, and random instance generation.

mod format;
mod generate;

pub use format::{
    parse_instance, parse_solution, serialize_instance, serialize_solution, InstanceDocument,
    Metadata,
};
pub use generate::{generate_random, RandomSpec, Topology};
