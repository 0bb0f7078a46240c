pub mod certificate;
pub mod error;
pub mod expander_code;
pub mod gf;
pub mod harness;
pub mod linalg;
pub mod linear_code;
pub mod lp_core;
pub mod lp_decoder;
pub mod ml_oracle;
pub mod orientation;
pub mod tanner_graph;

pub use error::{Error, Result};
