//! File formats, video input, experiment drivers and the `qtmt` command
//! line on top of `qtmt-core`.

pub mod cli;
pub mod error;
pub mod mvfi;
pub mod mvfp;
pub mod parity;
pub mod pipeline;
pub mod report;
pub mod video;

pub use error::{Result, ToolError};
