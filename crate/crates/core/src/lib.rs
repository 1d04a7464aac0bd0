//! Design-matrix exploration and stepwise generation of single-file web
//! prototypes, served over a small HTTP API.

pub mod codegen;
pub mod engine;
pub mod error;
pub mod export;
pub mod gateway;
pub mod markdown;
pub mod matrix;
pub mod project;
pub mod prompts;
pub mod scoping;
pub mod server;
pub mod store;

pub use engine::Engine;
pub use error::{Error, ErrorClass, Result};
pub use project::{Project, ProjectSummary};
