//! Fixed prompt material and the URLs generated prototypes are told to use.

pub mod endpoints;
pub mod fewshot;
