//! Small fixed-size vector algebra and dense matrix helpers.

pub mod dense;
pub mod small;
