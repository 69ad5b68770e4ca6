//! Shared numerical building blocks: quadrature rules and special functions.

pub mod quad;
pub mod special;
