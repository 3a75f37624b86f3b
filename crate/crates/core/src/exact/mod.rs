//! Exact-arithmetic engine for the two-arc lens curve.

pub(crate) mod bigz;
pub mod gpoly;
pub mod pilinear;
pub(crate) mod seq;
