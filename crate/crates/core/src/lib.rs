//! Exact depth-order cutting of triangle scenes.

pub mod arrangement;
pub mod baselines;
pub mod cutter;
pub mod depth;
pub mod geom;
pub mod num;
pub mod partition;
pub mod poly;
pub mod scenes;
pub mod slices;
