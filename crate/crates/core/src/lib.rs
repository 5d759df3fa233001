//! Cycle-approximate simulator of a tile-based GPU graphics pipeline
//! extended for Gaussian-splat volume rendering, paired with an exact
//! per-pixel software oracle.

pub mod compositing;
pub mod error;
pub mod math;
pub mod preprocess;
pub mod raster;
pub mod reference;
pub mod scene;

pub use error::{Error, Result};
