//! Compact 3-packings of the plane: angle-count enumeration, contour
//! intercepts at high precision, exact certification and packing construction.

pub mod angles;
pub mod certify;
pub mod cli;
pub mod contours;
pub mod error;
pub mod gamma_search;
pub mod known;
pub mod packing;
pub mod precision;
pub mod solve;
pub mod symbolic;
pub mod tuples;

pub use error::{Error, Result};
pub use precision::Precision;
