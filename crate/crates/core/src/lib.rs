//! Symbolic dynamics and topological entropy for multimodal interval maps.
//!
//! The crate is organised in four layers:
//!
//! * [`symbolic`]: the alphabet of addresses, the twisted order, compatibility
//!   conditions and admissibility of words against kneading data.
//! * [`families`]: cubic, quadratic, tent and stunted sawtooth maps, the
//!   parameter polytope and itinerary/kneading extraction.
//! * [`entropy`]: entropy from admissible-word counts, from negative periodic
//!   orbits and from Markov transition matrices, plus exact lap counts.
//! * [`scan`]: isentrope rasters over the parameter triangle, bone location on
//!   parameter segments and raster file output.

pub mod entropy;
pub mod error;
pub mod families;
pub mod scan;
pub mod symbolic;

pub use error::{Error, Result};
