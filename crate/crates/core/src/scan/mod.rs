//! Parameter-space experiments: entropy rasters over the parameter triangle,
//! bone location on segments and raster file output.

mod bone;
mod emit;
mod raster;

pub use bone::{find_bone_on_segment, Bone, BoneQuery, Capture, Segment};
pub use emit::{csv, emit_raster, gray_level, pgm, Failure, Sidecar};
pub use raster::{band, cell_estimate, scan_isentropes, standard_bands, Band, Cell, Raster, ScanSpec};
