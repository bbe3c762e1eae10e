//! Raster output: ASCII PGM image, CSV table and JSON sidecar.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::raster::{standard_bands, Band, Cell, Raster};
use crate::entropy::Method;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::symbolic::Shape;

/// Gray value `round(255·(γ−1)/m)`, clamped to `0..=255`.
pub fn gray_level(gamma: f64, m: usize) -> u8 {
    let g = (255.0 * (gamma - 1.0) / m as f64).round();
    g.clamp(0.0, 255.0) as u8
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub i: usize,
    pub j: usize,
    pub p: [f64; 2],
    pub error: String,
}

/// Metadata written next to a raster. Holds nothing that depends on the
/// worker count or wall-clock time.
#[derive(Clone, Debug, Serialize)]
pub struct Sidecar {
    pub family: Family,
    pub shape: Shape,
    pub resolution: usize,
    pub depth: usize,
    pub method: Method,
    pub in_polytope: usize,
    pub populated: usize,
    pub failed: usize,
    pub gamma_range: Option<[f64; 2]>,
    pub bands: Vec<Band>,
    pub failures: Vec<Failure>,
}

impl Sidecar {
    pub fn of(r: &Raster) -> Self {
        let spec = r.spec();
        let gammas = r.cells().filter_map(|(_, _, c)| c.estimate().map(|e| e.gamma));
        let gamma_range = gammas.fold(None, |acc: Option<[f64; 2]>, g| {
            Some(acc.map_or([g, g], |[lo, hi]| [lo.min(g), hi.max(g)]))
        });
        let failures = r
            .cells()
            .filter_map(|(i, j, c)| match c {
                Cell::Failed { error } => Some(Failure {
                    i,
                    j,
                    p: spec.parameter(i, j),
                    error: error.clone(),
                }),
                _ => None,
            })
            .collect();
        Sidecar {
            family: spec.family,
            shape: spec.shape.clone(),
            resolution: spec.resolution,
            depth: spec.depth,
            method: spec.method,
            in_polytope: r.in_polytope(),
            populated: r.populated(),
            failed: r.failed(),
            gamma_range,
            bands: standard_bands(r),
            failures,
        }
    }
}

/// PGM text. Columns run over `i` (`p_1`), rows over `j` (`p_2`) with `p_2 = 1` on top.
pub fn pgm(r: &Raster) -> String {
    let n = r.resolution();
    let m = r.spec().shape.modality();
    let mut out = format!("P2\n{n} {n}\n255\n");
    for row in 0..n {
        let j = n - 1 - row;
        let line: Vec<String> = (0..n)
            .map(|i| r.cell(i, j).estimate().map_or(0, |e| gray_level(e.gamma, m)).to_string())
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// CSV with one row per populated cell.
pub fn csv(r: &Raster) -> String {
    let mut out = String::from("i,j,p1,p2,h,gamma,lower,upper\n");
    for (i, j, c) in r.cells() {
        if let Some(e) = c.estimate() {
            let [p1, p2] = r.spec().parameter(i, j);
            let _ = writeln!(out, "{i},{j},{p1},{p2},{},{},{},{}", e.value, e.gamma, e.lower, e.upper);
        }
    }
    out
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    let mut s = OsString::from(base.as_os_str());
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Write `basename.pgm`, `basename.csv` and `basename.json`.
pub fn emit_raster(r: &Raster, basename: &Path) -> Result<Vec<PathBuf>> {
    let sidecar = serde_json::to_string_pretty(&Sidecar::of(r))
        .map_err(|e| Error::Numeric(format!("cannot serialise raster metadata: {e}")))?;
    let files = [("pgm", pgm(r)), ("csv", csv(r)), ("json", sidecar + "\n")];
    let mut written = Vec::with_capacity(files.len());
    for (ext, text) in files {
        let path = with_extension(basename, ext);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::EntropyEstimate;
    use crate::scan::raster::raster_from_cells;
    use crate::scan::ScanSpec;

    fn tiny() -> Raster {
        let spec = ScanSpec::new(Family::Cubic, "+-+".parse().unwrap(), 2, 4, Method::Adm, 1).unwrap();
        let e = |g: f64| Cell::Estimate(EntropyEstimate::new(Method::Adm, g.ln(), g.ln(), g.ln(), 4));
        // (0,0) outside, (0,1) γ = 1, (1,0) failed, (1,1) γ = 3
        let cells = vec![Cell::Outside, e(1.0), Cell::Failed { error: "x".into() }, e(3.0)];
        raster_from_cells(spec, cells)
    }

    #[test]
    fn gray_endpoints() {
        assert_eq!(gray_level(3.0, 2), 255);
        assert_eq!(gray_level(1.0, 2), 0);
        assert_eq!(gray_level(0.98, 2), 0);
        assert_eq!(gray_level(3.02, 2), 255);
        assert_eq!(gray_level(2.0, 2), 128);
    }

    #[test]
    fn pgm_layout() {
        assert_eq!(pgm(&tiny()), "P2\n2 2\n255\n0 255\n0 0\n");
    }

    #[test]
    fn csv_skips_empty_cells() {
        let text = csv(&tiny());
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], "i,j,p1,p2,h,gamma,lower,upper");
        assert!(rows[1].starts_with("0,1,0,1,0,1,"));
        assert!(rows[2].starts_with("1,1,1,1,"));
    }

    #[test]
    fn files_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("tiny");
        let files = emit_raster(&tiny(), &base).unwrap();
        assert_eq!(files.len(), 3);
        let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&files[2]).unwrap()).unwrap();
        assert_eq!(meta["populated"], 2);
        assert_eq!(meta["failed"], 1);
        assert_eq!(meta["failures"][0]["error"], "x");
    }

    #[test]
    fn io_errors_name_the_path() {
        let err = emit_raster(&tiny(), Path::new("/nonexistent/dir/r")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/r.pgm"));
    }
}
