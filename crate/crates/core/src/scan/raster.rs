//! Entropy rasters over the parameter triangle.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{entropy_from_adm, entropy_from_neg, EntropyEstimate, Method};
use crate::error::{Error, Result};
use crate::families::{default_tol, kneading_data_of, make_family_map, Family, ParamVector, RealInterval};
use crate::symbolic::Shape;

/// Kneading symbols extracted beyond the counting depth.
const KNEADING_MARGIN: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub family: Family,
    pub shape: Shape,
    pub resolution: usize,
    pub depth: usize,
    pub method: Method,
    pub workers: usize,
}

impl ScanSpec {
    pub fn new(family: Family, shape: Shape, resolution: usize, depth: usize, method: Method, workers: usize) -> Result<Self> {
        let spec = ScanSpec {
            family,
            shape,
            resolution,
            depth,
            method,
            workers,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.family, Family::Cubic | Family::Sawtooth) {
            return Err(Error::InvalidArgument(format!("{} maps cannot be scanned", self.family)));
        }
        if self.shape.modality() != 2 {
            return Err(Error::InvalidArgument(format!(
                "scans run over the parameter triangle and need a bimodal shape, got {}",
                self.shape
            )));
        }
        if self.resolution < 2 {
            return Err(Error::InvalidArgument(format!("resolution must be at least 2, got {}", self.resolution)));
        }
        if self.depth < 4 {
            return Err(Error::InvalidArgument(format!("depth must be at least 4, got {}", self.depth)));
        }
        if !matches!(self.method, Method::Adm | Method::Neg) {
            return Err(Error::InvalidArgument(format!("scans support adm and neg, not {:?}", self.method)));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Parameter at grid cell `(i, j)`.
    pub fn parameter(&self, i: usize, j: usize) -> [f64; 2] {
        let n = (self.resolution - 1) as f64;
        [i as f64 / n, j as f64 / n]
    }

    /// Whether cell `(i, j)` lies in the parameter triangle `p_1 + p_2 ≥ 1`.
    pub fn in_polytope(&self, i: usize, j: usize) -> bool {
        i + j + 1 >= self.resolution
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Cell {
    Outside,
    Estimate(EntropyEstimate),
    Failed { error: String },
}

impl Cell {
    pub fn estimate(&self) -> Option<&EntropyEstimate> {
        match self {
            Cell::Estimate(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Raster {
    spec: ScanSpec,
    /// Row-major in `i`: cell `(i, j)` sits at `i * resolution + j`.
    cells: Vec<Cell>,
    elapsed: Duration,
}

impl Raster {
    pub fn spec(&self) -> &ScanSpec {
        &self.spec
    }

    pub fn resolution(&self) -> usize {
        self.spec.resolution
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.spec.resolution + j]
    }

    /// Cells with their grid indices, `i` major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &Cell)> {
        let n = self.spec.resolution;
        self.cells.iter().enumerate().map(move |(k, c)| (k / n, k % n, c))
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn populated(&self) -> usize {
        self.cells.iter().filter(|c| matches!(c, Cell::Estimate(_))).count()
    }

    pub fn failed(&self) -> usize {
        self.cells.iter().filter(|c| matches!(c, Cell::Failed { .. })).count()
    }

    pub fn in_polytope(&self) -> usize {
        self.cells.iter().filter(|c| !matches!(c, Cell::Outside)).count()
    }
}

/// Entropy estimate for one parameter of a scanned family.
pub fn cell_estimate(spec: &ScanSpec, p: &[f64]) -> Result<EntropyEstimate> {
    let p = ParamVector::new(p.to_vec())?;
    let map = make_family_map(spec.family, &spec.shape, &p, RealInterval::unit())?;
    let symbols = match spec.method {
        Method::Neg => 4 * spec.depth,
        _ => spec.depth,
    } + KNEADING_MARGIN;
    let k = kneading_data_of(&map, symbols, default_tol(&map))?;
    match spec.method {
        Method::Neg => entropy_from_neg(&k, spec.depth),
        _ => entropy_from_adm(&k, spec.depth),
    }
}

/// Entropy at every grid point of the triangle, computed on a pool of
/// `spec.workers` threads. The result does not depend on the pool size.
pub fn scan_isentropes(spec: ScanSpec) -> Result<Raster> {
    spec.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;
    let n = spec.resolution;
    let cells = pool.install(|| {
        (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                if !spec.in_polytope(i, j) {
                    return Cell::Outside;
                }
                match cell_estimate(&spec, &spec.parameter(i, j)) {
                    Ok(e) => Cell::Estimate(e),
                    Err(e) => Cell::Failed { error: e.to_string() },
                }
            })
            .collect()
    });
    Ok(Raster {
        spec,
        cells,
        elapsed: start.elapsed(),
    })
}

/// Cells whose entropy lies within `tolerance` of `level`, and how many
/// 4-connected pieces they form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Band {
    pub label: String,
    pub level: f64,
    pub tolerance: f64,
    pub cells: usize,
    pub components: usize,
}

pub fn band(r: &Raster, label: &str, level: f64, tolerance: f64) -> Band {
    let n = r.resolution();
    let inside: Vec<bool> = r
        .cells
        .iter()
        .map(|c| c.estimate().is_some_and(|e| (e.value - level).abs() <= tolerance))
        .collect();
    let mut seen = vec![false; n * n];
    let mut components = 0;
    for start in 0..n * n {
        if !inside[start] || seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(k) = stack.pop() {
            let (i, j) = (k / n, k % n);
            let neighbours = [
                (i > 0).then(|| k - n),
                (i + 1 < n).then(|| k + n),
                (j > 0).then(|| k - 1),
                (j + 1 < n).then(|| k + 1),
            ];
            for q in neighbours.into_iter().flatten() {
                if inside[q] && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    Band {
        label: label.to_string(),
        level,
        tolerance,
        cells: inside.iter().filter(|&&b| b).count(),
        components,
    }
}

/// Bands at `log 2` and `log ρ` with tolerance 0.03.
pub fn standard_bands(r: &Raster) -> Vec<Band> {
    let rho = (1.0 + 5f64.sqrt()) / 2.0;
    vec![band(r, "log_rho", rho.ln(), 0.03), band(r, "log_2", 2f64.ln(), 0.03)]
}

#[cfg(test)]
pub(crate) fn raster_from_cells(spec: ScanSpec, cells: Vec<Cell>) -> Raster {
    Raster {
        spec,
        cells,
        elapsed: Duration::ZERO,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, shape: &str, res: usize, depth: usize, workers: usize) -> ScanSpec {
        ScanSpec::new(family, shape.parse().unwrap(), res, depth, Method::Adm, workers).unwrap()
    }

    #[test]
    fn spec_validation() {
        let s: Shape = "+-+".parse().unwrap();
        assert!(ScanSpec::new(Family::Cubic, s.clone(), 1, 8, Method::Adm, 1).is_err());
        assert!(ScanSpec::new(Family::Cubic, s.clone(), 5, 3, Method::Adm, 1).is_err());
        assert!(ScanSpec::new(Family::Tent, "+-".parse().unwrap(), 5, 8, Method::Adm, 1).is_err());
        assert!(ScanSpec::new(Family::Cubic, s.clone(), 5, 8, Method::Markov, 1).is_err());
        assert!(ScanSpec::new(Family::Cubic, s, 5, 8, Method::Adm, 0).is_err());
    }

    #[test]
    fn mask_matches_triangle() {
        let r = scan_isentropes(spec(Family::Sawtooth, "+-+", 5, 6, 2)).unwrap();
        for (i, j, c) in r.cells() {
            let p = r.spec().parameter(i, j);
            let inside = crate::families::in_polytope(&p);
            assert_eq!(!matches!(c, Cell::Outside), inside, "cell ({i}, {j})");
        }
        assert_eq!(r.populated(), 15);
    }

    #[test]
    fn cubic_corners() {
        let s = spec(Family::Cubic, "+-+", 3, 12, 1);
        let top = cell_estimate(&s, &[1.0, 1.0]).unwrap();
        assert!((top.gamma - 3.0).abs() < 0.05, "{top:?}");
        // the monotone corner has 2k + 1 admissible words of length k
        let flat = cell_estimate(&s, &[0.0, 1.0]).unwrap();
        assert!((flat.value - (25.0f64 / 23.0).ln()).abs() < 1e-12, "{flat:?}");
        let s = ScanSpec { method: Method::Neg, ..s };
        assert_eq!(cell_estimate(&s, &[0.0, 1.0]).unwrap().gamma, 1.0);
    }

    #[test]
    fn bands_count_components() {
        let s = spec(Family::Sawtooth, "+-+", 3, 6, 1);
        let e = |h: f64| Cell::Estimate(EntropyEstimate::new(Method::Adm, h, h, h, 6));
        let cells = vec![
            Cell::Outside,
            Cell::Outside,
            e(0.7),
            Cell::Outside,
            e(0.1),
            e(0.7),
            e(0.7),
            e(0.1),
            e(0.7),
        ];
        let r = raster_from_cells(s, cells);
        let b = band(&r, "x", 0.7, 0.01);
        assert_eq!((b.cells, b.components), (4, 2));
    }
}
