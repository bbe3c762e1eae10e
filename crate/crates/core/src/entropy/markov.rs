//! Markov transition matrices of postcritically finite maps.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::estimate::{EntropyEstimate, Method};
use super::linalg::{determinant, perron_root};
use crate::error::{Error, Result};
use crate::families::{default_tol, IntervalMap};

/// `M_ij = 1` iff the image of `J_i` covers `J_j`, for `J_i = [x_i, x_{i+1}]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovMatrix {
    entries: Vec<Vec<i64>>,
    /// Partition points `x_0 < … < x_n`.
    points: Vec<f64>,
}

impl MarkovMatrix {
    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn perron_root(&self) -> Result<f64> {
        perron_root(&self.entries)
    }
}

impl fmt::Display for MarkovMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Intermediate matrices of the four-step construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourStep {
    pub a: Vec<Vec<i64>>,
    pub a1: Vec<Vec<i64>>,
    pub a2: Vec<Vec<i64>>,
    pub a3: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovReport {
    pub matrix: MarkovMatrix,
    /// Present when the orbit table is a function on the point set.
    pub four_step: Option<FourStep>,
    /// `det A, det A′, det A″, det A‴`, when `A` is a permutation matrix.
    #[serde(serialize_with = "decimal_strings")]
    pub determinants: Option<[BigInt; 4]>,
    pub gamma: f64,
    pub entropy: EntropyEstimate,
}

fn decimal_strings<S: serde::Serializer>(d: &Option<[BigInt; 4]>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Option<Vec<String>> = d.as_ref().map(|d| d.iter().map(BigInt::to_string).collect());
    text.serialize(s)
}

fn four_step(target: &[usize]) -> FourStep {
    let n = target.len();
    let a: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(target[i] == j)).collect())
        .collect();
    let a1: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(j <= target[i])).collect())
        .collect();
    let a2: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            if i == 0 {
                a1[0].clone()
            } else {
                (0..n).map(|j| a1[i][j] - a1[i - 1][j]).collect()
            }
        })
        .collect();
    let a3 = a2[1..].iter().map(|r| r[1..].to_vec()).collect();
    FourStep { a, a1, a2, a3 }
}

/// Covering matrix from the images of partition points under a map that is
/// monotone between consecutive points.
fn direct(target: &[usize]) -> Vec<Vec<i64>> {
    let n = target.len() - 1;
    (0..n)
        .map(|i| {
            let lo = target[i].min(target[i + 1]);
            let hi = target[i].max(target[i + 1]);
            (0..n).map(|j| i64::from(lo <= j && j < hi)).collect()
        })
        .collect()
}

fn is_permutation(target: &[usize]) -> bool {
    let mut seen = vec![false; target.len()];
    target.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
}

fn report(points: Vec<f64>, target: &[usize]) -> Result<MarkovReport> {
    let m = direct(target);
    let steps = four_step(target);
    let abs: Vec<Vec<i64>> = steps.a3.iter().map(|r| r.iter().map(|v| v.abs()).collect()).collect();
    if abs != m {
        return Err(Error::Numeric(format!(
            "four-step matrix {abs:?} disagrees with covering matrix {m:?}"
        )));
    }
    let determinants = is_permutation(target).then(|| {
        [
            determinant(&steps.a),
            determinant(&steps.a1),
            determinant(&steps.a2),
            determinant(&steps.a3),
        ]
    });
    let matrix = MarkovMatrix { entries: m, points };
    let gamma = matrix.perron_root()?;
    let h = if gamma > 1.0 { gamma.ln() } else { 0.0 };
    Ok(MarkovReport {
        entropy: EntropyEstimate::new(Method::Markov, h, h, h, matrix.size()),
        matrix,
        four_step: Some(steps),
        determinants,
        gamma,
    })
}

/// Markov matrix from a closed orbit table `f(x_i) ∈ {x_1 … x_{n+1}}`.
pub fn markov_from_orbit_map(points: &[f64], images: &[f64]) -> Result<MarkovReport> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two partition points".into()));
    }
    if points.len() != images.len() {
        return Err(Error::InvalidArgument(format!(
            "{} points but {} images",
            points.len(),
            images.len()
        )));
    }
    if !points.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("partition points must be strictly increasing".into()));
    }
    let span = points[points.len() - 1] - points[0];
    let tol = 1e-9 * span;
    let target = images
        .iter()
        .map(|&y| {
            points
                .iter()
                .position(|&x| (x - y).abs() <= tol)
                .ok_or_else(|| Error::InvalidArgument(format!("image {y} is not a partition point")))
        })
        .collect::<Result<Vec<usize>>>()?;
    report(points.to_vec(), &target)
}

/// Union of the forward orbits of the folding points, when every one is finite.
pub fn folding_orbits(map: &IntervalMap, max_len: usize) -> Result<Vec<f64>> {
    let tol = default_tol(map).max(1e-11 * map.domain().len());
    let mut pts: Vec<f64> = Vec::new();
    let find = |pts: &[f64], x: f64| pts.iter().position(|&p| (p - x).abs() <= tol);
    for &c in map.folding_points() {
        let mut x = c;
        let mut steps = 0;
        while find(&pts, x).is_none() {
            pts.push(x);
            steps += 1;
            if steps > max_len {
                return Err(Error::Constraint(format!(
                    "orbit of folding point {c} is not finite within {max_len} steps"
                )));
            }
            x = map.eval(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    Ok(pts)
}

/// Markov matrix on the partition cut by the folding orbits of a map.
pub fn markov_from_map(map: &IntervalMap, max_len: usize) -> Result<MarkovReport> {
    let points = folding_orbits(map, max_len)?;
    if points.len() < 2 {
        return Err(Error::Constraint("folding orbits cut out no interval".into()));
    }
    let images: Vec<f64> = points.iter().map(|&x| map.eval(x)).collect();
    markov_from_orbit_map(&points, &images)
}
