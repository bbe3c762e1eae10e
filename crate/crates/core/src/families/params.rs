//! The parameter polytope `P^m` and its relation to folding values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::Shape;

/// Slack allowed on the polytope inequalities for floating point inputs.
pub const POLYTOPE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct RealInterval {
    a: f64,
    b: f64,
}

impl RealInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("bad interval [{a}, {b}]")));
        }
        Ok(RealInterval { a, b })
    }

    pub fn unit() -> Self {
        RealInterval { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.a, self.b)
    }

    pub fn is_unit(&self) -> bool {
        self.a == 0.0 && self.b == 1.0
    }

    pub fn to_unit(&self, x: f64) -> f64 {
        if self.is_unit() {
            x
        } else {
            (x - self.a) / self.len()
        }
    }

    pub fn from_unit(&self, u: f64) -> f64 {
        if self.is_unit() {
            u
        } else {
            self.a + self.len() * u
        }
    }
}

impl TryFrom<[f64; 2]> for RealInterval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        RealInterval::new(v[0], v[1])
    }
}

impl From<RealInterval> for [f64; 2] {
    fn from(i: RealInterval) -> Self {
        [i.a, i.b]
    }
}

/// A point of `P^m`: `0 ≤ p_i ≤ 1` and `p_i + p_{i+1} ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidArgument("empty parameter vector".into()));
        }
        if !in_polytope(&p) {
            return Err(Error::Constraint(format!("{p:?} is outside the parameter polytope")));
        }
        Ok(ParamVector(p))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn modality(&self) -> usize {
        self.0.len()
    }

    /// Relative image lengths `Δ_0 … Δ_m` of the laps.
    pub fn relative_lengths(&self) -> Vec<f64> {
        let p = &self.0;
        let m = p.len();
        let mut d = Vec::with_capacity(m + 1);
        d.push(p[0]);
        for j in 1..m {
            d.push(p[j - 1] + p[j] - 1.0);
        }
        d.push(p[m - 1]);
        d
    }
}

impl TryFrom<Vec<f64>> for ParamVector {
    type Error = Error;

    fn try_from(p: Vec<f64>) -> Result<Self> {
        ParamVector::new(p)
    }
}

impl From<ParamVector> for Vec<f64> {
    fn from(p: ParamVector) -> Self {
        p.0
    }
}

/// Membership in `P^m`, with [`POLYTOPE_TOL`] slack.
pub fn in_polytope(p: &[f64]) -> bool {
    p.iter()
        .all(|&x| x.is_finite() && (-POLYTOPE_TOL..=1.0 + POLYTOPE_TOL).contains(&x))
        && p.windows(2).all(|w| w[0] + w[1] >= 1.0 - POLYTOPE_TOL)
}

/// Folding values `v_1 … v_m` of a map of the given shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueVector {
    v: Vec<f64>,
    shape: Shape,
}

impl CriticalValueVector {
    /// Checks the weak ordering `σ_i (v_{i+1} − v_i) ≥ 0`.
    pub fn new(v: Vec<f64>, shape: Shape) -> Result<Self> {
        if v.len() != shape.modality() {
            return Err(Error::InvalidArgument(format!(
                "shape {shape} needs {} folding values, got {}",
                shape.modality(),
                v.len()
            )));
        }
        let scale = v.iter().fold(1.0f64, |s, x| s.max(x.abs()));
        for i in 1..v.len() {
            let step = f64::from(shape.sigma(i)) * (v[i] - v[i - 1]);
            if !(step >= -POLYTOPE_TOL * scale) {
                return Err(Error::Constraint(format!(
                    "folding values {v:?} violate the ordering for shape {shape} at {i}"
                )));
            }
        }
        Ok(CriticalValueVector { v, shape })
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// `v_0` and `v_{m+1}`: the boundary values forced by anchoring.
    pub fn anchored_ends(&self, domain: RealInterval) -> (f64, f64) {
        anchored_ends(&self.shape, domain)
    }

    /// Strict ordering including the anchored ends.
    pub fn is_strict(&self, domain: RealInterval) -> bool {
        let (v0, vend) = self.anchored_ends(domain);
        let mut ext = vec![v0];
        ext.extend_from_slice(&self.v);
        ext.push(vend);
        ext.windows(2)
            .enumerate()
            .all(|(i, w)| f64::from(self.shape.sigma(i)) * (w[1] - w[0]) > 0.0)
    }

    /// Weak ordering including the anchored ends, and values inside the domain.
    pub fn is_anchored_compatible(&self, domain: RealInterval) -> bool {
        let (v0, vend) = self.anchored_ends(domain);
        let mut ext = vec![v0];
        ext.extend_from_slice(&self.v);
        ext.push(vend);
        let tol = POLYTOPE_TOL * domain.len();
        ext.windows(2)
            .enumerate()
            .all(|(i, w)| f64::from(self.shape.sigma(i)) * (w[1] - w[0]) >= -tol)
    }
}

/// `(f(a), f(b))` for a boundary-anchored map of this shape.
pub fn anchored_ends(shape: &Shape, domain: RealInterval) -> (f64, f64) {
    let m = shape.modality();
    let fa = if shape.sigma(0) == 1 { domain.a() } else { domain.b() };
    let fb = if shape.sigma(m) == 1 { domain.b() } else { domain.a() };
    (fa, fb)
}

/// Parameters from folding values: each `p_i` measures how far `v_i` reaches
/// in the folding direction.
pub fn p_from_v(v: &CriticalValueVector, domain: RealInterval) -> Result<ParamVector> {
    let shape = v.shape();
    let p: Vec<f64> = v
        .values()
        .iter()
        .enumerate()
        .map(|(k, &vi)| {
            let rel = (vi - domain.a()) / domain.len();
            if shape.is_local_max(k + 1) {
                rel
            } else {
                1.0 - rel
            }
        })
        .collect();
    if !v.values().iter().all(|&x| {
        let t = POLYTOPE_TOL * domain.len();
        x >= domain.a() - t && x <= domain.b() + t
    }) {
        return Err(Error::Constraint(format!(
            "folding values {:?} leave the domain",
            v.values()
        )));
    }
    ParamVector::new(p.into_iter().map(|x| x.clamp(0.0, 1.0)).collect())
}

/// Inverse of [`p_from_v`].
pub fn v_from_p(p: &ParamVector, shape: &Shape, domain: RealInterval) -> Result<CriticalValueVector> {
    if p.modality() != shape.modality() {
        return Err(Error::InvalidArgument(format!(
            "shape {shape} needs {} parameters, got {}",
            shape.modality(),
            p.modality()
        )));
    }
    let v = p
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &pi)| {
            let pi = pi.clamp(0.0, 1.0);
            if shape.is_local_max(k + 1) {
                domain.from_unit(pi)
            } else {
                domain.from_unit(1.0 - pi)
            }
        })
        .collect();
    CriticalValueVector::new(v, shape.clone())
}

/// Vertices of `P^m`: 0/1 vectors without two consecutive zeros, in lexicographic order.
pub fn polytope_vertices(m: usize) -> Result<Vec<ParamVector>> {
    if m == 0 {
        return Err(Error::InvalidArgument("modality must be at least 1".into()));
    }
    if m > 30 {
        return Err(Error::Resource(format!("2^{m} candidate vertices")));
    }
    let mut out = Vec::new();
    for bits in 0u64..(1 << m) {
        // most significant bit first gives lexicographic order
        let p: Vec<f64> = (0..m)
            .map(|i| ((bits >> (m - 1 - i)) & 1) as f64)
            .collect();
        if p.windows(2).all(|w| w[0] + w[1] >= 1.0) {
            out.push(ParamVector(p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> Shape {
        s.parse().unwrap()
    }

    fn cv(v: &[f64], s: &str) -> CriticalValueVector {
        CriticalValueVector::new(v.to_vec(), shape(s)).unwrap()
    }

    #[test]
    fn p_from_v_examples() {
        let u = RealInterval::unit();
        assert_eq!(p_from_v(&cv(&[1.0, 0.0], "+-+"), u).unwrap().as_slice(), &[1.0, 1.0]);
        assert_eq!(p_from_v(&cv(&[0.6, 0.4], "+-+"), u).unwrap().as_slice(), &[0.6, 0.6]);
        let p = p_from_v(&cv(&[0.3, 0.9], "-+-"), u).unwrap();
        assert!((p.as_slice()[0] - 0.7).abs() < 1e-15);
        assert_eq!(p.as_slice()[1], 0.9);
    }

    #[test]
    fn v_from_p_examples() {
        let u = RealInterval::unit();
        let p = ParamVector::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(v_from_p(&p, &shape("+-+"), u).unwrap().values(), &[1.0, 0.0]);
        let p = ParamVector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(v_from_p(&p, &shape("+-+"), u).unwrap().values(), &[0.0, 0.0]);
    }

    #[test]
    fn eq2_violation_is_constraint_error() {
        let e = CriticalValueVector::new(vec![0.2, 0.8], shape("+-+")).unwrap_err();
        assert!(matches!(e, Error::Constraint(_)));
        let e = ParamVector::new(vec![0.2, 0.3]).unwrap_err();
        assert!(matches!(e, Error::Constraint(_)));
        assert!(ParamVector::new(vec![1.2]).is_err());
    }

    #[test]
    fn vertices_counts() {
        let v1 = polytope_vertices(1).unwrap();
        assert_eq!(v1.len(), 2);
        let v2: Vec<Vec<f64>> = polytope_vertices(2)
            .unwrap()
            .into_iter()
            .map(Vec::from)
            .collect();
        assert_eq!(v2, vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        let v3: Vec<Vec<f64>> = polytope_vertices(3)
            .unwrap()
            .into_iter()
            .map(Vec::from)
            .collect();
        assert_eq!(
            v3,
            vec![
                vec![0.0, 1.0, 0.0],
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
                vec![1.0, 1.0, 1.0]
            ]
        );
        assert_eq!(polytope_vertices(4).unwrap().len(), 8);
        assert!(polytope_vertices(0).is_err());
    }

    #[test]
    fn relative_lengths() {
        let p = ParamVector::new(vec![0.6, 0.7]).unwrap();
        let d = p.relative_lengths();
        assert_eq!(d.len(), 3);
        assert!((d[1] - 0.3).abs() < 1e-15);
        assert_eq!(d[0], 0.6);
        assert_eq!(d[2], 0.7);
    }

    #[test]
    fn strict_and_anchored_predicates() {
        let u = RealInterval::unit();
        assert!(cv(&[0.9, 0.1], "+-+").is_strict(u));
        assert!(!cv(&[0.0, 0.0], "+-+").is_strict(u));
        assert!(cv(&[0.0, 0.0], "+-+").is_anchored_compatible(u));
    }
}
