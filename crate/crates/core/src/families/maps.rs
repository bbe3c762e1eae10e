//! Evaluable boundary-anchored maps.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cubic::{unit_cubic, UnitCubic};
use super::exact::{clamp_between, rational_from_f64, to_f64, Rational};
use super::params::{anchored_ends, v_from_p, CriticalValueVector, ParamVector, RealInterval};
use crate::error::{Error, Result};
use crate::symbolic::Shape;

const CUBIC_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cubic,
    Quadratic,
    Tent,
    #[serde(alias = "stunted_sawtooth")]
    Sawtooth,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cubic" => Ok(Family::Cubic),
            "quadratic" => Ok(Family::Quadratic),
            "tent" => Ok(Family::Tent),
            "sawtooth" | "stunted_sawtooth" => Ok(Family::Sawtooth),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Cubic => "cubic",
            Family::Quadratic => "quadratic",
            Family::Tent => "tent",
            Family::Sawtooth => "sawtooth",
        };
        f.write_str(s)
    }
}

/// Public description of a map's defining data.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum MapVariant {
    /// Coefficients in descending degree, in domain coordinates.
    Cubic { coefficients: [f64; 4] },
    Quadratic { v: f64 },
    Tent { v: f64 },
    /// Plateau heights `v_1 … v_m` on the unit interval.
    StuntedSawtooth { heights: Vec<f64> },
}

#[derive(Clone, Debug)]
enum Kind {
    Cubic(UnitCubic),
    Quadratic(f64),
    Tent(f64),
    Sawtooth(Sawtooth),
}

/// Piecewise-linear sawtooth of slope ±(m+1), clamped on each lap between the
/// neighbouring plateau levels. Levels include the anchored ends.
#[derive(Clone, Debug)]
pub(crate) struct Sawtooth {
    signs: Vec<i8>,
    levels: Vec<Rational>,
    levels_f: Vec<f64>,
}

impl Sawtooth {
    fn new(shape: &Shape, heights: &[Rational]) -> Self {
        let m = shape.modality();
        let zero = Rational::zero();
        let one = Rational::one();
        let mut levels = Vec::with_capacity(m + 2);
        levels.push(if shape.sigma(0) == 1 { zero.clone() } else { one.clone() });
        levels.extend(heights.iter().cloned());
        levels.push(if shape.sigma(m) == 1 { one } else { zero });
        let levels_f = levels.iter().map(to_f64).collect();
        Sawtooth {
            signs: shape.signs().to_vec(),
            levels,
            levels_f,
        }
    }

    fn laps(&self) -> usize {
        self.signs.len()
    }

    pub fn eval(&self, u: f64) -> f64 {
        let n = self.laps();
        let s = u * n as f64;
        let lap = (s.floor().max(0.0) as usize).min(n - 1);
        let t = s - lap as f64;
        let base = if self.signs[lap] == 1 { t } else { 1.0 - t };
        let (p, q) = (self.levels_f[lap], self.levels_f[lap + 1]);
        base.clamp(p.min(q), p.max(q))
    }

    pub fn eval_exact(&self, u: &Rational) -> Rational {
        let n = self.laps();
        let s = u * Rational::from_integer(n as i128);
        let lap = s.floor().to_integer().clamp(0, n as i128 - 1) as usize;
        let t = s - Rational::from_integer(lap as i128);
        let base = if self.signs[lap] == 1 { t } else { Rational::one() - t };
        clamp_between(base, &self.levels[lap], &self.levels[lap + 1])
    }

    /// Designated folding points `j/(m+1)`.
    pub fn folds_exact(&self) -> Vec<Rational> {
        let n = self.laps() as i128;
        (1..n).map(|j| Ratio::new(j, n)).collect()
    }

    /// Plateau `[lo, hi]` around fold `j` (1-based) on the unit interval.
    pub fn plateau(&self, j: usize) -> (f64, f64) {
        let n = self.laps() as f64;
        let level = self.levels_f[j];
        let hit = |lap: usize| if self.signs[lap] == 1 { level } else { 1.0 - level };
        (((j - 1) as f64 + hit(j - 1)) / n, (j as f64 + hit(j)) / n)
    }

    pub fn heights_exact(&self) -> &[Rational] {
        &self.levels[1..self.levels.len() - 1]
    }

    /// Linear pieces `(x0, x1, y0, y1)` on the unit interval, left to right.
    pub fn pieces(&self) -> Vec<[f64; 4]> {
        let n = self.laps();
        let w = 1.0 / n as f64;
        let mut out = Vec::new();
        for lap in 0..n {
            let x0 = lap as f64 * w;
            let x1 = (lap + 1) as f64 * w;
            let (p, q) = (self.levels_f[lap], self.levels_f[lap + 1]);
            let (lo, hi) = (p.min(q), p.max(q));
            let cuts = if self.signs[lap] == 1 {
                let (a, b) = (x0 + lo * w, x0 + hi * w);
                [(x0, a, lo, lo), (a, b, lo, hi), (b, x1, hi, hi)]
            } else {
                let (a, b) = (x0 + (1.0 - hi) * w, x0 + (1.0 - lo) * w);
                [(x0, a, hi, hi), (a, b, hi, lo), (b, x1, lo, lo)]
            };
            for (xa, xb, ya, yb) in cuts {
                if xb > xa {
                    out.push([xa, xb, ya, yb]);
                }
            }
        }
        out
    }
}

/// A boundary-anchored map with designated folding points.
#[derive(Clone, Debug)]
pub struct IntervalMap {
    family: Family,
    kind: Kind,
    domain: RealInterval,
    shape: Shape,
    folds: Vec<f64>,
    values: Vec<f64>,
    ends: (f64, f64),
}

impl IntervalMap {
    fn assemble(family: Family, kind: Kind, shape: Shape, domain: RealInterval, unit_folds: Vec<f64>, unit_values: Vec<f64>) -> Self {
        let ends = anchored_ends(&shape, domain);
        IntervalMap {
            family,
            kind,
            domain,
            folds: unit_folds.iter().map(|&u| domain.from_unit(u)).collect(),
            values: unit_values.iter().map(|&u| domain.from_unit(u)).collect(),
            shape,
            ends,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn domain(&self) -> RealInterval {
        self.domain
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn modality(&self) -> usize {
        self.shape.modality()
    }

    /// `c_1 … c_m` in domain units.
    pub fn folding_points(&self) -> &[f64] {
        &self.folds
    }

    /// `v_j = f(c_j)` in domain units, as prescribed at construction.
    pub fn folding_values(&self) -> &[f64] {
        &self.values
    }

    pub fn variant(&self) -> MapVariant {
        match &self.kind {
            Kind::Cubic(c) => MapVariant::Cubic {
                coefficients: domain_coefficients(c, self.domain),
            },
            Kind::Quadratic(v) => MapVariant::Quadratic { v: *v },
            Kind::Tent(v) => MapVariant::Tent { v: *v },
            Kind::Sawtooth(s) => MapVariant::StuntedSawtooth {
                heights: s.heights_exact().iter().map(to_f64).collect(),
            },
        }
    }

    /// Descending coefficients in domain coordinates, for cubic maps.
    pub fn cubic_coefficients(&self) -> Option<[f64; 4]> {
        match &self.kind {
            Kind::Cubic(c) => Some(domain_coefficients(c, self.domain)),
            _ => None,
        }
    }

    /// Absolute slope of a tent map.
    pub fn tent_slope(&self) -> Option<f64> {
        match self.kind {
            Kind::Tent(v) => Some(2.0 * v),
            _ => None,
        }
    }

    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self.kind, Kind::Tent(_) | Kind::Sawtooth(_))
    }

    /// Interval around folding point `c_j` (1-based) on which the map is
    /// constant, in domain units. Only stunted sawtooth maps have plateaus.
    pub fn plateau(&self, j: usize) -> Option<(f64, f64)> {
        let s = self.sawtooth()?;
        if j == 0 || j > self.modality() {
            return None;
        }
        let (lo, hi) = s.plateau(j);
        Some((self.domain.from_unit(lo), self.domain.from_unit(hi)))
    }

    pub(crate) fn sawtooth(&self) -> Option<&Sawtooth> {
        match &self.kind {
            Kind::Sawtooth(s) => Some(s),
            _ => None,
        }
    }

    /// Linear pieces `(x0, x1, y0, y1)` in unit coordinates for piecewise-linear maps.
    pub fn linear_pieces(&self) -> Option<Vec<[f64; 4]>> {
        match &self.kind {
            Kind::Tent(v) => Some(vec![[0.0, 0.5, 0.0, *v], [0.5, 1.0, *v, 0.0]]),
            Kind::Sawtooth(s) => Some(s.pieces()),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = (self.domain.a(), self.domain.b());
        if x <= a {
            return self.ends.0;
        }
        if x >= b {
            return self.ends.1;
        }
        let y = self.eval_unit(self.domain.to_unit(x));
        self.domain.from_unit(y.clamp(0.0, 1.0))
    }

    pub(crate) fn eval_unit(&self, u: f64) -> f64 {
        match &self.kind {
            Kind::Cubic(c) => c.eval(u),
            Kind::Quadratic(v) => 4.0 * v * u * (1.0 - u),
            Kind::Tent(v) => 2.0 * v * u.min(1.0 - u),
            Kind::Sawtooth(s) => s.eval(u),
        }
    }

    pub fn iterate(&self, x: f64, n: usize) -> f64 {
        (0..n).fold(x, |y, _| self.eval(y))
    }
}

/// Expand `a + L·g((x − a)/L)` into descending coefficients.
fn domain_coefficients(c: &UnitCubic, domain: RealInterval) -> [f64; 4] {
    let g = c.coefficients;
    if domain.is_unit() {
        return [g[3], g[2], g[1], g[0]];
    }
    let (a, len) = (domain.a(), domain.len());
    let s = 1.0 / len;
    let t = -a / len;
    // powers of (s x + t) in ascending coefficients
    let p1 = [t, s, 0.0, 0.0];
    let p2 = [t * t, 2.0 * s * t, s * s, 0.0];
    let p3 = [t * t * t, 3.0 * s * t * t, 3.0 * s * s * t, s * s * s];
    let mut asc = [0.0; 4];
    for k in 0..4 {
        asc[k] = len * (g[1] * p1[k] + g[2] * p2[k] + g[3] * p3[k]);
    }
    asc[0] += a + len * g[0];
    [asc[3], asc[2], asc[1], asc[0]]
}

/// The unique boundary-anchored cubic with the given critical values.
pub fn cubic_from_critical_values(shape: &Shape, v: &CriticalValueVector, domain: RealInterval) -> Result<IntervalMap> {
    if shape.modality() != 2 {
        return Err(Error::InvalidArgument(format!("cubic maps need a bimodal shape, got {shape}")));
    }
    if v.shape() != shape {
        return Err(Error::InvalidArgument(format!(
            "critical values carry shape {}, expected {shape}",
            v.shape()
        )));
    }
    if !v.is_anchored_compatible(domain) {
        return Err(Error::Constraint(format!(
            "critical values {:?} leave the domain [{}, {}]",
            v.values(),
            domain.a(),
            domain.b()
        )));
    }
    let u: Vec<f64> = v
        .values()
        .iter()
        .map(|&x| domain.to_unit(x).clamp(0.0, 1.0))
        .collect();
    let cubic = unit_cubic(shape.sigma(0) == 1, u[0], u[1])?;
    let (e0, e1) = anchored_ends(shape, RealInterval::unit());
    let residuals = [
        cubic.eval(cubic.critical_points[0]) - u[0],
        cubic.eval(cubic.critical_points[1]) - u[1],
        cubic.eval(0.0) - e0,
        cubic.eval(1.0) - e1,
    ];
    if residuals.iter().any(|r| !(r.abs() <= CUBIC_RESIDUAL)) {
        return Err(Error::Numeric(format!(
            "cubic solve for critical values {u:?} left residuals {residuals:?}"
        )));
    }
    let folds = cubic.critical_points.to_vec();
    Ok(IntervalMap::assemble(Family::Cubic, Kind::Cubic(cubic), shape.clone(), domain, folds, u))
}

fn require_unimodal_plus(family: Family, shape: &Shape) -> Result<()> {
    if shape.modality() != 1 || shape.sigma(0) != 1 {
        return Err(Error::InvalidArgument(format!(
            "{family} maps need shape +-, got {shape}"
        )));
    }
    Ok(())
}

/// Build a member of one of the families from its polytope parameters.
pub fn make_family_map(family: Family, shape: &Shape, p: &ParamVector, domain: RealInterval) -> Result<IntervalMap> {
    if p.modality() != shape.modality() {
        return Err(Error::InvalidArgument(format!(
            "shape {shape} needs {} parameters, got {}",
            shape.modality(),
            p.modality()
        )));
    }
    match family {
        Family::Cubic => {
            let v = v_from_p(p, shape, domain)?;
            cubic_from_critical_values(shape, &v, domain)
        }
        Family::Quadratic | Family::Tent => {
            require_unimodal_plus(family, shape)?;
            let v = p.as_slice()[0].clamp(0.0, 1.0);
            let kind = if family == Family::Tent { Kind::Tent(v) } else { Kind::Quadratic(v) };
            Ok(IntervalMap::assemble(family, kind, shape.clone(), domain, vec![0.5], vec![v]))
        }
        Family::Sawtooth => {
            let heights: Vec<Rational> = p
                .as_slice()
                .iter()
                .enumerate()
                .map(|(k, &pk)| {
                    let r = rational_from_f64(pk.clamp(0.0, 1.0));
                    if shape.is_local_max(k + 1) {
                        r
                    } else {
                        Rational::one() - r
                    }
                })
                .collect();
            Ok(sawtooth_from_heights(shape, &heights, domain))
        }
    }
}

/// Stunted sawtooth with exact plateau heights on the unit interval.
pub fn sawtooth_from_heights(shape: &Shape, heights: &[Rational], domain: RealInterval) -> IntervalMap {
    let saw = Sawtooth::new(shape, heights);
    let folds = saw.folds_exact().iter().map(to_f64).collect();
    let values = heights.iter().map(to_f64).collect();
    IntervalMap::assemble(Family::Sawtooth, Kind::Sawtooth(saw), shape.clone(), domain, folds, values)
}

/// Tent map `x ↦ s·min(x, 1 − x)` of slope `s ∈ [0, 2]`.
pub fn tent_map(slope: f64) -> Result<IntervalMap> {
    let p = ParamVector::new(vec![slope / 2.0])?;
    make_family_map(Family::Tent, &Shape::alternating(1, 1)?, &p, RealInterval::unit())
}

/// JSON map description `{family, shape, domain, p}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub family: Family,
    pub shape: Shape,
    #[serde(default = "RealInterval::unit")]
    pub domain: RealInterval,
    pub p: Vec<f64>,
}

impl MapSpec {
    pub fn build(&self) -> Result<IntervalMap> {
        let p = ParamVector::new(self.p.clone())?;
        make_family_map(self.family, &self.shape, &p, self.domain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> Shape {
        s.parse().unwrap()
    }

    fn pv(p: &[f64]) -> ParamVector {
        ParamVector::new(p.to_vec()).unwrap()
    }

    #[test]
    fn example_cubic_coefficients() {
        let s = shape("-+-");
        let v = CriticalValueVector::new(vec![0.0, 1.0], s.clone()).unwrap();
        let f = cubic_from_critical_values(&s, &v, RealInterval::unit()).unwrap();
        let c = f.cubic_coefficients().unwrap();
        for (got, want) in c.iter().zip([-16.0, 24.0, -9.0, 1.0]) {
            assert!((got - want).abs() < 1e-10, "{c:?}");
        }
        for &x in &[0.0, 0.1, 0.4, 0.9] {
            let want = (4.0 * x - 1.0) * (4.0 * x - 1.0) * (1.0 - x);
            assert!((f.eval(x) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_limit_is_x_cubed() {
        let s = shape("+-+");
        let v = CriticalValueVector::new(vec![0.0, 0.0], s.clone()).unwrap();
        let f = cubic_from_critical_values(&s, &v, RealInterval::unit()).unwrap();
        let c = f.cubic_coefficients().unwrap();
        for (got, want) in c.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-10, "{c:?}");
        }
    }

    #[test]
    fn cubic_on_general_domain() {
        let s = shape("+-+");
        let d = RealInterval::new(-1.0, 3.0).unwrap();
        let v = CriticalValueVector::new(vec![2.5, 0.0], s.clone()).unwrap();
        let f = cubic_from_critical_values(&s, &v, d).unwrap();
        let c = f.cubic_coefficients().unwrap();
        let poly = |x: f64| ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
        assert!((poly(-1.0) + 1.0).abs() < 1e-9);
        assert!((poly(3.0) - 3.0).abs() < 1e-9);
        for (&cp, &cv) in f.folding_points().iter().zip(f.folding_values()) {
            assert!((poly(cp) - cv).abs() < 1e-9);
            assert!((f.eval(cp) - cv).abs() < 1e-9);
        }
        assert!(c[0] > 0.0);
    }

    #[test]
    fn sawtooth_unimodal_example() {
        let f = make_family_map(Family::Sawtooth, &shape("+-"), &pv(&[0.875]), RealInterval::unit()).unwrap();
        assert_eq!(f.eval(0.5), 0.875);
        assert_eq!(f.eval(7.0 / 16.0), 0.875);
        assert_eq!(f.eval(9.0 / 16.0), 0.875);
        assert_eq!(f.eval(0.25), 0.5);
        assert!(f.eval(7.0 / 16.0 - 1e-3) < 0.875);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), 0.0);
        let saw = f.sawtooth().unwrap();
        assert_eq!(saw.eval_exact(&Ratio::new(7, 8)), Ratio::new(1, 4));
        assert_eq!(f.plateau(1), Some((7.0 / 16.0, 9.0 / 16.0)));
        assert_eq!(f.plateau(2), None);
    }

    #[test]
    fn sawtooth_bimodal_plateaus() {
        let f = make_family_map(Family::Sawtooth, &shape("+-+"), &pv(&[0.7, 0.6]), RealInterval::unit()).unwrap();
        assert_eq!(f.folding_values(), &[0.7, 0.4]);
        assert!((f.eval(1.0 / 3.0) - 0.7).abs() < 1e-15);
        assert!((f.eval(2.0 / 3.0) - 0.4).abs() < 1e-15);
        assert_eq!(f.eval(1.0), 1.0);
        let (lo, hi) = f.plateau(2).unwrap();
        assert!((lo - 1.6 / 3.0).abs() < 1e-15 && (hi - 2.4 / 3.0).abs() < 1e-15);
        let pieces = f.linear_pieces().unwrap();
        assert_eq!(pieces.first().unwrap()[0], 0.0);
        assert_eq!(pieces.last().unwrap()[1], 1.0);
    }

    #[test]
    fn tent_and_quadratic() {
        let phi4 = (1.0 + 5f64.sqrt()) / 4.0;
        let t = make_family_map(Family::Tent, &shape("+-"), &pv(&[phi4]), RealInterval::unit()).unwrap();
        assert_eq!(t.eval(0.5), phi4);
        assert_eq!(t.tent_slope(), Some(2.0 * phi4));
        let q = make_family_map(Family::Quadratic, &shape("+-"), &pv(&[1.0]), RealInterval::unit()).unwrap();
        assert_eq!(q.eval(0.5), 1.0);
        let err = make_family_map(Family::Tent, &shape("-+"), &pv(&[0.5]), RealInterval::unit()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        let err = make_family_map(Family::Cubic, &shape("+-"), &pv(&[0.5]), RealInterval::unit()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn map_spec_round_trip() {
        let json = r#"{"family":"stunted_sawtooth","shape":"+-+","domain":[0,1],"p":[1,1]}"#;
        let spec: MapSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.family, Family::Sawtooth);
        let f = spec.build().unwrap();
        assert_eq!(f.eval(1.0 / 3.0), 1.0);
        let out = serde_json::to_string(&spec).unwrap();
        assert_eq!(out, r#"{"family":"sawtooth","shape":"+-+","domain":[0.0,1.0],"p":[1.0,1.0]}"#);
        let bad = r#"{"family":"cubic","shape":"+-+","p":[0.2,0.3]}"#;
        let spec: MapSpec = serde_json::from_str(bad).unwrap();
        assert!(matches!(spec.build(), Err(Error::Constraint(_))));
    }
}
