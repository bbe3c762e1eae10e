//! Parameters on a segment at which a folding point is periodic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{default_tol, in_polytope, itinerary, make_family_map, Family, IntervalMap, ParamVector, RealInterval};
use crate::symbolic::{Shape, SymbolWord};

/// Sample intervals used to bracket sign changes.
const GRID: usize = 4096;

/// Straight segment `p(t) = start + t·(end − start)`, `t ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
}

impl Segment {
    pub fn new(start: Vec<f64>, end: Vec<f64>) -> Result<Self> {
        if start.len() != end.len() || start.is_empty() {
            return Err(Error::InvalidArgument("segment ends must have the same nonzero dimension".into()));
        }
        if !in_polytope(&start) || !in_polytope(&end) {
            return Err(Error::Constraint("segment leaves the parameter polytope".into()));
        }
        Ok(Segment { start, end })
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        self.start.iter().zip(&self.end).map(|(a, b)| a + t * (b - a)).collect()
    }
}

/// Closed parameter interval on which the orbit of the folding point lands
/// on that point's own plateau.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Capture {
    pub t: [f64; 2],
    pub midpoint: f64,
    pub p_lower: Vec<f64>,
    pub p_upper: Vec<f64>,
    pub p_midpoint: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bone {
    pub t: f64,
    pub p: Vec<f64>,
    /// Itinerary of the folding value at the located parameter.
    pub kneading: SymbolWord,
    pub capture: Option<Capture>,
}

#[derive(Clone, Debug)]
pub struct BoneQuery {
    pub family: Family,
    pub shape: Shape,
    pub segment: Segment,
    /// 1-based index of the folding point.
    pub critical_index: usize,
    pub period: usize,
    pub depth: usize,
    pub tol: f64,
}

struct Slice<'a> {
    q: &'a BoneQuery,
}

impl Slice<'_> {
    fn map(&self, t: f64) -> Result<IntervalMap> {
        let p = ParamVector::new(self.q.segment.at(t))?;
        make_family_map(self.q.family, &self.q.shape, &p, RealInterval::unit())
    }

    fn orbit(&self, f: &IntervalMap, n: usize) -> (f64, f64) {
        let c = f.folding_points()[self.q.critical_index - 1];
        (c, f.iterate(c, n))
    }

    fn g(&self, t: f64) -> Result<f64> {
        let f = self.map(t)?;
        let (c, y) = self.orbit(&f, self.q.period);
        Ok(y - c)
    }

    fn captured(&self, t: f64) -> Result<bool> {
        let f = self.map(t)?;
        let (_, y) = self.orbit(&f, self.q.period);
        Ok(f.plateau(self.q.critical_index).is_some_and(|(lo, hi)| lo <= y && y <= hi))
    }

    /// Shrink `[a, b]` (with `inside(a) != inside(b)`) to width `tol`.
    fn boundary(&self, mut a: f64, mut b: f64, inside_a: bool, test: impl Fn(f64) -> Result<bool>) -> Result<f64> {
        while (b - a).abs() > self.q.tol {
            let mid = 0.5 * (a + b);
            if test(mid)? == inside_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    }

    fn root(&self, a: f64, b: f64, ga: f64) -> Result<f64> {
        self.boundary(a, b, ga < 0.0, |t| Ok(self.g(t)? < 0.0))
    }

    /// Whether some proper divisor of the period already returns to `c`.
    fn has_smaller_period(&self, f: &IntervalMap) -> bool {
        let n = self.q.period;
        let scale = 1e-9 * f.domain().len();
        (1..n).filter(|d| n % d == 0).any(|d| {
            let (c, y) = self.orbit(f, d);
            (y - c).abs() <= scale
        })
    }

    fn capture(&self, root: f64) -> Result<Option<Capture>> {
        if !self.captured(root)? {
            return Ok(None);
        }
        let h = 1.0 / GRID as f64;
        let edge = |dir: f64| -> Result<f64> {
            let mut inside = root;
            loop {
                let next = (inside + dir * h).clamp(0.0, 1.0);
                if next == inside {
                    return Ok(inside);
                }
                if !self.captured(next)? {
                    return self.boundary(inside, next, true, |t| self.captured(t));
                }
                inside = next;
            }
        };
        let lo = edge(-1.0)?;
        let hi = edge(1.0)?;
        let mid = 0.5 * (lo + hi);
        let seg = &self.q.segment;
        Ok(Some(Capture {
            t: [lo, hi],
            midpoint: mid,
            p_lower: seg.at(lo),
            p_upper: seg.at(hi),
            p_midpoint: seg.at(mid),
        }))
    }
}

/// Parameters on the segment where `c_i` is periodic with exact period `n`,
/// located by bracketing sign changes of `f_t^n(c_i) − c_i` and bisecting to
/// `tol`. Plateau families also report the interval of captured orbits.
pub fn find_bone_on_segment(q: &BoneQuery) -> Result<Vec<Bone>> {
    if q.period == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    if !(q.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", q.tol)));
    }
    if q.segment.start.len() != q.shape.modality() {
        return Err(Error::InvalidArgument(format!(
            "segment has dimension {} but the shape has {} folds",
            q.segment.start.len(),
            q.shape.modality()
        )));
    }
    if q.critical_index == 0 || q.critical_index > q.shape.modality() {
        return Err(Error::InvalidArgument(format!("no folding point c{}", q.critical_index)));
    }
    let slice = Slice { q };
    let mut roots = Vec::new();
    let mut prev = (0.0, slice.g(0.0)?);
    if prev.1 == 0.0 {
        roots.push(0.0);
    }
    for k in 1..=GRID {
        let t = k as f64 / GRID as f64;
        let cur = (t, slice.g(t)?);
        if cur.1 == 0.0 {
            roots.push(cur.0);
        } else if prev.1 != 0.0 && (prev.1 < 0.0) != (cur.1 < 0.0) {
            roots.push(slice.root(prev.0, cur.0, prev.1)?);
        }
        prev = cur;
    }
    let mut bones: Vec<Bone> = Vec::new();
    for root in roots {
        if bones.last().is_some_and(|b| (b.t - root).abs() <= q.tol) {
            continue;
        }
        let f = slice.map(root)?;
        if slice.has_smaller_period(&f) {
            continue;
        }
        let value = f.folding_values()[q.critical_index - 1];
        bones.push(Bone {
            t: root,
            p: q.segment.at(root),
            kneading: itinerary(&f, value, q.depth, default_tol(&f))?,
            capture: slice.capture(root)?,
        });
    }
    Ok(bones)
}
