//! Boundary-anchored cubics with prescribed critical values.
//!
//! On the unit interval a cubic of shape `(+−+)` with critical values
//! `v_1 ≥ v_2` can be written as `f(u) = A + P(λu + z_0)` where
//! `P(z) = z³/3 − W²z`, `A = (v_1 + v_2)/2` and `W³ = 3(v_1 − v_2)/4`.
//! The critical points of `P` are `±W`, so the critical values come out right
//! for every `λ > 0, z_0`. Anchoring `f(0) = 0` and `f(1) = 1` then reduces to
//! two independent monotone root problems for `z_0 ≤ −W` and `z_1 = λ + z_0 ≥ W`.
//! Shape `(−+−)` is handled by post-composing with `u ↦ 1 − u`.

use crate::error::{Error, Result};

/// Unit-interval cubic: ascending coefficients plus its critical points.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct UnitCubic {
    pub coefficients: [f64; 4],
    pub critical_points: [f64; 2],
}

impl UnitCubic {
    pub fn eval(&self, u: f64) -> f64 {
        let c = &self.coefficients;
        ((c[3] * u + c[2]) * u + c[1]) * u + c[0]
    }
}

fn depressed(z: f64, w2: f64) -> f64 {
    z * z * z / 3.0 - w2 * z
}

/// Solve `P(z) = target` on the monotone branch starting at `start` and moving
/// in direction `dir` (−1 to the left, +1 to the right).
fn branch_root(target: f64, w: f64, start: f64, dir: f64) -> Result<f64> {
    let w2 = w * w;
    let mut near = start;
    let mut step = 1.0 + w;
    let mut far = start + dir * step;
    let mut guard = 0;
    // P is increasing on both outer branches
    while (depressed(far, w2) - target) * dir < 0.0 {
        near = far;
        step *= 2.0;
        far = start + dir * step;
        guard += 1;
        if guard > 200 {
            return Err(Error::Numeric(format!(
                "cannot bracket cubic branch root for target {target}, W = {w}"
            )));
        }
    }
    let (mut lo, mut hi) = if dir > 0.0 { (near, far) } else { (far, near) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if depressed(mid, w2) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    // polish away from the critical point, where P' does not vanish
    for _ in 0..3 {
        let d = z * z - w2;
        if d.abs() < 1e-8 {
            break;
        }
        let next = z - (depressed(z, w2) - target) / d;
        if next.is_finite() && next >= lo && next <= hi {
            z = next;
        }
    }
    Ok(z)
}

/// Critical values on the unit interval, listed in order of critical points.
pub(crate) fn unit_cubic(plus_first: bool, v1: f64, v2: f64) -> Result<UnitCubic> {
    if !(v1.is_finite() && v2.is_finite()) {
        return Err(Error::Numeric(format!("non-finite critical values ({v1}, {v2})")));
    }
    let (a1, a2) = if plus_first { (v1, v2) } else { (1.0 - v1, 1.0 - v2) };
    let base = plus_shape_cubic(a1, a2)?;
    if plus_first {
        return Ok(base);
    }
    let c = base.coefficients;
    Ok(UnitCubic {
        coefficients: [1.0 - c[0], -c[1], -c[2], -c[3]],
        critical_points: base.critical_points,
    })
}

/// Rounding slack when the two critical values coincide.
const MERGE_TOL: f64 = 1e-12;

fn plus_shape_cubic(v1: f64, v2: f64) -> Result<UnitCubic> {
    let v2 = if v2 > v1 && v2 - v1 <= MERGE_TOL { v1 } else { v2 };
    if v1 < v2 || v1 > 1.0 || v2 < 0.0 {
        return Err(Error::Constraint(format!(
            "critical values ({v1}, {v2}) do not satisfy 0 <= v2 <= v1 <= 1"
        )));
    }
    let offset = 0.5 * (v1 + v2);
    let w = (0.75 * (v1 - v2)).cbrt();
    let z0 = branch_root(-offset, w, -w, -1.0)?;
    let z1 = branch_root(1.0 - offset, w, w, 1.0)?;
    let lambda = z1 - z0;
    if !(lambda > 0.0) {
        return Err(Error::Numeric(format!(
            "degenerate scale λ = {lambda} for critical values ({v1}, {v2})"
        )));
    }
    let w2 = w * w;
    let coefficients = [
        offset + z0 * z0 * z0 / 3.0 - w2 * z0,
        lambda * (z0 * z0 - w2),
        lambda * lambda * z0,
        lambda * lambda * lambda / 3.0,
    ];
    let c1 = ((-w - z0) / lambda).clamp(0.0, 1.0);
    let c2 = ((w - z0) / lambda).clamp(0.0, 1.0);
    Ok(UnitCubic {
        coefficients,
        critical_points: [c1, c2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_corner() {
        let c = unit_cubic(true, 1.0, 0.0).unwrap();
        assert!((c.critical_points[0] - 0.25).abs() < 1e-14);
        assert!((c.critical_points[1] - 0.75).abs() < 1e-14);
        for &x in &[0.0, 0.1, 0.3, 0.5, 0.9, 1.0] {
            let t = 2.0 * x - 1.0;
            let g = (4.0 * t * t * t - 3.0 * t + 1.0) / 2.0;
            assert!((c.eval(x) - g).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn example_cubic_minus_shape() {
        let c = unit_cubic(false, 0.0, 1.0).unwrap();
        let expect = [1.0, -9.0, 24.0, -16.0];
        for (got, want) in c.coefficients.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{:?}", c.coefficients);
        }
    }

    #[test]
    fn double_critical_point_limits() {
        let c = unit_cubic(true, 0.0, 0.0).unwrap();
        for &x in &[0.0, 0.2, 0.7, 1.0] {
            assert!((c.eval(x) - x * x * x).abs() < 1e-14);
        }
        assert!(c.critical_points.iter().all(|p| p.abs() < 1e-12));
        let c = unit_cubic(true, 1.0, 1.0).unwrap();
        for &x in &[0.0, 0.2, 0.7, 1.0] {
            assert!((c.eval(x) - (1.0 + (x - 1.0).powi(3))).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert!(matches!(unit_cubic(true, 0.2, 0.5), Err(Error::Constraint(_))));
        assert!(matches!(unit_cubic(true, f64::NAN, 0.5), Err(Error::Numeric(_))));
    }
}
