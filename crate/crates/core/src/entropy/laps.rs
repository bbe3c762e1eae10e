//! Lap numbers and fixed points of iterates of piecewise-linear maps.

use crate::error::{Error, Result};
use crate::families::IntervalMap;

/// Default cap on the number of linear pieces kept for an iterate.
pub const PIECE_BUDGET: usize = 2_000_000;

const SNAP: f64 = 1e-13;

/// Linear piece `x0 < x1` with values `y0, y1` on the unit interval.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Piece {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Piece {
    fn direction(&self) -> i8 {
        if (self.y1 - self.y0).abs() <= SNAP {
            0
        } else if self.y1 > self.y0 {
            1
        } else {
            -1
        }
    }

    fn at(&self, y: f64) -> f64 {
        self.x0 + (y - self.y0) * (self.x1 - self.x0) / (self.y1 - self.y0)
    }
}

fn base_pieces(map: &IntervalMap) -> Result<Vec<Piece>> {
    let raw = map.linear_pieces().ok_or_else(|| {
        Error::InvalidArgument(format!("{} maps are not piecewise linear", map.family()))
    })?;
    Ok(raw
        .into_iter()
        .map(|[x0, x1, y0, y1]| Piece { x0, x1, y0, y1 })
        .collect())
}

fn eval_base(base: &[Piece], y: f64) -> f64 {
    let i = base.partition_point(|p| p.x1 < y).min(base.len() - 1);
    let p = &base[i];
    if p.x1 == p.x0 {
        return p.y0;
    }
    p.y0 + (y - p.x0) * (p.y1 - p.y0) / (p.x1 - p.x0)
}

fn snap(y: f64, cuts: &[f64]) -> f64 {
    let i = cuts.partition_point(|&c| c < y);
    for j in [i.wrapping_sub(1), i] {
        if let Some(&c) = cuts.get(j) {
            if (c - y).abs() <= SNAP {
                return c;
            }
        }
    }
    y.clamp(0.0, 1.0)
}

/// Pieces of `f ∘ g` from the pieces of `g`.
fn compose(base: &[Piece], cuts: &[f64], g: &[Piece], budget: usize) -> Result<Vec<Piece>> {
    let mut out: Vec<Piece> = Vec::with_capacity(g.len() * 2);
    let push = |out: &mut Vec<Piece>, p: Piece| -> Result<()> {
        if let Some(last) = out.last_mut() {
            // merge constant runs at the same height
            if last.direction() == 0 && p.direction() == 0 && (last.y1 - p.y0).abs() <= SNAP {
                last.x1 = p.x1;
                return Ok(());
            }
        }
        out.push(p);
        if out.len() > budget {
            return Err(Error::Resource(format!("iterate needs more than {budget} pieces")));
        }
        Ok(())
    };
    for p in g {
        if p.direction() == 0 {
            let y = eval_base(base, p.y0);
            push(&mut out, Piece { y0: y, y1: y, ..*p })?;
            continue;
        }
        let (lo, hi) = (p.y0.min(p.y1), p.y0.max(p.y1));
        let mut inner: Vec<f64> = cuts.iter().copied().filter(|&c| c > lo + SNAP && c < hi - SNAP).collect();
        if p.y1 < p.y0 {
            inner.reverse();
        }
        let mut x = p.x0;
        let mut y = p.y0;
        for c in inner {
            let xc = p.at(c);
            push(&mut out, Piece { x0: x, x1: xc, y0: snap(eval_base(base, y), cuts), y1: snap(eval_base(base, c), cuts) })?;
            x = xc;
            y = c;
        }
        push(&mut out, Piece { x0: x, x1: p.x1, y0: snap(eval_base(base, y), cuts), y1: snap(eval_base(base, p.y1), cuts) })?;
    }
    Ok(out)
}

fn iterate_pieces(map: &IntervalMap, k: usize, budget: usize) -> Result<Vec<Piece>> {
    if k == 0 {
        return Ok(vec![Piece { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 }]);
    }
    let base = base_pieces(map)?;
    let mut cuts: Vec<f64> = base.iter().skip(1).map(|p| p.x0).collect();
    cuts.dedup();
    let mut cur = base.clone();
    for _ in 1..k {
        cur = compose(&base, &cuts, &cur, budget)?;
    }
    Ok(cur)
}

/// `ℓ(f^k)`: the number of maximal monotone laps of the `k`-th iterate.
pub fn lap_count_exact(map: &IntervalMap, k: usize) -> Result<u64> {
    lap_count_with_budget(map, k, PIECE_BUDGET)
}

pub fn lap_count_with_budget(map: &IntervalMap, k: usize, budget: usize) -> Result<u64> {
    let pieces = iterate_pieces(map, k, budget)?;
    let mut laps = 1u64;
    let mut dir = 0i8;
    for p in &pieces {
        let d = p.direction();
        if d == 0 {
            continue;
        }
        if dir != 0 && d != dir {
            laps += 1;
        }
        dir = d;
    }
    Ok(laps)
}

/// Number of fixed points of `f^k`, counted from diagonal crossings of each
/// linear piece. Pieces lying on the diagonal are an error.
pub fn fixed_point_count(map: &IntervalMap, k: usize) -> Result<usize> {
    let pieces = iterate_pieces(map, k, PIECE_BUDGET)?;
    let mut roots: Vec<f64> = Vec::new();
    for p in &pieces {
        let (g0, g1) = (p.y0 - p.x0, p.y1 - p.x1);
        if g0.abs() <= SNAP && g1.abs() <= SNAP {
            return Err(Error::Numeric(format!(
                "f^{k} coincides with the diagonal on [{}, {}]",
                p.x0, p.x1
            )));
        }
        if g0.abs() <= SNAP {
            roots.push(p.x0);
        } else if g1.abs() <= SNAP {
            roots.push(p.x1);
        } else if (g0 < 0.0) != (g1 < 0.0) {
            roots.push(p.x0 + g0 / (g0 - g1) * (p.x1 - p.x0));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    Ok(roots.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family_map, tent_map, Family, ParamVector, RealInterval};

    #[test]
    fn tent_laps_double() {
        let t = tent_map(2.0).unwrap();
        assert_eq!(lap_count_exact(&t, 1).unwrap(), 2);
        assert_eq!(lap_count_exact(&t, 5).unwrap(), 32);
    }

    #[test]
    fn golden_laps_grow_like_phi() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let t = tent_map(phi).unwrap();
        let l9 = lap_count_exact(&t, 9).unwrap() as f64;
        let l10 = lap_count_exact(&t, 10).unwrap() as f64;
        assert!(((l10 / l9) - phi).abs() / phi < 0.05);
    }

    #[test]
    fn sawtooth_first_lap_number() {
        let shape = "+-+".parse().unwrap();
        let p = ParamVector::new(vec![0.8, 0.9]).unwrap();
        let s = make_family_map(Family::Sawtooth, &shape, &p, RealInterval::unit()).unwrap();
        assert_eq!(lap_count_exact(&s, 1).unwrap(), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let t = tent_map(2.0).unwrap();
        assert!(matches!(lap_count_with_budget(&t, 12, 100), Err(Error::Resource(_))));
    }

    #[test]
    fn root_two_fixed_points() {
        let t = tent_map(2f64.sqrt()).unwrap();
        for k in 1..=12 {
            let want = if k % 2 == 1 { 2 } else { 1 << (k / 2 + 1) };
            assert_eq!(fixed_point_count(&t, k).unwrap(), want, "k = {k}");
        }
    }

    #[test]
    fn non_linear_maps_are_rejected() {
        let shape = "+-".parse().unwrap();
        let p = ParamVector::new(vec![1.0]).unwrap();
        let q = make_family_map(Family::Quadratic, &shape, &p, RealInterval::unit()).unwrap();
        assert!(lap_count_exact(&q, 2).is_err());
    }
}
