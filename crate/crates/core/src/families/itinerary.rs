//! Addresses, itineraries and kneading data of concrete maps.

use num_traits::{One, Zero};

use super::exact::{rational_from_f64, Rational};
use super::maps::{IntervalMap, Sawtooth};
use crate::error::{Error, Result};
use crate::symbolic::{KneadingData, Symbol, SymbolSeq, SymbolWord};

/// Default address tolerance `1e−12·(b − a)`.
pub fn default_tol(map: &IntervalMap) -> f64 {
    1e-12 * map.domain().len()
}

/// Address of a point. Endpoints always belong to the outer laps, and a
/// folding point that sits on the boundary is not treated as a fold.
pub fn address(map: &IntervalMap, x: f64, tol: f64) -> Symbol {
    let d = map.domain();
    let m = map.modality();
    if x <= d.a() {
        return Symbol::Interval(0);
    }
    if x >= d.b() {
        return Symbol::Interval(m);
    }
    let edge = tol.max(0.0);
    for (k, &c) in map.folding_points().iter().enumerate() {
        let interior = c - d.a() > edge && d.b() - c > edge;
        if interior && (x - c).abs() <= tol {
            return Symbol::Fold(k + 1);
        }
    }
    Symbol::Interval(map.folding_points().iter().filter(|&&c| c < x).count())
}

fn exact_address(folds: &[Rational], u: &Rational) -> Symbol {
    let mut below = 0;
    for (k, c) in folds.iter().enumerate() {
        if u == c {
            return Symbol::Fold(k + 1);
        }
        if c < u {
            below += 1;
        }
    }
    Symbol::Interval(below)
}

fn unit_rational(map: &IntervalMap, x: f64) -> Rational {
    let d = map.domain();
    if x <= d.a() {
        return Rational::zero();
    }
    if x >= d.b() {
        return Rational::one();
    }
    rational_from_f64(d.to_unit(x))
}

/// Itinerary of `x` to the given depth. Stunted sawtooth maps are iterated in
/// exact rational arithmetic, other families numerically with fold tolerance `tol`.
pub fn itinerary(map: &IntervalMap, x: f64, depth: usize, tol: f64) -> Result<SymbolWord> {
    if !map.domain().contains(x) {
        return Err(Error::InvalidArgument(format!(
            "{x} is outside [{}, {}]",
            map.domain().a(),
            map.domain().b()
        )));
    }
    let mut out = Vec::with_capacity(depth);
    if let Some(saw) = map.sawtooth() {
        let folds = saw.folds_exact();
        let mut u = unit_rational(map, x);
        for _ in 0..depth {
            out.push(exact_address(&folds, &u));
            u = saw.eval_exact(&u);
        }
    } else {
        let mut y = x;
        for _ in 0..depth {
            out.push(address(map, y, tol));
            y = map.eval(y);
        }
    }
    Ok(SymbolWord::new(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    /// The orbit landed on folding point `j` (its symbol is the last one).
    Fold(usize),
    /// The point reached after the last symbol equals the point at this index.
    Cycle(usize),
    Truncated,
}

#[derive(Clone, Debug)]
struct RawOrbit {
    symbols: Vec<Symbol>,
    end: End,
}

fn raw_orbit<T>(
    start: T,
    depth: usize,
    step: impl Fn(&T) -> T,
    addr: impl Fn(&T) -> Symbol,
    same: impl Fn(&T, &T) -> bool,
) -> RawOrbit {
    let mut points: Vec<T> = Vec::new();
    let mut symbols = Vec::new();
    let mut x = start;
    loop {
        if let Some(k) = points.iter().position(|p| same(p, &x)) {
            return RawOrbit { symbols, end: End::Cycle(k) };
        }
        let s = addr(&x);
        symbols.push(s);
        if let Symbol::Fold(j) = s {
            return RawOrbit { symbols, end: End::Fold(j) };
        }
        if symbols.len() >= depth {
            return RawOrbit { symbols, end: End::Truncated };
        }
        let next = step(&x);
        points.push(x);
        x = next;
    }
}

/// Glue raw orbits together through fold continuations: after `C_j` the
/// sequence continues with `K_j`. Revisiting a sequence closes a period.
fn resolve(raws: &[RawOrbit], first: usize) -> Result<SymbolSeq> {
    let mut seq: Vec<Symbol> = Vec::new();
    let mut entered = vec![None; raws.len() + 1];
    let mut cur = first;
    loop {
        entered[cur] = Some(seq.len());
        let raw = &raws[cur - 1];
        let base = seq.len();
        seq.extend_from_slice(&raw.symbols);
        match raw.end {
            End::Fold(j) => {
                if let Some(start) = entered[j] {
                    return SymbolSeq::eventually_periodic(seq[..start].to_vec(), seq[start..].to_vec());
                }
                cur = j;
            }
            End::Cycle(k) => {
                let start = base + k;
                return SymbolSeq::eventually_periodic(seq[..start].to_vec(), seq[start..].to_vec());
            }
            End::Truncated => return Ok(SymbolSeq::truncated(seq)),
        }
    }
}

fn sawtooth_raws(saw: &Sawtooth, depth: usize) -> Vec<RawOrbit> {
    let folds = saw.folds_exact();
    saw.heights_exact()
        .iter()
        .map(|v| {
            raw_orbit(
                v.clone(),
                depth,
                |u| saw.eval_exact(u),
                |u| exact_address(&folds, u),
                |a, b| a == b,
            )
        })
        .collect()
}

fn numeric_raws(map: &IntervalMap, depth: usize, tol: f64) -> Vec<RawOrbit> {
    map.folding_values()
        .iter()
        .map(|&v| {
            raw_orbit(
                v,
                depth,
                |&x| map.eval(x),
                |&x| address(map, x, tol),
                |&a, &b| (a - b).abs() <= tol,
            )
        })
        .collect()
}

/// Kneading sequences `K_j = I(f(c_j))`, known to at least `depth` symbols.
/// Orbits that return to an earlier point (within `tol`) or run into a
/// folding point yield eventually periodic sequences.
pub fn kneading_data_of(map: &IntervalMap, depth: usize, tol: f64) -> Result<KneadingData> {
    if depth == 0 {
        return Err(Error::InvalidArgument("kneading depth must be at least 1".into()));
    }
    let raws = match map.sawtooth() {
        Some(saw) => sawtooth_raws(saw, depth),
        None => numeric_raws(map, depth, tol),
    };
    let seqs = (1..=raws.len()).map(|j| resolve(&raws, j)).collect::<Result<_>>()?;
    KneadingData::new(map.shape().clone(), seqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cubic_from_critical_values, make_family_map, CriticalValueVector, Family, ParamVector, RealInterval};
    use crate::symbolic::{check_kneading_admissible, Shape};

    fn shape(s: &str) -> Shape {
        s.parse().unwrap()
    }

    fn family(f: Family, s: &str, p: &[f64]) -> IntervalMap {
        make_family_map(f, &shape(s), &ParamVector::new(p.to_vec()).unwrap(), RealInterval::unit()).unwrap()
    }

    fn seq(s: &str) -> SymbolSeq {
        s.parse().unwrap()
    }

    fn example_cubic() -> IntervalMap {
        let s = shape("-+-");
        let v = CriticalValueVector::new(vec![0.0, 1.0], s.clone()).unwrap();
        cubic_from_critical_values(&s, &v, RealInterval::unit()).unwrap()
    }

    #[test]
    fn itinerary_examples() {
        let f = example_cubic();
        let w = itinerary(&f, 0.0, 6, 1e-12).unwrap();
        assert_eq!(w.to_string(), "I0.I2.I0.I2.I0.I2");
        let t = family(Family::Tent, "+-", &[1.0]);
        assert_eq!(itinerary(&t, 2.0 / 3.0, 4, 1e-12).unwrap().to_string(), "I1.I1.I1.I1");
        let s = family(Family::Sawtooth, "+-", &[0.875]);
        assert_eq!(itinerary(&s, 0.5, 4, 0.0).unwrap().to_string(), "C1.I1.I0.C1");
        assert!(itinerary(&s, 1.5, 4, 0.0).is_err());
    }

    #[test]
    fn kneading_examples() {
        let k = kneading_data_of(&example_cubic(), 20, 1e-12).unwrap();
        assert_eq!(k.sequences(), &[seq("(I0.I2)"), seq("(I2.I0)")]);
        let s = family(Family::Sawtooth, "+-", &[0.875]);
        let k = kneading_data_of(&s, 20, 0.0).unwrap();
        assert_eq!(k.sequences(), &[seq("(I1.I0.C1)")]);
        let g = family(Family::Tent, "+-", &[(1.0 + 5f64.sqrt()) / 4.0]);
        let k = kneading_data_of(&g, 20, 1e-12).unwrap();
        assert_eq!(k.sequences(), &[seq("(I1.I0.C1)")]);
    }

    #[test]
    fn monotone_cubic_limit() {
        let s = shape("+-+");
        let v = CriticalValueVector::new(vec![0.0, 0.0], s.clone()).unwrap();
        let f = cubic_from_critical_values(&s, &v, RealInterval::unit()).unwrap();
        let k = kneading_data_of(&f, 10, 1e-12).unwrap();
        assert_eq!(k.sequences(), &[seq("(I0)"), seq("(I0)")]);
        assert!(check_kneading_admissible(&k).admissible);
    }

    #[test]
    fn full_maps_have_fixed_endpoint_kneading() {
        let t = family(Family::Tent, "+-", &[1.0]);
        let k = kneading_data_of(&t, 10, 1e-12).unwrap();
        assert_eq!(k.sequences(), &[seq("I1|(I0)")]);
        let c = family(Family::Cubic, "+-+", &[1.0, 1.0]);
        let k = kneading_data_of(&c, 10, 1e-12).unwrap();
        assert_eq!(k.sequences(), &[seq("(I2)"), seq("(I0)")]);
    }

    #[test]
    fn chaotic_orbit_is_truncated() {
        let q = family(Family::Quadratic, "+-", &[0.97]);
        let k = kneading_data_of(&q, 30, 1e-12).unwrap();
        let k1 = &k.sequences()[0];
        assert!(!k1.is_infinite());
        assert!(k1.available().unwrap() >= 30);
    }
}
