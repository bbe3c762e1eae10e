//! Exact rational arithmetic for the piecewise-linear stunted sawtooth maps.

use num_rational::Ratio;
use num_traits::ToPrimitive;

pub type Rational = Ratio<i128>;

const MAX_DENOMINATOR: i128 = 1_000_000;
const DYADIC_BITS: i32 = 48;

/// Rational reading of a float: the best approximation with a small
/// denominator when it matches to 1e−13, otherwise the dyadic rounding to 2^−48.
pub fn rational_from_f64(x: f64) -> Rational {
    if let Some(r) = small_rational(x) {
        return r;
    }
    let scale = 2f64.powi(DYADIC_BITS);
    Ratio::new((x * scale).round() as i128, 1i128 << DYADIC_BITS)
}

fn small_rational(x: f64) -> Option<Rational> {
    if !x.is_finite() || x.abs() > 1e6 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= 1e-13 * x.abs().max(1.0) {
            return Some(Ratio::new(h1, k1));
        }
        let frac = rest - a;
        if frac <= 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn clamp_between(x: Rational, p: &Rational, q: &Rational) -> Rational {
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    if &x < lo {
        lo.clone()
    } else if &x > hi {
        hi.clone()
    } else {
        x
    }
}
