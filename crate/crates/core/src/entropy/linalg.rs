//! Exact integer linear algebra and the Perron root of nonnegative matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const PERRON_GAP: f64 = 1e-10;
const POWER_ITERATIONS: usize = 200_000;
const EXACT_LIMIT: usize = 12;

/// Determinant by fraction-free Gaussian elimination.
pub fn determinant(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Characteristic polynomial `det(xI − A)`, ascending coefficients, by the
/// Faddeev–LeVerrier recursion in exact arithmetic.
pub fn characteristic_polynomial(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let am: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    // M_0 = 0, c_n = 1; M_k = A M_{k−1} + c_{n−k+1} I; c_{n−k} = −tr(A M_k)/k
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(&am, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let amk = mul(&am, &mk);
        let trace = (0..n).fold(BigRational::zero(), |t, i| t + &amk[i][i]);
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
    }
    coeffs.into_iter().map(|c| c.to_integer()).collect()
}

fn mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// Polynomial division `a = q·b + r`.
fn divide(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = trim(a.clone());
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap().clone() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn remainder(a: &Poly, b: &Poly) -> Poly {
    divide(a, b).1
}

fn is_zero_poly(p: &Poly) -> bool {
    p.len() == 1 && p[0].is_zero()
}

/// `p / gcd(p, p′)`: same distinct roots, all simple.
fn square_free(p: &Poly) -> Poly {
    let (mut a, mut b) = (p.clone(), derivative(p));
    while !is_zero_poly(&b) {
        let r = remainder(&a, &b);
        a = b;
        b = r;
    }
    if a.len() <= 1 {
        return p.clone();
    }
    divide(p, &a).0
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let n = chain.len();
        let r = remainder(&chain[n - 2], &chain[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn variations(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Largest real root of an integer polynomial (ascending coefficients),
/// isolated with a Sturm sequence and bisected to `1e−13`.
pub fn largest_real_root(coeffs: &[BigInt]) -> Option<f64> {
    let p = trim(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    if p.len() <= 1 {
        return None;
    }
    let lead = p.last().unwrap().abs();
    let bound = p[..p.len() - 1]
        .iter()
        .fold(BigRational::zero(), |m, c| if c.abs() > m { c.abs() } else { m })
        / lead
        + BigRational::one();
    let chain = sturm_chain(&square_free(&p));
    let (mut lo, mut hi) = (-bound.clone(), bound);
    let count = |x: &BigRational| variations(&chain, x);
    let v_hi = count(&hi);
    if count(&lo) == v_hi {
        return None;
    }
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(13)));
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        // roots strictly above mid exist iff the variation count drops after mid
        if count(&mid) > v_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(to_f64(&((lo + hi) / two)))
}

/// Collatz–Wielandt bounds for `M + I` from a positive vector.
fn power_bounds(a: &[Vec<i64>]) -> Option<f64> {
    let n = a.len();
    let mut x = vec![1.0f64; n];
    for _ in 0..POWER_ITERATIONS {
        let y: Vec<f64> = (0..n)
            .map(|i| x[i] + a[i].iter().zip(&x).map(|(&m, &v)| m as f64 * v).sum::<f64>())
            .collect();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            if x[i] <= 0.0 {
                return None;
            }
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= PERRON_GAP {
            return Some(0.5 * (lo + hi) - 1.0);
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        if !(norm > 0.0 && norm.is_finite()) {
            return None;
        }
        x = y.into_iter().map(|v| v / norm).collect();
        if x.iter().any(|&v| v < 1e-300) {
            return None;
        }
    }
    None
}

/// Largest real eigenvalue of a nonnegative integer matrix.
pub fn perron_root(a: &[Vec<i64>]) -> Result<f64> {
    let n = a.len();
    if n == 0 {
        return Ok(0.0);
    }
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    if a.iter().flatten().any(|&v| v < 0) {
        return Err(Error::InvalidArgument("matrix must be nonnegative".into()));
    }
    let exact = || largest_real_root(&characteristic_polynomial(a)).map(|r| r.max(0.0));
    match power_bounds(a) {
        Some(r) if n <= 4 => {
            let e = exact().unwrap_or(0.0);
            if (e - r).abs() > 1e-8 {
                return Err(Error::Numeric(format!(
                    "power iteration gives {r} but the characteristic polynomial gives {e}"
                )));
            }
            Ok(r)
        }
        Some(r) => Ok(r),
        None if n <= EXACT_LIMIT => {
            exact().ok_or_else(|| Error::Numeric("characteristic polynomial has no real root".into()))
        }
        None => Err(Error::Numeric(format!(
            "power iteration did not converge for a {n}x{n} matrix"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![0, 1], vec![-1, -1]]), BigInt::from(1));
        assert_eq!(determinant(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]), BigInt::from(1));
        assert_eq!(determinant(&[vec![1, 1], vec![1, 1]]), BigInt::zero());
        assert_eq!(
            determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]),
            BigInt::from(6)
        );
    }

    #[test]
    fn charpoly() {
        let p = characteristic_polynomial(&[vec![0, 1], vec![1, 1]]);
        assert_eq!(p, vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
        let p = characteristic_polynomial(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]);
        assert_eq!(p, vec![BigInt::zero(), BigInt::zero(), BigInt::from(-3), BigInt::from(1)]);
    }

    #[test]
    fn perron_examples() {
        assert!((perron_root(&[vec![1, 1], vec![1, 1]]).unwrap() - 2.0).abs() < 1e-10);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((perron_root(&[vec![0, 1], vec![1, 1]]).unwrap() - phi).abs() < 1e-10);
        assert!((perron_root(&[vec![1; 3], vec![1; 3], vec![1; 3]]).unwrap() - 3.0).abs() < 1e-10);
        assert!((perron_root(&[vec![1, 0], vec![0, 1]]).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(perron_root(&[vec![0, 1], vec![0, 0]]).unwrap(), 0.0);
    }

    #[test]
    fn reducible_fallback() {
        // block triangular, power iteration vector decays on the first block
        let mut a = vec![vec![0i64; 6]; 6];
        a[0][1] = 1;
        a[1][0] = 1;
        for i in 2..6 {
            for j in 2..6 {
                a[i][j] = 1;
            }
        }
        assert!((perron_root(&a).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn sturm_largest_root() {
        // (x − 1)^2 (x − 3)
        let p: Vec<BigInt> = [-3, 7, -5, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert!((largest_real_root(&p).unwrap() - 3.0).abs() < 1e-12);
        let p: Vec<BigInt> = [1, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(largest_real_root(&p), None);
    }
}
