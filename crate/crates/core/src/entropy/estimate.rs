//! Entropy estimates from word counts.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::counting::Engine;
use crate::error::{Error, Result};
use crate::symbolic::KneadingData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Adm,
    Neg,
    Markov,
    Lap,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adm" => Ok(Method::Adm),
            "neg" => Ok(Method::Neg),
            "markov" => Ok(Method::Markov),
            "lap" => Ok(Method::Lap),
            other => Err(Error::InvalidArgument(format!("unknown entropy method {other:?}"))),
        }
    }
}

/// An entropy value in nats with the bracket it was derived from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub method: Method,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub depth: usize,
    /// Growth number `exp(value)`.
    pub gamma: f64,
}

impl EntropyEstimate {
    pub(crate) fn new(method: Method, value: f64, lower: f64, upper: f64, depth: usize) -> Self {
        EntropyEstimate {
            method,
            value,
            lower,
            upper,
            depth,
            gamma: value.exp(),
        }
    }
}

/// Natural log of a big count; `-inf` for zero.
pub(crate) fn ln_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_u64(n: u64) -> f64 {
    if n == 0 {
        f64::NEG_INFINITY
    } else {
        (n as f64).ln()
    }
}

/// Ratio estimate `log(Adm(k)/Adm(k−1))`, bracketed above by `(1/k)·log Adm(k)`.
pub fn entropy_from_adm(k: &KneadingData, k_max: usize) -> Result<EntropyEstimate> {
    if k_max < 4 {
        return Err(Error::InvalidArgument(format!("adm depth must be at least 4, got {k_max}")));
    }
    let counts = Engine::new(k, k_max).adm_counts(k_max)?;
    Ok(adm_estimate(&counts, k.modality()))
}

pub(crate) fn adm_estimate(counts: &[u64], m: usize) -> EntropyEstimate {
    let k_max = counts.len() - 1;
    let cap = ((m + 1) as f64).ln();
    let ratio = |k: usize| ln_u64(counts[k]) - ln_u64(counts[k - 1]);
    let upper = (ln_u64(counts[k_max]) / k_max as f64).clamp(0.0, cap);
    let value = ratio(k_max).clamp(0.0, upper);
    let recent: Vec<f64> = (k_max - 2..=k_max).map(ratio).collect();
    let spread = recent.iter().cloned().fold(f64::MIN, f64::max) - recent.iter().cloned().fold(f64::MAX, f64::min);
    let lower = (value - spread).max(0.0);
    EntropyEstimate::new(Method::Adm, value, lower, upper, k_max)
}

/// `max (1/k)·log⁺ Neg(k)` over the window `k_max/2 ≤ k ≤ k_max`.
pub fn entropy_from_neg(k: &KneadingData, k_max: usize) -> Result<EntropyEstimate> {
    if k_max < 6 {
        return Err(Error::InvalidArgument(format!("neg depth must be at least 6, got {k_max}")));
    }
    let m = k.modality();
    let cap = ((m + 1) as f64).ln();
    let engine = Engine::new(k, 4 * k_max);
    let window: Vec<usize> = (k_max / 2..=k_max).collect();
    let mut rates = Vec::with_capacity(window.len());
    for &p in &window {
        let n = engine.neg_count(p)?.count;
        rates.push(ln_big(&n).max(0.0) / p as f64);
    }
    let (best, value) = rates
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, &r)| if r > bv { (i, r) } else { (bi, bv) });
    let value = value.min(cap);
    let adm = engine.adm_counts(k_max)?;
    let upper = (ln_u64(adm[k_max]) / k_max as f64).clamp(0.0, cap).max(value);
    // compare with the window entry of the same parity two steps earlier
    let wobble = if best >= 2 { (rates[best] - rates[best - 2]).abs() } else { 0.0 };
    let lower = (value - wobble).max(0.0);
    Ok(EntropyEstimate::new(Method::Neg, value, lower, upper, k_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Shape, SymbolSeq};

    fn kd(shape: &str, seqs: &[&str]) -> KneadingData {
        let shape: Shape = shape.parse().unwrap();
        let seqs = seqs.iter().map(|s| s.parse::<SymbolSeq>().unwrap()).collect();
        KneadingData::new(shape, seqs).unwrap()
    }

    #[test]
    fn full_tent_entropy() {
        let k = kd("+-", &["I1|(I0)"]);
        let e = entropy_from_adm(&k, 14).unwrap();
        assert!((e.value - 2f64.ln()).abs() < 1e-12);
        assert!(e.lower <= e.value && e.value <= e.upper);
        let e = entropy_from_neg(&k, 12).unwrap();
        assert!((e.value - 2f64.ln()).abs() < 0.06);
    }

    #[test]
    fn golden_entropy() {
        let k = kd("+-", &["(I1.I0.C1)"]);
        let e = entropy_from_adm(&k, 16).unwrap();
        let rho = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((e.value - rho.ln()).abs() < 0.02, "{e:?}");
        assert!((e.gamma - e.value.exp()).abs() < 1e-15);
    }

    #[test]
    fn monotone_limit_has_zero_neg_entropy() {
        let k = kd("+-+", &["(I0)", "(I0)"]);
        let e = entropy_from_neg(&k, 12).unwrap();
        assert_eq!(e.value, 0.0);
        let e = entropy_from_adm(&k, 12).unwrap();
        assert!(e.value < 0.2);
    }

    #[test]
    fn depth_preconditions() {
        let k = kd("+-", &["(I1.I0.C1)"]);
        assert!(entropy_from_adm(&k, 3).is_err());
        assert!(entropy_from_neg(&k, 5).is_err());
    }

    #[test]
    fn big_logs() {
        let n = BigUint::from(3u32).pow(2000);
        assert!((ln_big(&n) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(ln_big(&BigUint::from(1u32)), 0.0);
    }

    #[test]
    fn serializes_with_gamma() {
        let e = EntropyEstimate::new(Method::Adm, 0.0, 0.0, 0.0, 4);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"method":"adm","value":0.0,"lower":0.0,"upper":0.0,"depth":4,"gamma":1.0}"#);
    }
}
