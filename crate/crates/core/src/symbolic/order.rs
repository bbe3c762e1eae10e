//! The twisted order on symbol sequences.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::alphabet::{Shape, Symbol, SymbolSeq, SymbolWord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistedOrder {
    Less,
    Equal,
    Greater,
    /// A fold symbol in the common prefix makes the sign product zero.
    Undefined,
}

impl TwistedOrder {
    pub fn reverse(self) -> Self {
        match self {
            TwistedOrder::Less => TwistedOrder::Greater,
            TwistedOrder::Greater => TwistedOrder::Less,
            other => other,
        }
    }
}

/// Outcome of comparing two possibly truncated sequences over a bounded window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Scan {
    Decided(TwistedOrder),
    /// Tied on the first `index` symbols, then one side ran out.
    Exhausted { index: usize, left_short: bool },
}

fn sign_of(s: Symbol, shape: &Shape) -> i8 {
    match s {
        Symbol::Interval(j) => shape.sigma(j),
        Symbol::Fold(_) => 0,
    }
}

/// Compare `a` and `b` on their first `len` symbols.
pub(crate) fn scan_by(
    len: usize,
    a: impl Fn(usize) -> Option<Symbol>,
    b: impl Fn(usize) -> Option<Symbol>,
    shape: &Shape,
) -> Scan {
    let mut product = 1i8;
    for i in 0..len {
        let (x, y) = match (a(i), b(i)) {
            (Some(x), Some(y)) => (x, y),
            (None, _) => return Scan::Exhausted { index: i, left_short: true },
            (_, None) => return Scan::Exhausted { index: i, left_short: false },
        };
        if x != y {
            let order = match product {
                0 => TwistedOrder::Undefined,
                p if (x < y) == (p > 0) => TwistedOrder::Less,
                _ => TwistedOrder::Greater,
            };
            return Scan::Decided(order);
        }
        product *= sign_of(x, shape);
    }
    Scan::Decided(TwistedOrder::Equal)
}

/// Twisted comparison of two words of equal depth.
pub fn twisted_compare(a: &SymbolWord, b: &SymbolWord, shape: &Shape) -> Result<TwistedOrder> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "depth mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let m = shape.modality();
    a.check_modality(m)?;
    b.check_modality(m)?;
    let (x, y) = (a.symbols(), b.symbols());
    match scan_by(a.len(), |i| x.get(i).copied(), |i| y.get(i).copied(), shape) {
        Scan::Decided(o) => Ok(o),
        Scan::Exhausted { .. } => unreachable!("equal lengths"),
    }
}

/// Number of symbols after which two sequences are either known to differ or
/// known to agree forever. `exact` is false when either side is a truncation.
pub(crate) fn decision_depth(a: &SymbolSeq, b: &SymbolSeq) -> (usize, bool) {
    match (a.period_len(), b.period_len()) {
        (Some(pa), Some(pb)) => (a.prefix().len().max(b.prefix().len()) + pa.lcm(&pb), true),
        _ => {
            let la = a.available().unwrap_or(usize::MAX);
            let lb = b.available().unwrap_or(usize::MAX);
            (la.min(lb), false)
        }
    }
}

/// Compare two sequences as far as both are known. Ties at a truncation boundary
/// are reported as `Equal`.
pub fn compare_sequences(a: &SymbolSeq, b: &SymbolSeq, shape: &Shape) -> TwistedOrder {
    let (depth, _) = decision_depth(a, b);
    match scan_by(depth, |i| a.get(i), |i| b.get(i), shape) {
        Scan::Decided(o) => o,
        Scan::Exhausted { .. } => TwistedOrder::Equal,
    }
}
