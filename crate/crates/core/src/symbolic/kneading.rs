//! Kneading data, compatibility conditions and admissibility of words.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::alphabet::{extremal_seq, Extremal, Shape, Symbol, SymbolSeq, SymbolWord};
use super::order::{compare_sequences, decision_depth, scan_by, Scan, TwistedOrder};
use crate::error::{Error, Result};

/// A shape together with the kneading sequences `K_1 … K_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KneadingRepr", into = "KneadingRepr")]
pub struct KneadingData {
    shape: Shape,
    sequences: Vec<SymbolSeq>,
    lower: SymbolSeq,
    upper: SymbolSeq,
}

#[derive(Serialize, Deserialize)]
struct KneadingRepr {
    shape: Shape,
    sequences: Vec<SymbolSeq>,
}

impl TryFrom<KneadingRepr> for KneadingData {
    type Error = Error;

    fn try_from(r: KneadingRepr) -> Result<Self> {
        KneadingData::new(r.shape, r.sequences)
    }
}

impl From<KneadingData> for KneadingRepr {
    fn from(k: KneadingData) -> Self {
        KneadingRepr {
            shape: k.shape,
            sequences: k.sequences,
        }
    }
}

impl KneadingData {
    /// Builds kneading data; `K_0` and `K_{m+1}` are derived from the shape
    /// under boundary anchoring.
    pub fn new(shape: Shape, sequences: Vec<SymbolSeq>) -> Result<Self> {
        let m = shape.modality();
        if sequences.len() != m {
            return Err(Error::InvalidArgument(format!(
                "shape {shape} needs {m} kneading sequences, got {}",
                sequences.len()
            )));
        }
        for k in &sequences {
            k.check_modality(m)?;
        }
        let lower = if shape.sigma(0) == 1 {
            extremal_seq(&shape, Extremal::Min)
        } else {
            extremal_seq(&shape, Extremal::Max)
        };
        let upper = if shape.sigma(m) == 1 {
            extremal_seq(&shape, Extremal::Max)
        } else {
            extremal_seq(&shape, Extremal::Min)
        };
        Ok(KneadingData {
            shape,
            sequences,
            lower,
            upper,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn modality(&self) -> usize {
        self.shape.modality()
    }

    /// `K_1 … K_m`.
    pub fn sequences(&self) -> &[SymbolSeq] {
        &self.sequences
    }

    /// `K_j` for `0 ≤ j ≤ m + 1`, including the boundary sequences.
    pub fn bound(&self, j: usize) -> &SymbolSeq {
        let m = self.modality();
        match j {
            0 => &self.lower,
            j if j == m + 1 => &self.upper,
            j => &self.sequences[j - 1],
        }
    }

    /// Shortest stored depth among the non-periodic sequences, `None` if every
    /// sequence is eventually periodic.
    pub fn depth(&self) -> Option<usize> {
        self.sequences.iter().filter_map(SymbolSeq::available).min()
    }
}

impl fmt::Display for KneadingData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape)?;
        for (i, k) in self.sequences.iter().enumerate() {
            write!(f, " K{}={}", i + 1, k)?;
        }
        Ok(())
    }
}

/// `lo ⊑ s ⊑ hi` in the direction fixed by `σ_j`, from the two raw comparisons
/// `cmp(s, K_j)` and `cmp(s, K_{j+1})`. Undefined counts as a tie.
pub(crate) fn within_bounds(sigma: i8, vs_left: TwistedOrder, vs_right: TwistedOrder) -> bool {
    use TwistedOrder::*;
    if sigma > 0 {
        vs_left != Less && vs_right != Greater
    } else {
        vs_left != Greater && vs_right != Less
    }
}

/// Condition 1 and Condition 2♯ for a finite word.
pub fn is_admissible_word(w: &SymbolWord, k: &KneadingData) -> Result<bool> {
    let m = k.modality();
    w.check_modality(m)?;
    let shape = k.shape();
    let syms = w.symbols();
    for (pos, &s) in syms.iter().enumerate() {
        let rest = &syms[pos + 1..];
        match s {
            Symbol::Fold(j) => {
                let kj = k.bound(j);
                for (i, &x) in rest.iter().enumerate() {
                    match kj.get(i) {
                        None => {
                            return Err(Error::Undecidable {
                                sequence: j,
                                needed: rest.len(),
                                available: i,
                            })
                        }
                        Some(y) if y != x => return Ok(false),
                        Some(_) => {}
                    }
                }
            }
            Symbol::Interval(j) => {
                let left = suffix_order(rest, k.bound(j), j, shape)?;
                let right = suffix_order(rest, k.bound(j + 1), j + 1, shape)?;
                if !within_bounds(shape.sigma(j), left, right) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn suffix_order(
    rest: &[Symbol],
    kj: &SymbolSeq,
    which: usize,
    shape: &Shape,
) -> Result<TwistedOrder> {
    match scan_by(rest.len(), |i| rest.get(i).copied(), |i| kj.get(i), shape) {
        Scan::Decided(o) => Ok(o),
        Scan::Exhausted { index, .. } => Err(Error::Undecidable {
            sequence: which,
            needed: rest.len(),
            available: index,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// A fold symbol is not followed by its own kneading sequence.
    FoldContinuation,
    /// A suffix leaves the interval allowed by the preceding lap.
    LapBounds,
    /// Consecutive kneading sequences are out of order.
    Ordering,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    /// 1-based index of the offending kneading sequence (first of the pair for `Ordering`).
    pub sequence: usize,
    /// Position inside the sequence, when meaningful.
    pub index: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.condition {
            Condition::FoldContinuation => "condition 1",
            Condition::LapBounds => "condition 2",
            Condition::Ordering => "condition 3",
        };
        write!(f, "{name} fails for K{}", self.sequence)?;
        if let Some(i) = self.index {
            write!(f, " at index {i}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violation: Option<Violation>,
}

/// Conditions 1, 2♯ and 3 for the kneading data itself. Comparisons run to
/// the depth at which periodic sequences are decided; truncated sequences are
/// compared as far as they go and ties there count as satisfied.
pub fn check_kneading_admissible(k: &KneadingData) -> AdmissibilityReport {
    match first_violation(k) {
        None => AdmissibilityReport {
            admissible: true,
            violation: None,
        },
        Some(v) => AdmissibilityReport {
            admissible: false,
            violation: Some(v),
        },
    }
}

fn first_violation(k: &KneadingData) -> Option<Violation> {
    let shape = k.shape();
    let m = k.modality();
    for i in 1..=m {
        let ki = k.bound(i);
        // beyond prefix + period every suffix repeats
        let positions = match ki.period_len() {
            Some(p) => ki.prefix().len() + p,
            None => ki.available().unwrap_or(0),
        };
        for t in 0..positions {
            let s = ki.get(t).expect("position within stored part");
            let rest = ki.suffix(t + 1);
            let fail = match s {
                Symbol::Fold(j) => {
                    let kj = k.bound(j);
                    let (depth, _) = decision_depth(&rest, kj);
                    (0..depth).any(|n| match (rest.get(n), kj.get(n)) {
                        (Some(x), Some(y)) => x != y,
                        _ => false,
                    })
                    .then_some(Condition::FoldContinuation)
                }
                Symbol::Interval(j) => {
                    let left = compare_sequences(&rest, k.bound(j), shape);
                    let right = compare_sequences(&rest, k.bound(j + 1), shape);
                    (!within_bounds(shape.sigma(j), left, right)).then_some(Condition::LapBounds)
                }
            };
            if let Some(condition) = fail {
                return Some(Violation {
                    condition,
                    sequence: i,
                    index: Some(t),
                });
            }
        }
    }
    for j in 1..m {
        let order = compare_sequences(k.bound(j), k.bound(j + 1), shape);
        let bad = match shape.sigma(j) {
            1 => order == TwistedOrder::Greater,
            _ => order == TwistedOrder::Less,
        };
        if bad {
            return Some(Violation {
                condition: Condition::Ordering,
                sequence: j,
                index: None,
            });
        }
    }
    None
}

/// `K(f) ≫ K(g)`: each `K_i(f)` lies on the entropy-increasing side of `K_i(g)`.
pub fn kneading_gg(kf: &KneadingData, kg: &KneadingData) -> Result<bool> {
    if kf.shape() != kg.shape() {
        return Err(Error::InvalidArgument(format!(
            "shape mismatch: {} vs {}",
            kf.shape(),
            kg.shape()
        )));
    }
    let shape = kf.shape();
    Ok((1..=kf.modality()).all(|i| {
        match compare_sequences(kf.bound(i), kg.bound(i), shape) {
            TwistedOrder::Equal => true,
            TwistedOrder::Undefined => false,
            TwistedOrder::Greater => shape.sigma(i) == -1,
            TwistedOrder::Less => shape.sigma(i) == 1,
        }
    }))
}
