//! Shapes, the alphabet of addresses, finite words and eventually periodic sequences.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alternating monotonicity pattern `(σ_0, …, σ_m)` of an m-modal map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Shape {
    signs: Vec<i8>,
}

impl Shape {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a shape needs at least two signs, got {}",
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("shape signs must be +1 or -1".into()));
        }
        if signs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("shape signs must alternate".into()));
        }
        Ok(Shape { signs })
    }

    /// The shape of modality `m` whose first lap has sign `first`.
    pub fn alternating(first: i8, m: usize) -> Result<Self> {
        if first != 1 && first != -1 {
            return Err(Error::InvalidArgument("first sign must be +1 or -1".into()));
        }
        let signs = (0..=m)
            .map(|j| if j % 2 == 0 { first } else { -first })
            .collect();
        Shape::new(signs)
    }

    /// Number of folding points `m`.
    pub fn modality(&self) -> usize {
        self.signs.len() - 1
    }

    /// `σ_j` for `0 ≤ j ≤ m`.
    pub fn sigma(&self, j: usize) -> i8 {
        self.signs[j]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// The fold `c_j` (1-based) is a local maximum iff `σ_j = −1`.
    pub fn is_local_max(&self, j: usize) -> bool {
        self.signs[j] == -1
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.signs {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',' && *c != '(' && *c != ')')
            .collect();
        let signs = cleaned
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '\u{2212}' => Ok(-1),
                other => Err(Error::Parse(format!("unexpected character {other:?} in shape"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Shape::new(signs)
    }
}

impl TryFrom<String> for Shape {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Shape> for String {
    fn from(s: Shape) -> String {
        s.to_string()
    }
}

/// A letter of the alphabet `I_0 < C_1 < I_1 < … < C_m < I_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// Open lap `I_j`, `0 ≤ j ≤ m`.
    Interval(usize),
    /// Folding point `C_j`, `1 ≤ j ≤ m`.
    Fold(usize),
}

impl Symbol {
    /// Position along the real line: `I_j ↦ 2j`, `C_j ↦ 2j − 1`.
    pub fn rank(self) -> usize {
        match self {
            Symbol::Interval(j) => 2 * j,
            Symbol::Fold(j) => 2 * j - 1,
        }
    }

    pub fn from_rank(rank: usize) -> Symbol {
        if rank % 2 == 0 {
            Symbol::Interval(rank / 2)
        } else {
            Symbol::Fold(rank.div_ceil(2))
        }
    }

    pub fn is_fold(self) -> bool {
        matches!(self, Symbol::Fold(_))
    }

    pub fn index(self) -> usize {
        match self {
            Symbol::Interval(j) | Symbol::Fold(j) => j,
        }
    }

    /// Whether the symbol belongs to the alphabet of modality `m`.
    pub fn fits(self, m: usize) -> bool {
        match self {
            Symbol::Interval(j) => j <= m,
            Symbol::Fold(j) => (1..=m).contains(&j),
        }
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Interval(j) => write!(f, "I{j}"),
            Symbol::Fold(j) => write!(f, "C{j}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, digits) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let index: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad symbol {s:?}")))?;
        match kind {
            "I" => Ok(Symbol::Interval(index)),
            "C" if index >= 1 => Ok(Symbol::Fold(index)),
            _ => Err(Error::Parse(format!("bad symbol {s:?}"))),
        }
    }
}

fn write_dotted(f: &mut fmt::Formatter<'_>, symbols: &[Symbol]) -> fmt::Result {
    for (i, s) in symbols.iter().enumerate() {
        if i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

fn parse_dotted(s: &str) -> Result<Vec<Symbol>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('.').map(str::parse).collect()
}

/// A finite sequence of symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SymbolWord(Vec<Symbol>);

impl SymbolWord {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SymbolWord(symbols)
    }

    /// Word over the acritical subalphabet from lap indices.
    pub fn acritical(indices: &[usize]) -> Self {
        SymbolWord(indices.iter().map(|&j| Symbol::Interval(j)).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// Truncation depth.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_acritical(&self) -> bool {
        self.0.iter().all(|s| !s.is_fold())
    }

    pub fn concat(&self, other: &SymbolWord) -> SymbolWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SymbolWord(v)
    }

    pub(crate) fn check_modality(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|s| !s.fits(m)) {
            Some(s) => Err(Error::InvalidArgument(format!(
                "symbol {s} is not in the alphabet of modality {m}"
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dotted(f, &self.0)
    }
}

impl FromStr for SymbolWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_dotted(s).map(SymbolWord)
    }
}

impl TryFrom<String> for SymbolWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SymbolWord> for String {
    fn from(w: SymbolWord) -> String {
        w.to_string()
    }
}

impl From<Vec<Symbol>> for SymbolWord {
    fn from(v: Vec<Symbol>) -> Self {
        SymbolWord(v)
    }
}

/// A symbol sequence stored as `prefix` followed by `period` repeated forever.
///
/// An empty period means the sequence is a finite truncation of unknown continuation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SymbolSeq {
    prefix: Vec<Symbol>,
    period: Vec<Symbol>,
}

impl SymbolSeq {
    pub fn truncated(symbols: Vec<Symbol>) -> Self {
        SymbolSeq {
            prefix: symbols,
            period: Vec::new(),
        }
    }

    pub fn periodic(period: Vec<Symbol>) -> Result<Self> {
        SymbolSeq::eventually_periodic(Vec::new(), period)
    }

    pub fn eventually_periodic(prefix: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must be non-empty".into()));
        }
        Ok(SymbolSeq { prefix, period }.normalized())
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    /// Period length when the sequence is known to be eventually periodic.
    pub fn period_len(&self) -> Option<usize> {
        (!self.period.is_empty()).then_some(self.period.len())
    }

    pub fn is_infinite(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of symbols that can be read, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        if self.is_infinite() {
            None
        } else {
            Some(self.prefix.len())
        }
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// The first `depth` symbols (fewer if the sequence is a shorter truncation).
    pub fn truncate(&self, depth: usize) -> SymbolWord {
        SymbolWord((0..depth).map_while(|i| self.get(i)).collect())
    }

    /// The sequence with its first `t` symbols removed.
    pub fn suffix(&self, t: usize) -> SymbolSeq {
        if t <= self.prefix.len() {
            return SymbolSeq {
                prefix: self.prefix[t..].to_vec(),
                period: self.period.clone(),
            };
        }
        if self.period.is_empty() {
            return SymbolSeq::truncated(Vec::new());
        }
        let shift = (t - self.prefix.len()) % self.period.len();
        let mut period = self.period[shift..].to_vec();
        period.extend_from_slice(&self.period[..shift]);
        SymbolSeq {
            prefix: Vec::new(),
            period,
        }
    }

    pub fn contains_fold(&self) -> bool {
        self.prefix.iter().chain(&self.period).any(|s| s.is_fold())
    }

    pub(crate) fn check_modality(&self, m: usize) -> Result<()> {
        match self.prefix.iter().chain(&self.period).find(|s| !s.fits(m)) {
            Some(s) => Err(Error::InvalidArgument(format!(
                "symbol {s} is not in the alphabet of modality {m}"
            ))),
            None => Ok(()),
        }
    }

    /// Canonical form: primitive period, shortest prefix.
    pub fn normalized(mut self) -> Self {
        if self.period.is_empty() {
            return self;
        }
        let n = self.period.len();
        if let Some(d) = (1..n)
            .filter(|d| n % d == 0)
            .find(|&d| (d..n).all(|i| self.period[i] == self.period[i - d]))
        {
            self.period.truncate(d);
        }
        while let (Some(&last), Some(&tail)) = (self.prefix.last(), self.period.last()) {
            if last != tail {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
        self
    }

    /// Sequence of ranks, used by the counting engines.
    pub(crate) fn ranks(&self) -> RankSeq {
        RankSeq {
            prefix: self.prefix.iter().map(|s| s.rank() as u8).collect(),
            period: self.period.iter().map(|s| s.rank() as u8).collect(),
        }
    }
}

impl fmt::Display for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.period.is_empty() {
            return write_dotted(f, &self.prefix);
        }
        if !self.prefix.is_empty() {
            write_dotted(f, &self.prefix)?;
            f.write_str("|")?;
        }
        f.write_str("(")?;
        write_dotted(f, &self.period)?;
        f.write_str(")")
    }
}

impl FromStr for SymbolSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (pre, per) = match s.find('(') {
            None => return Ok(SymbolSeq::truncated(parse_dotted(s)?)),
            Some(open) => {
                let close = s
                    .rfind(')')
                    .filter(|&c| c > open && c == s.len() - 1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced period in {s:?}")))?;
                let pre = s[..open].trim().trim_end_matches('|');
                (pre, &s[open + 1..close])
            }
        };
        SymbolSeq::eventually_periodic(parse_dotted(pre)?, parse_dotted(per)?)
    }
}

impl TryFrom<String> for SymbolSeq {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SymbolSeq> for String {
    fn from(s: SymbolSeq) -> String {
        s.to_string()
    }
}

/// Rank-encoded sequence for the hot loops of the counting code.
#[derive(Clone, Debug)]
pub(crate) struct RankSeq {
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

impl RankSeq {
    #[inline]
    pub fn get(&self, i: usize) -> Option<u8> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    pub fn available(&self) -> usize {
        if self.period.is_empty() {
            self.prefix.len()
        } else {
            usize::MAX
        }
    }

    /// Materialize the first `n` ranks (or as many as exist).
    pub fn materialize(&self, n: usize) -> Vec<u8> {
        (0..n).map_while(|i| self.get(i)).collect()
    }
}

/// `ε(s)`: `σ_j` on `I_j`, zero on folds.
pub fn epsilon(s: Symbol, shape: &Shape) -> Result<i8> {
    if !s.fits(shape.modality()) {
        return Err(Error::InvalidArgument(format!(
            "symbol {s} out of range for shape {shape}"
        )));
    }
    Ok(match s {
        Symbol::Interval(j) => shape.sigma(j),
        Symbol::Fold(_) => 0,
    })
}

/// Product of `ε` over the word: +1, −1, or 0 when a fold occurs.
pub fn word_sign(w: &SymbolWord, shape: &Shape) -> Result<i8> {
    w.symbols()
        .iter()
        .try_fold(1i8, |acc, &s| Ok(acc * epsilon(s, shape)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremal {
    Min,
    Max,
}

/// `I_min` or `I_max` as an exact eventually periodic sequence.
///
/// For a boundary-anchored map these are the itineraries of `a` and `b`.
pub fn extremal_seq(shape: &Shape, which: Extremal) -> SymbolSeq {
    let m = shape.modality();
    let (low, high) = (Symbol::Interval(0), Symbol::Interval(m));
    let first = shape.sigma(0);
    let last = shape.sigma(m);
    let seq = match which {
        // orbit of a: a -> a if σ_0 = +, else a -> b, then b -> b (σ_m = +) or b -> a
        Extremal::Min => match (first, last) {
            (1, _) => SymbolSeq::periodic(vec![low]),
            (_, 1) => SymbolSeq::eventually_periodic(vec![low], vec![high]),
            _ => SymbolSeq::periodic(vec![low, high]),
        },
        Extremal::Max => match (last, first) {
            (1, _) => SymbolSeq::periodic(vec![high]),
            (_, 1) => SymbolSeq::eventually_periodic(vec![high], vec![low]),
            _ => SymbolSeq::periodic(vec![high, low]),
        },
    };
    seq.expect("extremal periods are non-empty")
}

/// Truncation of `I_min` / `I_max` to `depth` symbols.
pub fn extremal_sequence(shape: &Shape, which: Extremal, depth: usize) -> Result<SymbolWord> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    Ok(extremal_seq(shape, which).truncate(depth))
}
