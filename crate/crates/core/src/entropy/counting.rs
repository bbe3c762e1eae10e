//! Counting admissible words and negative periodic words.
//!
//! Admissibility of a word only constrains each position against the suffix
//! that follows it, so the set of admissible words is closed under taking
//! suffixes. The search therefore grows words to the left: prepending a
//! symbol only requires checking the new first position.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::symbolic::{KneadingData, RankSeq};

/// Neg count together with the number of candidate words rejected because a
/// comparison against a truncated kneading sequence was still tied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegCount {
    pub count: BigUint,
    pub rejected_ties: u64,
}

enum Cmp {
    Less,
    Equal,
    Greater,
    /// Tied on every known symbol of the kneading sequence.
    Short(usize),
}

struct Bound {
    seq: RankSeq,
    flat: Vec<u8>,
    avail: usize,
}

impl Bound {
    fn new(seq: RankSeq, len: usize) -> Self {
        let flat = seq.materialize(len);
        let avail = seq.available();
        Bound { seq, flat, avail }
    }

    fn is_periodic(&self) -> bool {
        !self.seq.period.is_empty()
    }
}

/// Rank-encoded kneading data: bounds `K_0 … K_{m+1}` and the sign of each rank.
pub(crate) struct Engine {
    m: usize,
    bounds: Vec<Bound>,
    sign: Vec<i8>,
}

impl Engine {
    pub fn new(k: &KneadingData, len: usize) -> Self {
        let m = k.modality();
        let shape = k.shape();
        let bounds = (0..=m + 1).map(|j| Bound::new(k.bound(j).ranks(), len)).collect();
        let sign = (0..=2 * m)
            .map(|r| if r % 2 == 0 { shape.sigma(r / 2) } else { 0 })
            .collect();
        Engine { m, bounds, sign }
    }

    /// Compare `word(0), word(1), …, word(n−1)` with bound `j` over at most `n` symbols.
    #[inline]
    fn compare(&self, n: usize, word: impl Fn(usize) -> u8, j: usize) -> Cmp {
        let b = &self.bounds[j];
        let mut product = 1i8;
        for i in 0..n {
            if i >= b.avail {
                return Cmp::Short(i);
            }
            let y = if i < b.flat.len() { b.flat[i] } else { b.seq.get(i).unwrap_or(0) };
            let x = word(i);
            if x != y {
                return if (x < y) == (product > 0) { Cmp::Less } else { Cmp::Greater };
            }
            product *= self.sign[x as usize];
        }
        Cmp::Equal
    }

    fn within(&self, lap: usize, left: &Cmp, right: &Cmp) -> bool {
        let (lo_ok, hi_ok) = if self.sign[2 * lap] > 0 {
            (!matches!(left, Cmp::Less), !matches!(right, Cmp::Greater))
        } else {
            (!matches!(left, Cmp::Greater), !matches!(right, Cmp::Less))
        };
        lo_ok && hi_ok
    }

    fn undecidable(j: usize, needed: usize, available: usize) -> Error {
        Error::Undecidable {
            sequence: j,
            needed,
            available,
        }
    }

    /// Whether `I_lap` may be prepended to the admissible word stored reversed in `stack`.
    fn accepts(&self, lap: usize, stack: &[u8]) -> Result<bool> {
        let n = stack.len();
        let word = |i: usize| stack[n - 1 - i];
        let left = self.compare(n, word, lap);
        if let Cmp::Short(i) = left {
            return Err(Self::undecidable(lap, n, i));
        }
        let right = self.compare(n, word, lap + 1);
        if let Cmp::Short(i) = right {
            return Err(Self::undecidable(lap + 1, n, i));
        }
        Ok(self.within(lap, &left, &right))
    }

    /// Depth-first enumeration of admissible acritical words up to length
    /// `k_max`; `visit` sees every admissible word (reversed) once.
    fn walk(&self, k_max: usize, mut visit: impl FnMut(&[u8])) -> Result<()> {
        let mut stack: Vec<u8> = Vec::with_capacity(k_max);
        // next symbol to try at each depth
        let mut next: Vec<usize> = vec![0; k_max + 1];
        visit(&stack);
        if k_max == 0 {
            return Ok(());
        }
        loop {
            let depth = stack.len();
            if depth < k_max && next[depth] <= self.m {
                let lap = next[depth];
                next[depth] += 1;
                if self.accepts(lap, &stack)? {
                    stack.push((2 * lap) as u8);
                    visit(&stack);
                    next[depth + 1] = 0;
                }
            } else if stack.pop().is_none() {
                return Ok(());
            }
        }
    }

    pub fn adm_counts(&self, k_max: usize) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; k_max + 1];
        self.walk(k_max, |w| counts[w.len()] += 1)?;
        Ok(counts)
    }

    /// Whether the periodic word `(w)^∞` is admissible. Returns `None` when a
    /// comparison with a truncated kneading sequence is still tied.
    fn periodic_admissible(&self, w: &[u8]) -> Option<bool> {
        let p = w.len();
        for r in 0..p {
            let lap = (w[r] / 2) as usize;
            let word = |i: usize| w[(r + 1 + i) % p];
            let mut cmps = [Cmp::Equal, Cmp::Equal];
            for (slot, j) in [lap, lap + 1].into_iter().enumerate() {
                let b = &self.bounds[j];
                let depth = if b.is_periodic() {
                    b.seq.prefix.len() + p.lcm(&b.seq.period.len())
                } else {
                    (4 * p).min(b.avail)
                };
                let c = match self.compare(depth, word, j) {
                    Cmp::Equal if !b.is_periodic() => return None,
                    Cmp::Short(_) => return None,
                    c => c,
                };
                cmps[slot] = c;
            }
            if !self.within(lap, &cmps[0], &cmps[1]) {
                return Some(false);
            }
        }
        Some(true)
    }

    pub fn neg_count(&self, p: usize) -> Result<NegCount> {
        let mut count = 0u64;
        let mut rejected_ties = 0u64;
        let mut fwd = vec![0u8; p];
        self.walk(p, |stack| {
            if stack.len() != p {
                return;
            }
            let sign: i8 = stack.iter().map(|&r| self.sign[r as usize]).product();
            if sign >= 0 {
                return;
            }
            for (i, &r) in stack.iter().rev().enumerate() {
                fwd[i] = r;
            }
            match self.periodic_admissible(&fwd) {
                Some(true) => count += 1,
                Some(false) => {}
                None => rejected_ties += 1,
            }
        })?;
        Ok(NegCount {
            count: BigUint::from(count),
            rejected_ties,
        })
    }
}

/// `Adm(K, k)`: the number of admissible acritical words of length `k`.
pub fn adm_count(k: &KneadingData, len: usize) -> Result<BigUint> {
    Ok(adm_counts(k, len)?.pop().unwrap_or_default())
}

/// `Adm(K, 0) … Adm(K, k_max)` from a single search.
pub fn adm_counts(k: &KneadingData, k_max: usize) -> Result<Vec<BigUint>> {
    let engine = Engine::new(k, k_max);
    Ok(engine.adm_counts(k_max)?.into_iter().map(BigUint::from).collect())
}

/// `Neg(K, p)`: admissible periodic words of period `p` with negative sign.
pub fn neg_count(k: &KneadingData, p: usize) -> Result<BigUint> {
    Ok(neg_count_report(k, p)?.count)
}

pub fn neg_count_report(k: &KneadingData, p: usize) -> Result<NegCount> {
    if p == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    Engine::new(k, 4 * p).neg_count(p)
}
