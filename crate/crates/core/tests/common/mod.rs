//! Brute-force reference implementations and random sampling helpers.

#![allow(dead_code)]

use kneading_core::families::{default_tol, kneading_data_of, make_family_map, Family, IntervalMap, ParamVector, RealInterval};
use kneading_core::symbolic::{KneadingData, Shape, Symbol, SymbolSeq};
use rand::Rng;

/// Symbols extracted for sampled kneading data.
pub const SAMPLE_DEPTH: usize = 64;

/// Geometric position of a symbol: `I_j ↦ 2j`, `C_j ↦ 2j − 1`.
fn position(s: Symbol) -> usize {
    match s {
        Symbol::Interval(j) => 2 * j,
        Symbol::Fold(j) => 2 * j - 1,
    }
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
pub enum Verdict {
    Below,
    Tie,
    Above,
    /// The reference ran out while the word was still tied with it.
    Unknown,
}

/// A kneading sequence spelled out as positions, with `None` past a truncation.
pub struct Reference {
    symbols: Vec<Option<usize>>,
    periodic: bool,
}

impl Reference {
    fn new(seq: &SymbolSeq, len: usize) -> Self {
        Reference {
            symbols: (0..len).map(|i| seq.get(i).map(position)).collect(),
            periodic: seq.is_infinite(),
        }
    }
}

/// Naive admissibility and counting against explicit kneading data.
pub struct Oracle {
    m: usize,
    sigma: Vec<i8>,
    bounds: Vec<Reference>,
}

impl Oracle {
    pub fn new(k: &KneadingData, len: usize) -> Self {
        let m = k.modality();
        let shape = k.shape();
        Oracle {
            m,
            sigma: (0..=m).map(|j| shape.sigma(j)).collect(),
            bounds: (0..=m + 1).map(|j| Reference::new(k.bound(j), len)).collect(),
        }
    }

    /// Twisted comparison of an acritical word (lap indices) with bound `j`.
    pub fn compare(&self, word: &[usize], j: usize) -> Verdict {
        let mut sign = 1i8;
        for (i, &lap) in word.iter().enumerate() {
            let Some(&Some(y)) = self.bounds[j].symbols.get(i) else {
                return Verdict::Unknown;
            };
            let x = 2 * lap;
            if x != y {
                return if (x < y) == (sign > 0) { Verdict::Below } else { Verdict::Above };
            }
            sign *= self.sigma[lap];
        }
        Verdict::Tie
    }

    fn inside(&self, lap: usize, lo: Verdict, hi: Verdict) -> bool {
        if self.sigma[lap] > 0 {
            lo != Verdict::Below && hi != Verdict::Above
        } else {
            lo != Verdict::Above && hi != Verdict::Below
        }
    }

    /// Every position of the word satisfies the lap bounds. Ties and exhausted
    /// references count as satisfied.
    pub fn admissible(&self, word: &[usize]) -> bool {
        (0..word.len()).all(|i| {
            let lap = word[i];
            let rest = &word[i + 1..];
            self.inside(lap, self.compare(rest, lap), self.compare(rest, lap + 1))
        })
    }

    /// All words of length `k` over `m + 1` letters.
    pub fn words(&self, k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let base = self.m + 1;
        (0..base.pow(k as u32)).map(move |mut code| {
            let mut w = vec![0; k];
            for slot in w.iter_mut().rev() {
                *slot = code % base;
                code /= base;
            }
            w
        })
    }

    pub fn adm(&self, k: usize) -> u64 {
        self.words(k).filter(|w| self.admissible(w)).count() as u64
    }

    fn sign(&self, w: &[usize]) -> i8 {
        w.iter().map(|&j| self.sigma[j]).product()
    }

    /// Whether `(w)^∞` is admissible, comparing each cyclic suffix as far as
    /// the bound is known. `None` when a comparison with a truncated bound
    /// stays tied to its end.
    pub fn periodic_admissible(&self, w: &[usize]) -> Option<bool> {
        let p = w.len();
        let reach = self.bounds.iter().map(|b| b.symbols.len()).max().unwrap_or(0);
        for r in 0..p {
            let lap = w[r];
            let rest: Vec<usize> = (0..reach).map(|i| w[(r + 1 + i) % p]).collect();
            let mut verdicts = [Verdict::Tie; 2];
            for (slot, j) in [lap, lap + 1].into_iter().enumerate() {
                let v = self.compare(&rest, j);
                let tied = matches!(v, Verdict::Tie | Verdict::Unknown);
                if tied && !self.bounds[j].periodic {
                    return None;
                }
                verdicts[slot] = if tied { Verdict::Tie } else { v };
            }
            if !self.inside(lap, verdicts[0], verdicts[1]) {
                return Some(false);
            }
        }
        Some(true)
    }

    pub fn neg(&self, p: usize) -> u64 {
        self.words(p)
            .filter(|w| self.sign(w) < 0 && self.periodic_admissible(w) == Some(true))
            .count() as u64
    }
}

pub fn shape(s: &str) -> Shape {
    s.parse().unwrap()
}

pub fn map(family: Family, shape_text: &str, p: &[f64]) -> IntervalMap {
    make_family_map(family, &shape(shape_text), &ParamVector::new(p.to_vec()).unwrap(), RealInterval::unit()).unwrap()
}

pub fn kneading(f: &IntervalMap, depth: usize) -> KneadingData {
    kneading_data_of(f, depth, default_tol(f)).unwrap()
}

/// A uniformly random point of the parameter triangle.
pub fn triangle_point(rng: &mut impl Rng) -> [f64; 2] {
    loop {
        let p = [rng.gen::<f64>(), rng.gen::<f64>()];
        if p[0] + p[1] >= 1.0 {
            return p;
        }
    }
}

/// Kneading data of a random map of modality `m`, described by a label.
pub fn random_kneading(rng: &mut impl Rng, m: usize) -> (String, KneadingData) {
    let (family, shape_text, p) = if m == 1 {
        let family = if rng.gen_bool(0.5) { Family::Tent } else { Family::Quadratic };
        (family, "+-", vec![rng.gen_range(0.5..1.0)])
    } else {
        let family = if rng.gen_bool(0.5) { Family::Sawtooth } else { Family::Cubic };
        let shape_text = if rng.gen_bool(0.5) { "+-+" } else { "-+-" };
        (family, shape_text, triangle_point(rng).to_vec())
    };
    let f = map(family, shape_text, &p);
    (format!("{family} {shape_text} {p:?}"), kneading(&f, SAMPLE_DEPTH))
}
