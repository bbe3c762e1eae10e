//! Alphabet, twisted order, compatibility conditions and admissibility.

mod alphabet;
mod kneading;
mod order;

pub use alphabet::{
    epsilon, extremal_seq, extremal_sequence, word_sign, Extremal, Shape, Symbol, SymbolSeq,
    SymbolWord,
};
pub(crate) use alphabet::RankSeq;
pub use kneading::{
    check_kneading_admissible, is_admissible_word, kneading_gg, AdmissibilityReport, Condition,
    KneadingData, Violation,
};
pub use order::{compare_sequences, twisted_compare, TwistedOrder};
