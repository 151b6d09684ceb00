//! Presentations of one-sided topological Markov shifts, admissible words
//! and eventually periodic points.

mod point;
mod presentation;
mod recode;
mod words;

use std::sync::OnceLock;

pub use point::{canonical_form, EventuallyPeriodicPoint};
pub use presentation::{
    Edge, IrreducibilityCertificate, Presentation, PresentationKind, SftPresentation,
    MAX_VERTICES,
};
pub(crate) use presentation::MAX_DERIVED_VERTICES;
pub use recode::{EdgeForm, HigherBlock};
pub use words::{Ranker, Word, WordTable};

/// Internal symbol index (`0..n_symbols`).
pub type Symbol = u32;

pub const DEFAULT_MAX_WORDS: u64 = 1_000_000;

/// Cap on `|B_k|` for any enumeration, read once from `SFTLAB_MAX_WORDS`.
pub fn max_words() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("SFTLAB_MAX_WORDS")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_MAX_WORDS)
    })
}
