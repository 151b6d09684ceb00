use std::fmt;
use std::ops::Deref;

use super::{max_words, SftPresentation, Symbol};
use crate::error::{Error, Result};

/// An admissible word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(p: &SftPresentation, symbols: Vec<Symbol>) -> Result<Self> {
        if p.is_admissible(&symbols) {
            Ok(Word(symbols))
        } else {
            Err(Error::Inadmissible(format!("word {:?}", symbols)))
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| (s + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// `B_k` stored flat in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordTable {
    k: usize,
    data: Vec<Symbol>,
}

impl WordTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[Symbol] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.data.chunks_exact(self.k)
    }
}

/// Position of a word of fixed length in the lexicographic order of `B_k`.
#[derive(Debug, Clone)]
pub struct Ranker<'a> {
    p: &'a SftPresentation,
    k: usize,
    /// `counts[m][s]`: number of admissible words of length `m` starting with `s`.
    counts: Vec<Vec<u64>>,
    /// `first[s]`: number of words of length `k` starting below `s`.
    first: Vec<u64>,
}

impl<'a> Ranker<'a> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self, w: &[Symbol]) -> Option<usize> {
        if w.len() != self.k || !self.p.is_admissible(w) {
            return None;
        }
        Some(self.rank_unchecked(w))
    }

    /// Rank of a word known to be admissible and of length `k`.
    pub fn rank_unchecked(&self, w: &[Symbol]) -> usize {
        let mut r = self.first[w[0] as usize];
        for i in 1..w.len() {
            let rest = &self.counts[self.k - i];
            for &t in self.p.followers(w[i - 1]) {
                if t >= w[i] {
                    break;
                }
                r += rest[t as usize];
            }
        }
        r as usize
    }
}

impl SftPresentation {
    /// `|B_k|`, saturating at `u64::MAX`.
    pub fn word_count(&self, k: usize) -> u64 {
        if k == 0 {
            return 1;
        }
        self.counts_upto(k)[k].iter().fold(0u64, |a, &b| a.saturating_add(b))
    }

    fn counts_upto(&self, k: usize) -> Vec<Vec<u64>> {
        let n = self.n_symbols();
        let mut counts = vec![vec![0u64; n]; k + 1];
        if k >= 1 {
            counts[1] = vec![1; n];
        }
        for m in 2..=k {
            for s in 0..n {
                counts[m][s] = self
                    .followers(s as Symbol)
                    .iter()
                    .fold(0u64, |a, &t| a.saturating_add(counts[m - 1][t as usize]));
            }
        }
        counts
    }

    fn check_cap(&self, k: usize) -> Result<u64> {
        let count = self.word_count(k);
        let limit = max_words();
        if count > limit {
            return Err(Error::TooManyWords { k, count, limit });
        }
        Ok(count)
    }

    /// `B_k` in lexicographic order.
    pub fn words(&self, k: usize) -> Result<Vec<Word>> {
        Ok(self
            .word_table(k)?
            .iter()
            .map(|w| Word(w.to_vec()))
            .collect())
    }

    pub fn word_table(&self, k: usize) -> Result<WordTable> {
        assert!(k >= 1, "word length must be positive");
        let count = self.check_cap(k)?;
        let mut data = Vec::with_capacity(count as usize * k);
        let mut buf = Vec::with_capacity(k);
        for s in 0..self.n_symbols() as Symbol {
            buf.push(s);
            self.extend_words(&mut buf, k, &mut data);
            buf.pop();
        }
        Ok(WordTable { k, data })
    }

    fn extend_words(&self, buf: &mut Vec<Symbol>, k: usize, out: &mut Vec<Symbol>) {
        if buf.len() == k {
            out.extend_from_slice(buf);
            return;
        }
        let last = *buf.last().expect("nonempty");
        for &t in self.followers(last) {
            buf.push(t);
            self.extend_words(buf, k, out);
            buf.pop();
        }
    }

    pub fn ranker(&self, k: usize) -> Result<Ranker<'_>> {
        assert!(k >= 1, "word length must be positive");
        self.check_cap(k)?;
        let counts = self.counts_upto(k);
        let mut first = Vec::with_capacity(self.n_symbols());
        let mut acc = 0u64;
        for &c in &counts[k] {
            first.push(acc);
            acc += c;
        }
        Ok(Ranker {
            p: self,
            k,
            counts,
            first,
        })
    }

    /// Validates and wraps a symbol sequence.
    pub fn word(&self, symbols: Vec<Symbol>) -> Result<Word> {
        Word::new(self, symbols)
    }

    /// Primitive cyclically admissible words of each length up to `max_len`
    /// that are lexicographically least among their rotations.
    pub fn primitive_cycles(&self, max_len: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for m in 1..=max_len {
            for w in self.word_table(m)?.iter() {
                if self.follows(w[m - 1], w[0]) && is_primitive(w) && is_least_rotation(w) {
                    out.push(Word(w.to_vec()));
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn is_primitive(w: &[Symbol]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n % d == 0).all(|d| w[d..] != w[..n - d])
}

pub(crate) fn is_least_rotation(w: &[Symbol]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        let rot = w[r..].iter().chain(&w[..r]);
        w.iter().le(rot)
    })
}
