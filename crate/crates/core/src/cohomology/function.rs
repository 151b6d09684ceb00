use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sft::{EventuallyPeriodicPoint, Presentation, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Integer,
    Rational,
}

impl Ring {
    pub fn join(self, other: Ring) -> Ring {
        if self == Ring::Integer && other == Ring::Integer {
            Ring::Integer
        } else {
            Ring::Rational
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Ring::Integer => "Z",
            Ring::Rational => "Q",
        }
    }
}

/// A function on the shift space depending on the first `depth` symbols,
/// stored as a table over `B_depth` in word order. Always normalized to
/// minimal depth.
#[derive(Debug, Clone)]
pub struct LocallyConstantFunction {
    presentation: Presentation,
    depth: usize,
    table: Vec<BigRational>,
    ring: Ring,
}

impl PartialEq for LocallyConstantFunction {
    fn eq(&self, other: &Self) -> bool {
        same_presentation(&self.presentation, &other.presentation)
            && self.depth == other.depth
            && self.table == other.table
    }
}

impl Eq for LocallyConstantFunction {}

pub(crate) fn same_presentation(a: &Presentation, b: &Presentation) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LocallyConstantFunction {
    pub fn new(
        presentation: &Presentation,
        depth: usize,
        table: Vec<BigRational>,
        ring: Ring,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidFunction("depth must be at least 1".into()));
        }
        let expected = presentation.word_table(depth)?.len();
        if table.len() != expected {
            return Err(Error::InvalidFunction(format!(
                "table has {} entries, |B_{depth}| = {expected}",
                table.len()
            )));
        }
        if ring == Ring::Integer && !table.iter().all(|v| v.is_integer()) {
            return Err(Error::InvalidFunction(
                "non-integer value in an integer-valued function".into(),
            ));
        }
        Ok(Self::normalized(presentation, depth, table, ring))
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(
        presentation: &Presentation,
        depth: usize,
        table: &[T],
    ) -> Result<Self> {
        let table = table
            .iter()
            .map(|v| BigRational::from_integer(v.clone().into()))
            .collect();
        Self::new(presentation, depth, table, Ring::Integer)
    }

    /// Tabulates `value` over `B_depth`.
    pub fn from_fn(
        presentation: &Presentation,
        depth: usize,
        ring: Ring,
        mut value: impl FnMut(&[Symbol]) -> BigRational,
    ) -> Result<Self> {
        let table = presentation.word_table(depth)?.iter().map(&mut value).collect();
        Self::new(presentation, depth, table, ring)
    }

    pub fn constant(presentation: &Presentation, c: BigRational) -> Self {
        let ring = if c.is_integer() { Ring::Integer } else { Ring::Rational };
        Self {
            presentation: Arc::clone(presentation),
            depth: 1,
            table: vec![c; presentation.n_symbols()],
            ring,
        }
    }

    /// The constant function `1`.
    pub fn one(presentation: &Presentation) -> Self {
        Self::constant(presentation, BigRational::one())
    }

    pub fn zero(presentation: &Presentation) -> Self {
        Self::constant(presentation, BigRational::zero())
    }

    /// Indicator of the cylinder of an admissible word.
    pub fn indicator(presentation: &Presentation, word: &[Symbol]) -> Result<Self> {
        if word.is_empty() {
            return Ok(Self::one(presentation));
        }
        if !presentation.is_admissible(word) {
            return Err(Error::Inadmissible(presentation.render(word)));
        }
        Self::from_fn(presentation, word.len(), Ring::Integer, |w| {
            if w == word {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    fn normalized(presentation: &Presentation, depth: usize, table: Vec<BigRational>, ring: Ring) -> Self {
        let words = presentation.word_table(depth).expect("depth already enumerated");
        let mut depth = depth;
        let mut table = table;
        // words sharing a prefix of length j form contiguous runs
        for j in 1..depth {
            let mut reduced: Vec<BigRational> = Vec::new();
            let mut ok = true;
            let mut prev: Option<&[Symbol]> = None;
            for (w, v) in words.iter().zip(&table) {
                let head = &w[..j];
                if prev == Some(head) {
                    if reduced.last() != Some(v) {
                        ok = false;
                        break;
                    }
                } else {
                    reduced.push(v.clone());
                    prev = Some(head);
                }
            }
            if ok {
                depth = j;
                table = reduced;
                break;
            }
        }
        Self {
            presentation: Arc::clone(presentation),
            depth,
            table,
            ring,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn table(&self) -> &[BigRational] {
        &self.table
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn with_ring(mut self, ring: Ring) -> Result<Self> {
        if ring == Ring::Integer && !self.table.iter().all(|v| v.is_integer()) {
            return Err(Error::InvalidFunction("function has non-integer values".into()));
        }
        self.ring = ring;
        Ok(self)
    }

    pub fn is_integer_valued(&self) -> bool {
        self.table.iter().all(|v| v.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Zero::is_zero)
    }

    /// Value on the cylinder of `w`; `w` must be admissible with `|w| >= depth`.
    pub fn value(&self, w: &[Symbol]) -> Result<&BigRational> {
        if w.len() < self.depth {
            return Err(Error::InvalidFunction(format!(
                "need {} symbols, got {}",
                self.depth,
                w.len()
            )));
        }
        let ranker = self.presentation.ranker(self.depth)?;
        let r = ranker
            .rank(&w[..self.depth])
            .ok_or_else(|| Error::Inadmissible(self.presentation.render(w)))?;
        Ok(&self.table[r])
    }

    pub fn evaluate(&self, x: &EventuallyPeriodicPoint) -> BigRational {
        self.value(&x.prefix(self.depth))
            .expect("points are admissible")
            .clone()
    }

    /// The table of this function over `B_d`, `d >= depth`.
    pub fn table_at(&self, d: usize) -> Result<Vec<BigRational>> {
        assert!(d >= self.depth);
        if d == self.depth {
            return Ok(self.table.clone());
        }
        let ranker = self.presentation.ranker(self.depth)?;
        Ok(self
            .presentation
            .word_table(d)?
            .iter()
            .map(|w| self.table[ranker.rank_unchecked(&w[..self.depth])].clone())
            .collect())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_presentation(&self.presentation, &other.presentation) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(&BigRational, &BigRational) -> BigRational,
        ring: Ring,
    ) -> Result<Self> {
        self.check_same(other)?;
        let d = self.depth.max(other.depth);
        let a = self.table_at(d)?;
        let b = other.table_at(d)?;
        let table = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
        Ok(Self::normalized(&self.presentation, d, table, ring))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y, self.ring.join(other.ring))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y, self.ring.join(other.ring))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x * y, self.ring.join(other.ring))
    }

    pub fn negate(&self) -> Self {
        Self {
            presentation: Arc::clone(&self.presentation),
            depth: self.depth,
            table: self.table.iter().map(|v| -v).collect(),
            ring: self.ring,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let ring = if c.is_integer() { self.ring } else { Ring::Rational };
        let table = self.table.iter().map(|v| v * c).collect();
        Self::normalized(&self.presentation, self.depth, table, ring)
    }

    /// `f o sigma`.
    pub fn pullback_sigma(&self) -> Result<Self> {
        let k = self.depth;
        let ranker = self.presentation.ranker(k)?;
        let table = self
            .presentation
            .word_table(k + 1)?
            .iter()
            .map(|w| self.table[ranker.rank_unchecked(&w[1..])].clone())
            .collect();
        Ok(Self::normalized(&self.presentation, k + 1, table, self.ring))
    }

    /// `f^n = sum_{i<n} f o sigma^i`.
    pub fn partial_sum(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Ok(Self::zero(&self.presentation).with_ring(self.ring)?);
        }
        let k = self.depth;
        let ranker = self.presentation.ranker(k)?;
        let table = self
            .presentation
            .word_table(k + n - 1)?
            .iter()
            .map(|w| {
                (0..n)
                    .map(|i| &self.table[ranker.rank_unchecked(&w[i..i + k])])
                    .sum()
            })
            .collect();
        Ok(Self::normalized(&self.presentation, k + n - 1, table, self.ring))
    }

    /// `b - b o sigma`.
    pub fn coboundary(&self) -> Result<Self> {
        self.sub(&self.pullback_sigma()?)
    }

    /// Sum of `f` over one period of the periodic point `cycle^inf`.
    pub fn orbit_sum(&self, cycle: &[Symbol]) -> Result<BigRational> {
        if !self.presentation.is_cyclically_admissible(cycle) {
            return Err(Error::NotCyclicallyAdmissible);
        }
        let ranker = self.presentation.ranker(self.depth)?;
        let m = cycle.len();
        let mut window = Vec::with_capacity(self.depth);
        let mut total = BigRational::zero();
        for i in 0..m {
            window.clear();
            window.extend((0..self.depth).map(|j| cycle[(i + j) % m]));
            total += &self.table[ranker.rank_unchecked(&window)];
        }
        Ok(total)
    }
}

impl fmt::Display for LocallyConstantFunction {
    /// `depth=k ring=R` followed by one `word value` line per word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "depth={} ring={}", self.depth, self.ring.symbol())?;
        let words = self.presentation.word_table(self.depth).map_err(|_| fmt::Error)?;
        for (w, v) in words.iter().zip(&self.table) {
            write!(f, "\n{} {}", self.presentation.render(w), v)?;
        }
        Ok(())
    }
}
