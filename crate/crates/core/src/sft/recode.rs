use std::sync::Arc;

use super::{
    Presentation, PresentationKind, SftPresentation, Symbol, WordTable, MAX_DERIVED_VERTICES,
};
use crate::error::Result;
use crate::intlat::IntMatrix;

/// The `k`-block recoding: an edge shift on the graph with vertices `B_k`
/// and edges `B_{k+1}`. Edge symbol `i` is the `i`-th word of `B_{k+1}`.
#[derive(Debug, Clone)]
pub struct HigherBlock {
    base: Presentation,
    presentation: Presentation,
    k: usize,
    vertex_words: WordTable,
    edge_words: WordTable,
}

impl HigherBlock {
    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Vertex dictionary: vertex `i` is `vertex_words().get(i)`.
    pub fn vertex_words(&self) -> &WordTable {
        &self.vertex_words
    }

    /// Edge dictionary: symbol `e` is `edge_words().get(e)`.
    pub fn edge_words(&self) -> &WordTable {
        &self.edge_words
    }

    pub fn edge_word(&self, e: Symbol) -> &[Symbol] {
        self.edge_words.get(e as usize)
    }

    /// Recodes a base word of length `n >= k+1` into `n - k` edge symbols.
    pub fn encode(&self, w: &[Symbol]) -> Option<Vec<Symbol>> {
        let ranker = self.base.ranker(self.k + 1).ok()?;
        w.windows(self.k + 1)
            .map(|win| ranker.rank(win).map(|r| r as Symbol))
            .collect()
    }

    /// Inverse of [`encode`](Self::encode) on nonempty edge words.
    pub fn decode(&self, edges: &[Symbol]) -> Vec<Symbol> {
        let mut out = match edges.first() {
            Some(&e) => self.edge_word(e).to_vec(),
            None => return Vec::new(),
        };
        out.extend(edges[1..].iter().map(|&e| self.edge_word(e)[self.k]));
        out
    }
}

/// Edge-shift form of a presentation. For vertex input, edge symbol `e`
/// stands for the allowed pair `pairs[e]`.
#[derive(Debug, Clone)]
pub struct EdgeForm {
    presentation: Presentation,
    pairs: Option<Vec<(Symbol, Symbol)>>,
}

impl EdgeForm {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn pairs(&self) -> Option<&[(Symbol, Symbol)]> {
        self.pairs.as_deref()
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.is_none()
    }

    /// Image of an original symbol stream `x_1 x_2 ...` as `(x_1x_2)(x_2x_3)...`.
    pub fn map_word(&self, w: &[Symbol]) -> Vec<Symbol> {
        match &self.pairs {
            None => w.to_vec(),
            Some(pairs) => w
                .windows(2)
                .map(|p| {
                    pairs
                        .binary_search(&(p[0], p[1]))
                        .expect("admissible pair") as Symbol
                })
                .collect(),
        }
    }
}

impl SftPresentation {
    pub fn higher_block(self: &Arc<Self>, k: usize) -> Result<HigherBlock> {
        assert!(k >= 1, "block length must be positive");
        let vertex_words = self.word_table(k)?;
        let edge_words = self.word_table(k + 1)?;
        let n = vertex_words.len();
        if n > MAX_DERIVED_VERTICES {
            return Err(crate::Error::TooLarge(format!(
                "{k}-block recoding has {n} vertices"
            )));
        }
        let ranker = self.ranker(k)?;
        let mut m = IntMatrix::zeros(n, n);
        for w in edge_words.iter() {
            let a = ranker.rank_unchecked(&w[..k]);
            let b = ranker.rank_unchecked(&w[1..]);
            m[(a, b)] += 1;
        }
        let presentation = SftPresentation::build(&m, PresentationKind::Edge, None, MAX_DERIVED_VERTICES)?;
        Ok(HigherBlock {
            base: Arc::clone(self),
            presentation,
            k,
            vertex_words,
            edge_words,
        })
    }

    pub fn to_edge_form(self: &Arc<Self>) -> Result<EdgeForm> {
        match self.kind() {
            PresentationKind::Edge => Ok(EdgeForm {
                presentation: Arc::clone(self),
                pairs: None,
            }),
            PresentationKind::Vertex => {
                let presentation = SftPresentation::build(
                    &self.adjacency_matrix(),
                    PresentationKind::Edge,
                    None,
                    MAX_DERIVED_VERTICES,
                )?;
                let pairs = presentation
                    .edges()
                    .iter()
                    .map(|e| (e.source, e.target))
                    .collect();
                Ok(EdgeForm {
                    presentation,
                    pairs: Some(pairs),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertex(rows: &[Vec<i64>]) -> Presentation {
        SftPresentation::validate(&IntMatrix::from_rows(rows), PresentationKind::Vertex).unwrap()
    }

    #[test]
    fn fibonacci_blocks() {
        let p = vertex(&[vec![1, 1], vec![1, 0]]);
        let h1 = p.higher_block(1).unwrap();
        assert_eq!(h1.presentation().n_vertices(), 2);
        assert_eq!(h1.presentation().n_symbols(), 3);
        let h2 = p.higher_block(2).unwrap();
        assert_eq!(h2.presentation().n_vertices(), 3);
        assert_eq!(h2.presentation().n_symbols(), 5);
        let w = vec![0, 0, 1, 0, 1, 0, 0];
        let e = h2.encode(&w).unwrap();
        assert!(h2.presentation().is_admissible(&e));
        assert_eq!(h2.decode(&e), w);
    }

    #[test]
    fn full_two_shift_block() {
        let p = vertex(&[vec![1, 1], vec![1, 1]]);
        let h = p.higher_block(1).unwrap();
        assert_eq!(h.presentation().n_vertices(), 2);
        assert_eq!(h.presentation().n_symbols(), 4);
    }

    #[test]
    fn edge_forms() {
        let fib = vertex(&[vec![1, 1], vec![1, 0]]);
        let e = fib.to_edge_form().unwrap();
        assert_eq!(e.presentation().n_symbols(), 3);
        assert_eq!(e.map_word(&[0, 0, 1, 0]), vec![0, 1, 2]);
        assert_eq!(vertex(&[vec![1, 1], vec![1, 1]]).to_edge_form().unwrap().presentation().n_symbols(), 4);
        let g = SftPresentation::validate(
            &IntMatrix::from_rows(&[vec![0, 2], vec![1, 0]]),
            PresentationKind::Edge,
        )
        .unwrap();
        let ge = g.to_edge_form().unwrap();
        assert!(ge.is_identity());
        assert!(Arc::ptr_eq(ge.presentation(), &g));
        assert_eq!(ge.map_word(&[0, 2, 1]), vec![0, 2, 1]);
    }

    #[test]
    fn edge_word_counts_match_matrix_powers() {
        let p = SftPresentation::validate(
            &IntMatrix::from_rows(&[vec![0, 2, 1], vec![1, 0, 1], vec![1, 1, 0]]),
            PresentationKind::Edge,
        )
        .unwrap();
        let a = p.adjacency_matrix();
        let mut power = IntMatrix::identity(3);
        for k in 1..=5 {
            power = power.mul(&a);
            let total: num_bigint::BigInt = power.to_rows().into_iter().flatten().sum();
            assert_eq!(num_bigint::BigInt::from(p.word_count(k)), total);
        }
    }
}
