use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;

use super::ElementaryEquivalence;
use crate::intlat::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SseBounds {
    /// Largest inner dimension of a factorization `A = CD`.
    pub inner_dim: usize,
    /// Largest entry of `C` and `D`.
    pub entry: u32,
    /// Longest chain explored.
    pub chain: usize,
}

impl Default for SseBounds {
    fn default() -> Self {
        SseBounds {
            inner_dim: 3,
            entry: 2,
            chain: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SseResult {
    /// Consecutive elementary equivalences leading from `A` to `B`.
    Found(Vec<ElementaryEquivalence>),
    /// Nothing within the bounds; says nothing about non-equivalence.
    NotFound,
}

/// Breadth-first search for a chain of elementary equivalences from `a` to
/// `b` (exact matrix equality) within the bounds.
pub fn sse_search(a: &IntMatrix, b: &IntMatrix, bounds: SseBounds) -> SseResult {
    if a == b {
        return SseResult::Found(Vec::new());
    }
    let mut parent: HashMap<IntMatrix, Option<(IntMatrix, IntMatrix, IntMatrix)>> =
        HashMap::from([(a.clone(), None)]);
    let mut queue = VecDeque::from([(a.clone(), 0usize)]);
    while let Some((m, depth)) = queue.pop_front() {
        if depth == bounds.chain {
            continue;
        }
        for (c, d) in factorizations(&m, bounds) {
            let next = d.mul(&c);
            if parent.contains_key(&next) {
                continue;
            }
            if ElementaryEquivalence::new(&c, &d).is_err() {
                continue;
            }
            parent.insert(next.clone(), Some((m.clone(), c, d)));
            if &next == b {
                return SseResult::Found(unwind(&parent, b));
            }
            queue.push_back((next, depth + 1));
        }
    }
    SseResult::NotFound
}

fn unwind(
    parent: &HashMap<IntMatrix, Option<(IntMatrix, IntMatrix, IntMatrix)>>,
    end: &IntMatrix,
) -> Vec<ElementaryEquivalence> {
    let mut chain = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, c, d))) = parent.get(&cur) {
        chain.push(ElementaryEquivalence::new(c, d).expect("validated during search"));
        cur = prev.clone();
    }
    chain.reverse();
    chain
}

/// All `(C, D)` with `CD = m`, inner dimension and entries within bounds.
fn factorizations(m: &IntMatrix, bounds: SseBounds) -> Vec<(IntMatrix, IntMatrix)> {
    let n = m.rows();
    let e = bounds.entry as i64;
    let mut out = Vec::new();
    for k in 1..=bounds.inner_dim {
        let vectors = all_vectors(k, e);
        for cflat in all_vectors(n * k, e) {
            let c = IntMatrix::from_rows(&cflat.chunks(k).map(<[i64]>::to_vec).collect::<Vec<_>>());
            // solve C d_j = m_j column by column
            let mut columns: Vec<Vec<&Vec<i64>>> = Vec::with_capacity(n);
            for j in 0..n {
                let target: Vec<BigInt> = (0..n).map(|i| m[(i, j)].clone()).collect();
                let sols: Vec<&Vec<i64>> = vectors
                    .iter()
                    .filter(|v| {
                        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                        c.mul_vec(&vb) == target
                    })
                    .collect();
                if sols.is_empty() {
                    break;
                }
                columns.push(sols);
            }
            if columns.len() < n {
                continue;
            }
            let mut choice = vec![0usize; n];
            loop {
                let mut d = IntMatrix::zeros(k, n);
                for j in 0..n {
                    for (i, &x) in columns[j][choice[j]].iter().enumerate() {
                        d[(i, j)] = BigInt::from(x);
                    }
                }
                out.push((c.clone(), d));
                let mut j = 0;
                while j < n {
                    choice[j] += 1;
                    if choice[j] < columns[j].len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j == n {
                    break;
                }
            }
        }
    }
    out
}

fn all_vectors(len: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}
