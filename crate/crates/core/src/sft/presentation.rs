use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{max_words, Symbol};
use crate::error::{Error, Result};
use crate::intlat::IntMatrix;

/// Largest vertex count accepted from user input.
pub const MAX_VERTICES: usize = 64;

/// Vertex count limit for presentations derived internally (higher block
/// recodings, expansions, products).
pub(crate) const MAX_DERIVED_VERTICES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresentationKind {
    /// Symbols are vertices `1..=N`; requires a 0-1 matrix.
    Vertex,
    /// Symbols are the edges of the multigraph.
    Edge,
}

impl PresentationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PresentationKind::Vertex => "vertex",
            PresentationKind::Edge => "edge",
        }
    }
}

impl fmt::Display for PresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: u32,
    pub target: u32,
    /// Index among the parallel edges from `source` to `target`.
    pub parallel: u32,
}

/// BFS arborescences rooted at vertex 0: `out_parent[v]` is the tail of the
/// tree edge entering `v`; `in_parent[v]` is the head of the tree edge
/// leaving `v` towards the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    pub out_parent: Vec<Option<usize>>,
    pub in_parent: Vec<Option<usize>>,
}

impl IrreducibilityCertificate {
    pub fn verify(&self, adjacency: &[Vec<u32>]) -> bool {
        let n = adjacency.len();
        let tree_ok = |parent: &[Option<usize>], forward: bool| {
            (1..n).all(|v| {
                let mut cur = v;
                for _ in 0..n {
                    match parent[cur] {
                        Some(p) => {
                            let (a, b) = if forward { (p, cur) } else { (cur, p) };
                            if adjacency[a][b] == 0 {
                                return false;
                            }
                            cur = p;
                        }
                        None => return cur == 0,
                    }
                }
                false
            })
        };
        self.out_parent.len() == n
            && self.in_parent.len() == n
            && tree_ok(&self.out_parent, true)
            && tree_ok(&self.in_parent, false)
    }
}

/// An irreducible, non-permutation nonnegative integer matrix together with
/// the alphabet of its one-sided shift space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftPresentation {
    kind: PresentationKind,
    adjacency: Vec<Vec<u32>>,
    edges: Vec<Edge>,
    edge_start: Vec<usize>,
    labels: Vec<String>,
    followers: Vec<Vec<Symbol>>,
    certificate: IrreducibilityCertificate,
}

/// Presentations are shared between functions, transducers and moves.
pub type Presentation = Arc<SftPresentation>;

impl SftPresentation {
    /// Validates a user-supplied matrix.
    pub fn validate(matrix: &IntMatrix, kind: PresentationKind) -> Result<Presentation> {
        Self::build(matrix, kind, None, MAX_VERTICES)
    }

    /// Like [`validate`](Self::validate) with explicit symbol labels.
    pub fn validate_with_labels(
        matrix: &IntMatrix,
        kind: PresentationKind,
        labels: Vec<String>,
    ) -> Result<Presentation> {
        Self::build(matrix, kind, Some(labels), MAX_VERTICES)
    }

    pub(crate) fn build(
        matrix: &IntMatrix,
        kind: PresentationKind,
        labels: Option<Vec<String>>,
        max_vertices: usize,
    ) -> Result<Presentation> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let n = matrix.rows();
        if n == 0 {
            return Err(Error::NotIrreducible {
                from: 0,
                unreachable: 0,
            });
        }
        if n > max_vertices {
            return Err(Error::TooLarge(format!(
                "{n} vertices exceeds the supported {max_vertices}"
            )));
        }
        let cap = max_words();
        let mut adjacency = vec![vec![0u32; n]; n];
        let mut total = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                let x = &matrix[(i, j)];
                if x.is_negative() {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: x.to_string(),
                    });
                }
                if kind == PresentationKind::Vertex && x > &BigInt::from(1) {
                    return Err(Error::NotZeroOne {
                        row: i,
                        col: j,
                        value: x.to_string(),
                    });
                }
                total += x;
                adjacency[i][j] = x.to_u32().filter(|&v| u64::from(v) <= cap).ok_or_else(|| {
                    Error::TooLarge(format!("entry {x} at ({i}, {j})"))
                })?;
            }
        }
        if kind == PresentationKind::Edge && total > BigInt::from(cap) {
            return Err(Error::TooLarge(format!(
                "{total} edges exceeds the enumeration cap {cap}"
            )));
        }
        if is_permutation(&adjacency) {
            return Err(Error::PermutationMatrix);
        }
        for i in 0..n {
            let row_zero = adjacency[i].iter().all(|&x| x == 0);
            let col_zero = adjacency.iter().all(|r| r[i] == 0);
            if row_zero || col_zero {
                return Err(Error::ZeroRowOrColumn { index: i });
            }
        }
        let certificate = irreducibility_certificate(&adjacency)?;

        let mut edges = Vec::new();
        let mut edge_start = Vec::with_capacity(n + 1);
        for (i, row) in adjacency.iter().enumerate() {
            edge_start.push(edges.len());
            for (j, &count) in row.iter().enumerate() {
                for parallel in 0..count {
                    edges.push(Edge {
                        source: i as u32,
                        target: j as u32,
                        parallel,
                    });
                }
            }
        }
        edge_start.push(edges.len());

        let n_symbols = match kind {
            PresentationKind::Vertex => n,
            PresentationKind::Edge => edges.len(),
        };
        let labels = match labels {
            Some(l) => {
                if l.len() != n_symbols {
                    return Err(Error::MismatchedInput(format!(
                        "{} labels for {n_symbols} symbols",
                        l.len()
                    )));
                }
                l
            }
            None => default_labels(kind, n_symbols),
        };
        let followers = match kind {
            PresentationKind::Vertex => adjacency
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &x)| x > 0)
                        .map(|(j, _)| j as Symbol)
                        .collect()
                })
                .collect(),
            PresentationKind::Edge => edges
                .iter()
                .map(|e| {
                    let t = e.target as usize;
                    (edge_start[t] as Symbol..edge_start[t + 1] as Symbol).collect()
                })
                .collect(),
        };
        Ok(Arc::new(SftPresentation {
            kind,
            adjacency,
            edges,
            edge_start,
            labels,
            followers,
            certificate,
        }))
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_symbols(&self) -> usize {
        self.labels.len()
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.adjacency)
    }

    /// Edge list in enumeration order (by source, target, parallel index).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge symbols leaving vertex `v`.
    pub fn edges_from(&self, v: usize) -> std::ops::Range<usize> {
        self.edge_start[v]..self.edge_start[v + 1]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, s: Symbol) -> &str {
        &self.labels[s as usize]
    }

    pub fn symbol(&self, label: &str) -> Option<Symbol> {
        self.labels.iter().position(|l| l == label).map(|i| i as Symbol)
    }

    pub fn certificate(&self) -> &IrreducibilityCertificate {
        &self.certificate
    }

    /// Symbols allowed to follow `s`, ascending.
    pub fn followers(&self, s: Symbol) -> &[Symbol] {
        &self.followers[s as usize]
    }

    pub fn follows(&self, a: Symbol, b: Symbol) -> bool {
        match self.kind {
            PresentationKind::Vertex => self.adjacency[a as usize][b as usize] > 0,
            PresentationKind::Edge => {
                self.edges[a as usize].target == self.edges[b as usize].source
            }
        }
    }

    pub fn is_symbol(&self, s: Symbol) -> bool {
        (s as usize) < self.n_symbols()
    }

    pub fn is_admissible(&self, w: &[Symbol]) -> bool {
        w.iter().all(|&s| self.is_symbol(s)) && w.windows(2).all(|p| self.follows(p[0], p[1]))
    }

    /// `w` is nonempty and `w w` is admissible.
    pub fn is_cyclically_admissible(&self, w: &[Symbol]) -> bool {
        match (w.first(), w.last()) {
            (Some(&first), Some(&last)) => self.is_admissible(w) && self.follows(last, first),
            _ => false,
        }
    }

    /// Vertex the symbol `s` starts from in the underlying graph.
    pub fn source_vertex(&self, s: Symbol) -> usize {
        match self.kind {
            PresentationKind::Vertex => s as usize,
            PresentationKind::Edge => self.edges[s as usize].source as usize,
        }
    }

    /// Renders a word: labels concatenated when all are single characters,
    /// joined by `.` otherwise.
    pub fn render(&self, w: &[Symbol]) -> String {
        let parts: Vec<&str> = w.iter().map(|&s| self.label(s)).collect();
        if self.single_char_labels() {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    /// Inverse of [`render`](Self::render); does not check admissibility.
    pub fn parse_symbols(&self, text: &str) -> Result<Vec<Symbol>> {
        if text.is_empty() || text == "-" {
            return Ok(Vec::new());
        }
        let lookup = |t: &str| {
            self.symbol(t)
                .ok_or_else(|| Error::Inadmissible(format!("unknown symbol `{t}`")))
        };
        if text.contains('.') || !self.single_char_labels() {
            text.split('.').map(lookup).collect()
        } else {
            text.chars().map(|c| lookup(c.encode_utf8(&mut [0; 4]))).collect()
        }
    }

    fn single_char_labels(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }
}

fn default_labels(kind: PresentationKind, n: usize) -> Vec<String> {
    match kind {
        PresentationKind::Vertex => (1..=n).map(|i| i.to_string()).collect(),
        PresentationKind::Edge => (1..=n).map(|i| format!("e{i}")).collect(),
    }
}

fn is_permutation(a: &[Vec<u32>]) -> bool {
    let n = a.len();
    a.iter().all(|row| row.iter().filter(|&&x| x != 0).count() == 1 && row.iter().all(|&x| x <= 1))
        && (0..n).all(|j| a.iter().filter(|row| row[j] != 0).count() == 1)
}

fn irreducibility_certificate(a: &[Vec<u32>]) -> Result<IrreducibilityCertificate> {
    let n = a.len();
    let bfs = |forward: bool| -> Result<Vec<Option<usize>>> {
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                let edge = if forward { a[u][v] } else { a[v][u] };
                if edge > 0 && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(v) => Err(Error::NotIrreducible {
                from: 0,
                unreachable: v,
            }),
            None => Ok(parent),
        }
    };
    let cert = IrreducibilityCertificate {
        out_parent: bfs(true)?,
        in_parent: bfs(false)?,
    };
    debug_assert!(cert.verify(a));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn fibonacci_is_valid() {
        let p = SftPresentation::validate(&m(&[vec![1, 1], vec![1, 0]]), PresentationKind::Vertex)
            .unwrap();
        assert_eq!(p.n_symbols(), 2);
        assert!(p.certificate().verify(p.adjacency()));
        assert_eq!(p.followers(0), &[0, 1]);
        assert_eq!(p.followers(1), &[0]);
    }

    #[test]
    fn identity_is_a_permutation() {
        let err = SftPresentation::validate(&m(&[vec![1, 0], vec![0, 1]]), PresentationKind::Vertex)
            .unwrap_err();
        assert_eq!(err, Error::PermutationMatrix);
    }

    #[test]
    fn edge_symbols_enumerated() {
        let p = SftPresentation::validate(&m(&[vec![0, 2], vec![1, 0]]), PresentationKind::Edge)
            .unwrap();
        assert_eq!(p.n_symbols(), 3);
        assert_eq!(
            p.edges(),
            &[
                Edge { source: 0, target: 1, parallel: 0 },
                Edge { source: 0, target: 1, parallel: 1 },
                Edge { source: 1, target: 0, parallel: 0 },
            ]
        );
        assert!(p.follows(0, 2) && p.follows(2, 1) && !p.follows(0, 1));
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            SftPresentation::validate(&m(&[vec![1, -1], vec![1, 1]]), PresentationKind::Edge),
            Err(Error::NegativeEntry { .. })
        ));
        assert!(matches!(
            SftPresentation::validate(&m(&[vec![2, 1], vec![1, 1]]), PresentationKind::Vertex),
            Err(Error::NotZeroOne { .. })
        ));
        assert!(matches!(
            SftPresentation::validate(&m(&[vec![1, 1], vec![0, 1]]), PresentationKind::Vertex),
            Err(Error::NotIrreducible { .. })
        ));
        assert!(matches!(
            SftPresentation::validate(&m(&[vec![1, 1], vec![0, 0]]), PresentationKind::Vertex),
            Err(Error::ZeroRowOrColumn { .. })
        ));
        assert!(matches!(
            SftPresentation::validate(&m(&[vec![1, 1]]), PresentationKind::Vertex),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn render_round_trip() {
        let p = SftPresentation::validate(&m(&[vec![1, 1], vec![1, 0]]), PresentationKind::Vertex)
            .unwrap();
        assert_eq!(p.render(&[0, 1, 0]), "121");
        assert_eq!(p.parse_symbols("121").unwrap(), vec![0, 1, 0]);
        let e = SftPresentation::validate(&m(&[vec![0, 2], vec![1, 0]]), PresentationKind::Edge)
            .unwrap();
        assert_eq!(e.render(&[0, 2]), "e1.e3");
        assert_eq!(e.parse_symbols("e1.e3").unwrap(), vec![0, 2]);
    }
}
