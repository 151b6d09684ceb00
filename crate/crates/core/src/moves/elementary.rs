use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};

use crate::cohomology::{same_presentation, LocallyConstantFunction};
use crate::error::{Error, Result};
use crate::intlat::IntMatrix;
use crate::sft::{Presentation, PresentationKind, SftPresentation, Symbol, MAX_DERIVED_VERTICES};

/// An edge of the bipartite graph of `C` or `D`: `(source, target, parallel)`.
pub type BipartiteEdge = (usize, usize, u32);

/// Order in which the paths through the intermediate vertex are matched
/// with the parallel edges of the product graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BijectionOrder {
    /// Lexicographic in (intermediate vertex, first index, second index).
    #[default]
    Lex,
    /// The reverse of [`Lex`](Self::Lex).
    ReverseLex,
}

/// `A = CD` and `B = DC` with fixed bijections between edges of `A` and
/// paths `c d`, and between edges of `B` and paths `d c`.
#[derive(Debug, Clone)]
pub struct ElementaryEquivalence {
    c: IntMatrix,
    d: IntMatrix,
    a: Presentation,
    b: Presentation,
    order: BijectionOrder,
    a_paths: Vec<(BipartiteEdge, BipartiteEdge)>,
    b_paths: Vec<(BipartiteEdge, BipartiteEdge)>,
    a_index: HashMap<(BipartiteEdge, BipartiteEdge), Symbol>,
    b_index: HashMap<(BipartiteEdge, BipartiteEdge), Symbol>,
}

fn check_nonnegative(m: &IntMatrix) -> Result<Vec<Vec<u32>>> {
    let mut rows = vec![vec![0u32; m.cols()]; m.rows()];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let v = &m[(i, j)];
            if v.is_negative() {
                return Err(Error::NegativeEntry {
                    row: i,
                    col: j,
                    value: v.to_string(),
                });
            }
            *x = v
                .to_u32()
                .ok_or_else(|| Error::TooLarge(format!("entry {v}")))?;
        }
    }
    Ok(rows)
}

/// Paths `x -> y -> z` through the intermediate vertex, matched to the
/// parallel edges `x -> z` of the product.
fn match_paths(
    first: &[Vec<u32>],
    second: &[Vec<u32>],
    product: &Presentation,
    order: BijectionOrder,
) -> Vec<(BipartiteEdge, BipartiteEdge)> {
    let n = first.len();
    let mid = second.len();
    let mut by_pair: Vec<Vec<Vec<(BipartiteEdge, BipartiteEdge)>>> = vec![vec![Vec::new(); n]; n];
    for (x, pairs) in by_pair.iter_mut().enumerate() {
        for (z, paths) in pairs.iter_mut().enumerate() {
            for y in 0..mid {
                for c in 0..first[x][y] {
                    for d in 0..second[y][z] {
                        paths.push(((x, y, c), (y, z, d)));
                    }
                }
            }
            if order == BijectionOrder::ReverseLex {
                paths.reverse();
            }
        }
    }
    product
        .edges()
        .iter()
        .map(|e| by_pair[e.source as usize][e.target as usize][e.parallel as usize])
        .collect()
}

impl ElementaryEquivalence {
    pub fn new(c: &IntMatrix, d: &IntMatrix) -> Result<Self> {
        Self::with_order(c, d, BijectionOrder::Lex)
    }

    pub fn with_order(c: &IntMatrix, d: &IntMatrix, order: BijectionOrder) -> Result<Self> {
        if c.cols() != d.rows() || c.rows() != d.cols() {
            return Err(Error::MismatchedInput(format!(
                "C is {}x{} and D is {}x{}",
                c.rows(),
                c.cols(),
                d.rows(),
                d.cols()
            )));
        }
        let cr = check_nonnegative(c)?;
        let dr = check_nonnegative(d)?;
        let build = |m: &IntMatrix, name: &str| {
            SftPresentation::build(m, PresentationKind::Edge, None, MAX_DERIVED_VERTICES)
                .map_err(|e| Error::InvalidResult(format!("{name}: {e}")))
        };
        let a = build(&c.mul(d), "CD")?;
        let b = build(&d.mul(c), "DC")?;
        let a_paths = match_paths(&cr, &dr, &a, order);
        let b_paths = match_paths(&dr, &cr, &b, order);
        let a_index = a_paths.iter().enumerate().map(|(i, &p)| (p, i as Symbol)).collect();
        let b_index = b_paths.iter().enumerate().map(|(i, &p)| (p, i as Symbol)).collect();
        Ok(ElementaryEquivalence {
            c: c.clone(),
            d: d.clone(),
            a,
            b,
            order,
            a_paths,
            b_paths,
            a_index,
            b_index,
        })
    }

    pub fn c(&self) -> &IntMatrix {
        &self.c
    }

    pub fn d(&self) -> &IntMatrix {
        &self.d
    }

    /// Edge presentation of `A = CD`.
    pub fn a(&self) -> &Presentation {
        &self.a
    }

    /// Edge presentation of `B = DC`.
    pub fn b(&self) -> &Presentation {
        &self.b
    }

    pub fn order(&self) -> BijectionOrder {
        self.order
    }

    /// Path `(c, d)` matched with each edge of `A`.
    pub fn a_paths(&self) -> &[(BipartiteEdge, BipartiteEdge)] {
        &self.a_paths
    }

    /// Path `(d, c)` matched with each edge of `B`.
    pub fn b_paths(&self) -> &[(BipartiteEdge, BipartiteEdge)] {
        &self.b_paths
    }

    /// `Z = [[0, C], [D, 0]]`.
    pub fn z(&self) -> IntMatrix {
        let n = self.c.rows();
        let m = self.c.cols();
        let mut z = IntMatrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..m {
                z[(i, n + j)] = self.c[(i, j)].clone();
                z[(n + j, i)] = self.d[(j, i)].clone();
            }
        }
        z
    }

    /// `phi(f)((d_1 c_1)(d_2 c_2)...) = f((c_1 d_2)(c_2 d_3)...)`.
    pub fn phi(&self, f: &LocallyConstantFunction) -> Result<LocallyConstantFunction> {
        transfer(f, &self.a, &self.b, &self.b_paths, &self.a_index)
    }

    /// `psi(g)((c_1 d_1)(c_2 d_2)...) = g((d_1 c_2)(d_2 c_3)...)`.
    pub fn psi(&self, g: &LocallyConstantFunction) -> Result<LocallyConstantFunction> {
        transfer(g, &self.b, &self.a, &self.a_paths, &self.b_index)
    }
}

fn transfer(
    f: &LocallyConstantFunction,
    from: &Presentation,
    to: &Presentation,
    to_paths: &[(BipartiteEdge, BipartiteEdge)],
    from_index: &HashMap<(BipartiteEdge, BipartiteEdge), Symbol>,
) -> Result<LocallyConstantFunction> {
    if !same_presentation(f.presentation(), from) {
        return Err(Error::PresentationMismatch);
    }
    let k = f.depth();
    let ranker = from.ranker(k)?;
    let mut image = Vec::with_capacity(k);
    let table = to
        .word_table(k + 1)?
        .iter()
        .map(|w| {
            image.clear();
            image.extend(w.windows(2).map(|pair| {
                let (_, second) = to_paths[pair[0] as usize];
                let (first, _) = to_paths[pair[1] as usize];
                from_index[&(second, first)]
            }));
            f.table()[ranker.rank_unchecked(&image)].clone()
        })
        .collect();
    LocallyConstantFunction::new(to, k + 1, table, f.ring())
}
