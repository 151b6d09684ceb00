use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cohomology::{same_presentation, LocallyConstantFunction};
use crate::error::{Error, Result};
use crate::intlat::IntMatrix;
use crate::sft::{Presentation, PresentationKind, SftPresentation, Symbol, MAX_DERIVED_VERTICES};
use crate::transducer::{OrbitData, Transducer};

/// The symbol-splitting expansion of a vertex shift at vertex `v`: a new
/// symbol `0` is inserted after every occurrence of `v`.
///
/// Internal symbol `0` of the expanded shift is the new symbol and symbol
/// `i + 1` is the original symbol `i`.
#[derive(Debug, Clone)]
pub struct Expansion {
    base: Presentation,
    expanded: Presentation,
    vertex: Symbol,
    xi: Transducer,
    eta: Transducer,
    xi_data: OrbitData,
    eta_data: OrbitData,
}

/// Expands `p` at the vertex with internal index `vertex`.
pub fn expand(p: &Presentation, vertex: Symbol) -> Result<Expansion> {
    if p.kind() != PresentationKind::Vertex {
        return Err(Error::NotVertexKind);
    }
    let n = p.n_vertices();
    let v = vertex as usize;
    if v >= n {
        return Err(Error::MismatchedInput(format!("vertex {} out of range", v + 1)));
    }
    let a = p.adjacency();
    let mut m = IntMatrix::zeros(n + 1, n + 1);
    for j in 0..n {
        m[(0, j + 1)] = BigInt::from(a[v][j]);
    }
    m[(v + 1, 0)] = BigInt::from(1);
    for i in (0..n).filter(|&i| i != v) {
        for j in 0..n {
            m[(i + 1, j + 1)] = BigInt::from(a[i][j]);
        }
    }
    let mut labels = vec!["0".to_string()];
    labels.extend(p.labels().iter().cloned());
    let expanded = SftPresentation::build(&m, PresentationKind::Vertex, Some(labels), MAX_DERIVED_VERTICES)?;
    let xi = Transducer::symbol_map(p, &expanded, |s| {
        if s == vertex {
            vec![s + 1, 0]
        } else {
            vec![s + 1]
        }
    })?;
    let eta = Transducer::symbol_map(&expanded, p, |s| if s == 0 { Vec::new() } else { vec![s - 1] })?;
    let int = |n: i64| BigRational::from_integer(n.into());
    let xi_data = OrbitData::new(
        LocallyConstantFunction::zero(p),
        LocallyConstantFunction::from_fn(p, 1, crate::cohomology::Ring::Integer, |w| {
            int(if w[0] == vertex { 2 } else { 1 })
        })?,
    )?;
    let eta_data = OrbitData::new(
        LocallyConstantFunction::zero(&expanded),
        LocallyConstantFunction::from_fn(&expanded, 1, crate::cohomology::Ring::Integer, |w| {
            int(if w[0] == 0 { 0 } else { 1 })
        })?,
    )?;
    Ok(Expansion {
        base: Arc::clone(p),
        expanded,
        vertex,
        xi,
        eta,
        xi_data,
        eta_data,
    })
}

impl Expansion {
    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn expanded(&self) -> &Presentation {
        &self.expanded
    }

    pub fn matrix(&self) -> IntMatrix {
        self.expanded.adjacency_matrix()
    }

    pub fn vertex(&self) -> Symbol {
        self.vertex
    }

    /// `xi`: the expanded vertex `v` is replaced by `v 0`.
    pub fn xi(&self) -> &Transducer {
        &self.xi
    }

    /// `eta`: deletes `0`.
    pub fn eta(&self) -> &Transducer {
        &self.eta
    }

    /// `k1 = 0`, `l1 = 2` on the cylinder of `v`, `1` elsewhere.
    pub fn xi_data(&self) -> &OrbitData {
        &self.xi_data
    }

    /// `k1 = 0`, `l1 = 0` on the cylinder of `0`, `1` elsewhere.
    pub fn eta_data(&self) -> &OrbitData {
        &self.eta_data
    }

    /// `Psi_xi(f)(x) = f(xi x) + f(sigma xi x)` if `x_1 = v`, else `f(xi x)`.
    pub fn psi_xi(&self, f: &LocallyConstantFunction) -> Result<LocallyConstantFunction> {
        if !same_presentation(f.presentation(), &self.expanded) {
            return Err(Error::PresentationMismatch);
        }
        let k = f.depth();
        let ranker = self.expanded.ranker(k)?;
        let table = self
            .base
            .word_table(k)?
            .iter()
            .map(|w| {
                let (_, out) = self.xi.run(0, w).expect("xi is total");
                let mut v = f.table()[ranker.rank_unchecked(&out[..k])].clone();
                if w[0] == self.vertex {
                    v += &f.table()[ranker.rank_unchecked(&out[1..=k])];
                }
                v
            })
            .collect();
        LocallyConstantFunction::new(&self.base, k, table, f.ring())
    }

    /// `Psi_eta(f)(x) = 0` if `x_1 = 0`, else `f(eta x)`.
    pub fn psi_eta(&self, f: &LocallyConstantFunction) -> Result<LocallyConstantFunction> {
        if !same_presentation(f.presentation(), &self.base) {
            return Err(Error::PresentationMismatch);
        }
        let k = f.depth();
        let ranker = self.base.ranker(k)?;
        let table = self
            .expanded
            .word_table(2 * k)?
            .iter()
            .map(|w| {
                if w[0] == 0 {
                    return BigRational::zero();
                }
                let (_, out) = self.eta.run(0, w).expect("eta is total");
                f.table()[ranker.rank_unchecked(&out[..k])].clone()
            })
            .collect();
        LocallyConstantFunction::new(&self.expanded, 2 * k, table, f.ring())
    }
}
