use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Transducer;
use crate::cohomology::{same_presentation, LocallyConstantFunction, Ring, Vanishing};
use crate::error::{Error, Result};
use crate::sft::{max_words, Presentation, Symbol};

/// Continuous exponents `k1, l1` with
/// `sigma^{k1(x)}(h(sigma x)) = sigma^{l1(x)}(h(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    k1: LocallyConstantFunction,
    l1: LocallyConstantFunction,
}

impl OrbitData {
    pub fn new(k1: LocallyConstantFunction, l1: LocallyConstantFunction) -> Result<Self> {
        if !same_presentation(k1.presentation(), l1.presentation()) {
            return Err(Error::PresentationMismatch);
        }
        for f in [&k1, &l1] {
            if !f.is_integer_valued() || f.table().iter().any(Signed::is_negative) {
                return Err(Error::InvalidFunction(
                    "orbit data must be nonnegative integers".into(),
                ));
            }
        }
        Ok(OrbitData {
            k1: k1.with_ring(Ring::Integer)?,
            l1: l1.with_ring(Ring::Integer)?,
        })
    }

    /// `k1 = 0`, `l1 = 1`: the data of a conjugacy.
    pub fn conjugacy(p: &Presentation) -> Self {
        OrbitData {
            k1: LocallyConstantFunction::zero(p),
            l1: LocallyConstantFunction::one(p),
        }
    }

    pub fn k1(&self) -> &LocallyConstantFunction {
        &self.k1
    }

    pub fn l1(&self) -> &LocallyConstantFunction {
        &self.l1
    }

    /// The cocycle function `l1 - k1`.
    pub fn cocycle(&self) -> LocallyConstantFunction {
        self.l1.sub(&self.k1).expect("same presentation")
    }

    /// `(k1 + m, l1 + m)` for a constant `m`.
    pub fn offset(&self, m: u32) -> Self {
        let c = LocallyConstantFunction::constant(self.k1.presentation(), BigRational::from_integer(m.into()));
        OrbitData {
            k1: self.k1.add(&c).expect("same presentation"),
            l1: self.l1.add(&c).expect("same presentation"),
        }
    }

    /// Data for `g o h` from data of `h` and of `g`.
    pub fn compose(h: &Transducer, dh: &OrbitData, dg: &OrbitData) -> Result<OrbitData> {
        let (pk, qk) = psi_parts(h, dh, dg.k1())?;
        let (pl, ql) = psi_parts(h, dh, dg.l1())?;
        OrbitData::new(pk.add(&ql)?, pl.add(&qk)?)
    }
}

fn small(f: &LocallyConstantFunction) -> usize {
    f.table()
        .iter()
        .map(|v| v.to_integer().to_usize().expect("nonnegative"))
        .max()
        .unwrap_or(0)
}

/// `(P, Q)` with `P(x) = sum_{i<l1(x)} f(sigma^i h x)` and
/// `Q(x) = sum_{j<k1(x)} f(sigma^j h sigma x)`, so that `Psi_h(f) = P - Q`.
pub fn psi_parts(
    h: &Transducer,
    data: &OrbitData,
    f: &LocallyConstantFunction,
) -> Result<(LocallyConstantFunction, LocallyConstantFunction)> {
    let dom = h.domain();
    if !same_presentation(data.k1.presentation(), dom) {
        return Err(Error::PresentationMismatch);
    }
    if !same_presentation(f.presentation(), h.codomain()) {
        return Err(Error::PresentationMismatch);
    }
    let kf = f.depth();
    let need = |n: usize| if n == 0 { 0 } else { n + kf - 1 };
    let franker = h.codomain().ranker(kf)?;
    let kranker = dom.ranker(data.k1.depth())?;
    let lranker = dom.ranker(data.l1.depth())?;
    let amount = |g: &LocallyConstantFunction, r: &crate::sft::Ranker, w: &[Symbol]| {
        g.table()[r.rank_unchecked(&w[..g.depth()])]
            .to_integer()
            .to_usize()
            .expect("nonnegative")
    };
    let sum = |out: &[Symbol], n: usize| -> BigRational {
        (0..n)
            .map(|i| &f.table()[franker.rank_unchecked(&out[i..i + kf])])
            .sum()
    };
    let max_l = need(small(&data.l1));
    let max_k = need(small(&data.k1));
    let mut d = data.k1.depth().max(data.l1.depth()).max(1);
    loop {
        if dom.word_count(d) > max_words() {
            return Err(Error::InsufficientLookahead(format!(
                "no input depth up to {} forces {} output symbols",
                d - 1,
                max_l.max(max_k)
            )));
        }
        let words = dom.word_table(d)?;
        let mut ps = Vec::with_capacity(words.len());
        let mut qs = Vec::with_capacity(words.len());
        let mut enough = true;
        for w in words.iter() {
            let l = amount(&data.l1, &lranker, w);
            let k = amount(&data.k1, &kranker, w);
            let (_, out) = h.run(h.initial(), w)?;
            let (_, out_s) = h.run(h.initial(), &w[1..])?;
            if out.len() < need(l) || out_s.len() < need(k) {
                enough = false;
                break;
            }
            ps.push(sum(&out, l));
            qs.push(sum(&out_s, k));
        }
        if enough {
            return Ok((
                LocallyConstantFunction::new(dom, d, ps, f.ring())?,
                LocallyConstantFunction::new(dom, d, qs, f.ring())?,
            ));
        }
        d += 1;
    }
}

/// `Psi_h(f)(x) = sum_{i<l1(x)} f(sigma^i h x) - sum_{j<k1(x)} f(sigma^j h sigma x)`.
pub fn transfer_psi(
    h: &Transducer,
    data: &OrbitData,
    f: &LocallyConstantFunction,
) -> Result<LocallyConstantFunction> {
    let (p, q) = psi_parts(h, data, f)?;
    p.sub(&q)
}

/// `Psi_h(1) = 1` and `Psi_g(1) = 1` for the pair `h`, `g`.
pub fn is_eventual_conjugacy(
    h: &Transducer,
    dh: &OrbitData,
    g: &Transducer,
    dg: &OrbitData,
) -> Result<bool> {
    let forward = transfer_psi(h, dh, &LocallyConstantFunction::one(h.codomain()))?;
    let backward = transfer_psi(g, dg, &LocallyConstantFunction::one(g.codomain()))?;
    Ok(forward == LocallyConstantFunction::one(h.domain())
        && backward == LocallyConstantFunction::one(g.domain()))
}

/// `[Psi_h(1)] = [1]`; the coboundary witness comes with a positive answer.
pub fn is_strong_coe(h: &Transducer, dh: &OrbitData) -> Result<Vanishing> {
    let image = transfer_psi(h, dh, &LocallyConstantFunction::one(h.codomain()))?;
    image.class_equal(&LocallyConstantFunction::one(h.domain()))
}

/// Evaluates `Psi_h(f)` at a point straight from the defining formula.
pub fn psi_at_point(
    h: &Transducer,
    data: &OrbitData,
    f: &LocallyConstantFunction,
    x: &crate::sft::EventuallyPeriodicPoint,
) -> Result<BigRational> {
    let l = data.l1.evaluate(x).to_integer().to_usize().expect("nonnegative");
    let k = data.k1.evaluate(x).to_integer().to_usize().expect("nonnegative");
    let y = h.apply(x)?;
    let ys = h.apply(&x.shift())?;
    let mut total = BigRational::zero();
    for i in 0..l {
        total += f.evaluate(&y.shift_by(i));
    }
    for j in 0..k {
        total -= f.evaluate(&ys.shift_by(j));
    }
    Ok(total)
}
