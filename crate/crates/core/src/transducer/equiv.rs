use std::collections::{HashMap, VecDeque};

use num_traits::ToPrimitive;

use super::{OrbitData, Transducer, Transition};
use crate::cohomology::{same_presentation, LocallyConstantFunction};
use crate::error::{Error, Result};
use crate::sft::{EventuallyPeriodicPoint, Presentation, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapEquivalence {
    Equal,
    /// Outputs already disagree after reading this admissible input word.
    Unequal(Vec<Symbol>),
    /// The output delay exceeded the bound.
    Inconclusive { delay_bound: usize },
}

impl MapEquivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, MapEquivalence::Equal)
    }

    pub fn label(&self) -> &'static str {
        match self {
            MapEquivalence::Equal => "equal",
            MapEquivalence::Unequal(_) => "unequal",
            MapEquivalence::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// `|Q| |Q'| maxlen + 8`.
pub fn default_delay_bound(a: &Transducer, b: &Transducer) -> usize {
    a.n_states() * b.n_states() * a.max_output_len().max(b.max_output_len()) + 8
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Config {
    q: usize,
    r: usize,
    last: Option<Symbol>,
    /// `true` when the first machine is ahead.
    first_leads: bool,
    buffer: Vec<Symbol>,
}

/// Decides whether two transducers define the same map on the domain by
/// exploring their synchronized product with the unmatched output.
pub fn equivalent_maps(a: &Transducer, b: &Transducer, delay_bound: usize) -> Result<MapEquivalence> {
    if !same_presentation(a.domain(), b.domain()) || !same_presentation(a.codomain(), b.codomain()) {
        return Err(Error::DomainMismatch);
    }
    let p = a.domain();
    let start = Config {
        q: a.initial(),
        r: b.initial(),
        last: None,
        first_leads: true,
        buffer: Vec::new(),
    };
    let mut parent: HashMap<Config, Option<(usize, Symbol)>> = HashMap::new();
    let mut nodes = vec![start.clone()];
    parent.insert(start, None);
    let mut queue = VecDeque::from([0usize]);
    let word_to = |nodes: &[Config], parent: &HashMap<Config, Option<(usize, Symbol)>>, mut i: usize| {
        let mut w = Vec::new();
        while let Some(&Some((j, s))) = parent.get(&nodes[i]) {
            w.push(s);
            i = j;
        }
        w.reverse();
        w
    };
    while let Some(i) = queue.pop_front() {
        let c = nodes[i].clone();
        let inputs: Vec<Symbol> = match c.last {
            None => (0..p.n_symbols() as Symbol).collect(),
            Some(s) => p.followers(s).to_vec(),
        };
        for s in inputs {
            let (qa, wa) = a.transition(c.q, s).ok_or(Error::UndefinedTransition { state: c.q, symbol: s })?;
            let (qb, wb) = b.transition(c.r, s).ok_or(Error::UndefinedTransition { state: c.r, symbol: s })?;
            let (mut xa, mut xb) = if c.first_leads {
                (c.buffer.clone(), Vec::new())
            } else {
                (Vec::new(), c.buffer.clone())
            };
            xa.extend_from_slice(wa);
            xb.extend_from_slice(wb);
            let m = xa.len().min(xb.len());
            if xa[..m] != xb[..m] {
                let mut w = word_to(&nodes, &parent, i);
                w.push(s);
                return Ok(MapEquivalence::Unequal(w));
            }
            let (first_leads, buffer) = if xa.len() >= xb.len() {
                (true, xa[m..].to_vec())
            } else {
                (false, xb[m..].to_vec())
            };
            if buffer.len() > delay_bound {
                return Ok(MapEquivalence::Inconclusive { delay_bound });
            }
            let next = Config {
                q: *qa,
                r: *qb,
                last: Some(s),
                first_leads,
                buffer,
            };
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((i, s)));
                nodes.push(next);
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    Ok(MapEquivalence::Equal)
}

/// Transducer for `x -> sigma^{drop(x)}(h(sigma^skip x))`.
pub fn shifted(h: &Transducer, skip: usize, drop: &LocallyConstantFunction) -> Result<Transducer> {
    let p = h.domain();
    if !same_presentation(drop.presentation(), p) {
        return Err(Error::PresentationMismatch);
    }
    let drop_of = |w: &[Symbol]| -> Result<usize> {
        let v = drop.value(w)?;
        v.to_integer()
            .to_usize()
            .filter(|_| v.is_integer())
            .ok_or_else(|| Error::InvalidFunction("shift amounts must be nonnegative integers".into()))
    };
    let big_p = drop.depth().max(skip).max(1);

    #[derive(Clone, PartialEq, Eq, Hash)]
    enum State {
        Prefix(Vec<Symbol>),
        Run(usize, usize),
    }
    let mut index: HashMap<State, usize> = HashMap::from([(State::Prefix(Vec::new()), 0)]);
    let mut states = vec![State::Prefix(Vec::new())];
    let mut transitions: Vec<Vec<Transition>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let st = states[i].clone();
        let mut row: Vec<Transition> = vec![None; p.n_symbols()];
        for a in 0..p.n_symbols() as Symbol {
            let (next, out) = match &st {
                State::Prefix(w) => {
                    if w.last().is_some_and(|&l| !p.follows(l, a)) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(a);
                    if w2.len() < big_p {
                        (State::Prefix(w2), Vec::new())
                    } else {
                        let r = drop_of(&w2)?;
                        let (q, out) = h.run(h.initial(), &w2[skip..])?;
                        let d = r.min(out.len());
                        (State::Run(q, r - d), out[d..].to_vec())
                    }
                }
                State::Run(q, r) => match h.transition(*q, a) {
                    None => continue,
                    Some((q2, out)) => {
                        let d = (*r).min(out.len());
                        (State::Run(*q2, r - d), out[d..].to_vec())
                    }
                },
            };
            let j = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            row[a as usize] = Some((j, out));
        }
        transitions.push(row);
        i += 1;
    }
    Transducer::new(p, h.codomain(), 0, transitions)
}

/// Outcome of checking `sigma^{k1(x)}(h(sigma x)) = sigma^{l1(x)}(h(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitRelation {
    Holds { points_checked: usize },
    Fails { counterexample: EventuallyPeriodicPoint },
}

impl OrbitRelation {
    pub fn holds(&self) -> bool {
        matches!(self, OrbitRelation::Holds { .. })
    }
}

/// Bounds for [`verify_orbit_relation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub delay_bound: Option<usize>,
    pub max_preperiod: usize,
    pub max_period: usize,
    /// Upper bound on the number of points cross-checked.
    pub max_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            delay_bound: None,
            max_preperiod: 4,
            max_period: 6,
            max_points: 50_000,
        }
    }
}

pub fn verify_orbit_relation(h: &Transducer, data: &OrbitData) -> Result<OrbitRelation> {
    verify_orbit_relation_with(h, data, VerifyOptions::default())
}

pub fn verify_orbit_relation_with(
    h: &Transducer,
    data: &OrbitData,
    opts: VerifyOptions,
) -> Result<OrbitRelation> {
    let left = shifted(h, 1, data.k1())?;
    let right = shifted(h, 0, data.l1())?;
    let bound = opts.delay_bound.unwrap_or_else(|| default_delay_bound(&left, &right));
    match equivalent_maps(&left, &right, bound)? {
        MapEquivalence::Inconclusive { delay_bound } => Err(Error::InsufficientLookahead(format!(
            "output delay exceeded {delay_bound}"
        ))),
        MapEquivalence::Unequal(w) => {
            let x = extend_to_point(h.domain(), &w);
            debug_assert_ne!(orbit_sides(h, data, &x)?.0, orbit_sides(h, data, &x)?.1);
            Ok(OrbitRelation::Fails { counterexample: x })
        }
        MapEquivalence::Equal => {
            let p = h.domain();
            let mut checked = 0;
            for x in p.eventually_periodic_points(opts.max_preperiod, opts.max_period)? {
                if checked == opts.max_points {
                    break;
                }
                let (lhs, rhs) = orbit_sides(h, data, &x)?;
                if lhs != rhs {
                    return Err(Error::ContradictionDetected(format!(
                        "machines agree but the orbit relation fails at {}({})",
                        p.render(x.preperiod()),
                        p.render(x.period())
                    )));
                }
                checked += 1;
            }
            Ok(OrbitRelation::Holds {
                points_checked: checked,
            })
        }
    }
}

/// Both sides of the orbit relation at a point.
pub fn orbit_sides(
    h: &Transducer,
    data: &OrbitData,
    x: &EventuallyPeriodicPoint,
) -> Result<(EventuallyPeriodicPoint, EventuallyPeriodicPoint)> {
    let amount = |f: &LocallyConstantFunction| {
        f.evaluate(x).to_integer().to_usize().expect("nonnegative orbit data")
    };
    let lhs = h.apply(&x.shift())?.shift_by(amount(data.k1()));
    let rhs = h.apply(x)?.shift_by(amount(data.l1()));
    Ok((lhs, rhs))
}

/// `w` followed by a cycle through its last symbol.
pub(crate) fn extend_to_point(p: &Presentation, w: &[Symbol]) -> EventuallyPeriodicPoint {
    let s = *w.last().expect("nonempty witness");
    // BFS back to s
    let mut prev: HashMap<Symbol, Symbol> = HashMap::new();
    let mut queue = VecDeque::new();
    for &t in p.followers(s) {
        if t == s {
            return EventuallyPeriodicPoint::new(p, w.to_vec(), vec![s]).expect("admissible");
        }
        if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(t) {
            e.insert(s);
            queue.push_back(t);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &t in p.followers(u) {
            if t == s {
                let mut cycle = vec![s, u];
                let mut cur = u;
                while prev[&cur] != s {
                    cur = prev[&cur];
                    cycle.push(cur);
                }
                // cycle = s, u, ..., first; period starts after s
                cycle[1..].reverse();
                let mut period = cycle[1..].to_vec();
                period.push(s);
                return EventuallyPeriodicPoint::new(p, w.to_vec(), period).expect("admissible");
            }
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(t) {
                e.insert(u);
                queue.push_back(t);
            }
        }
    }
    unreachable!("irreducible presentations have cycles through every symbol")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::IntMatrix;
    use crate::sft::{PresentationKind, SftPresentation};

    fn fib() -> Presentation {
        SftPresentation::validate(
            &IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]),
            PresentationKind::Vertex,
        )
        .unwrap()
    }

    #[test]
    fn identity_relation() {
        let p = fib();
        let id = Transducer::identity(&p);
        assert!(equivalent_maps(&id, &id, 4).unwrap().is_equal());
        let r = verify_orbit_relation(&id, &OrbitData::conjugacy(&p)).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn shift_differs_from_identity() {
        let p = fib();
        let id = Transducer::identity(&p);
        let sigma = shifted(&id, 0, &LocallyConstantFunction::one(&p)).unwrap();
        match equivalent_maps(&id, &sigma, 8).unwrap() {
            MapEquivalence::Unequal(w) => assert!(w.len() <= 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extension_is_admissible() {
        let p = SftPresentation::validate(
            &IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]),
            PresentationKind::Vertex,
        )
        .unwrap();
        for w in [vec![0, 1], vec![2], vec![1, 2, 0]] {
            let x = extend_to_point(&p, &w);
            assert_eq!(x.prefix(w.len()), w);
        }
    }
}
