use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::cohomology::same_presentation;
use crate::error::{Error, Result};
use crate::sft::{EventuallyPeriodicPoint, HigherBlock, Presentation, Symbol};

pub type Transition = Option<(usize, Vec<Symbol>)>;

/// Deterministic finite-state transducer reading domain symbols and
/// writing codomain words.
#[derive(Debug, Clone)]
pub struct Transducer {
    domain: Presentation,
    codomain: Presentation,
    initial: usize,
    transitions: Vec<Vec<Transition>>,
}

impl PartialEq for Transducer {
    fn eq(&self, other: &Self) -> bool {
        same_presentation(&self.domain, &other.domain)
            && same_presentation(&self.codomain, &other.codomain)
            && self.initial == other.initial
            && self.transitions == other.transitions
    }
}

impl Eq for Transducer {}

impl Transducer {
    /// Builds and validates: complete on admissible inputs, productive, and
    /// with admissible output.
    pub fn new(
        domain: &Presentation,
        codomain: &Presentation,
        initial: usize,
        transitions: Vec<Vec<Transition>>,
    ) -> Result<Self> {
        let n = transitions.len();
        if n == 0 || initial >= n {
            return Err(Error::InvalidTransducer(format!(
                "initial state {initial} out of range for {n} states"
            )));
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != domain.n_symbols() {
                return Err(Error::InvalidTransducer(format!(
                    "state {q} has {} transitions for {} input symbols",
                    row.len(),
                    domain.n_symbols()
                )));
            }
            for (next, out) in row.iter().flatten() {
                if *next >= n {
                    return Err(Error::InvalidTransducer(format!("target state {next} out of range")));
                }
                if let Some(&s) = out.iter().find(|&&s| !codomain.is_symbol(s)) {
                    return Err(Error::InvalidTransducer(format!("output symbol {s} out of range")));
                }
            }
        }
        let t = Transducer {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            initial,
            transitions,
        };
        t.check_complete_and_productive()?;
        t.check_output_admissible()?;
        Ok(t)
    }

    pub fn domain(&self) -> &Presentation {
        &self.domain
    }

    pub fn codomain(&self) -> &Presentation {
        &self.codomain
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn n_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn transition(&self, q: usize, a: Symbol) -> Option<&(usize, Vec<Symbol>)> {
        self.transitions[q][a as usize].as_ref()
    }

    pub fn transitions(&self) -> &[Vec<Transition>] {
        &self.transitions
    }

    pub fn max_output_len(&self) -> usize {
        self.transitions
            .iter()
            .flatten()
            .flatten()
            .map(|(_, w)| w.len())
            .max()
            .unwrap_or(0)
    }

    fn inputs_after(&self, last: Option<Symbol>) -> Vec<Symbol> {
        match last {
            None => (0..self.domain.n_symbols() as Symbol).collect(),
            Some(s) => self.domain.followers(s).to_vec(),
        }
    }

    /// Reachable `(state, last input)` pairs and the edges between them.
    fn context_graph(&self) -> Result<ContextGraph> {
        let start = (self.initial, None);
        let mut index = HashMap::from([(start, 0usize)]);
        let mut nodes = vec![start];
        let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new()];
        let mut i = 0;
        while i < nodes.len() {
            let (q, last) = nodes[i];
            for a in self.inputs_after(last) {
                let (next, out) = self.transitions[q][a as usize]
                    .as_ref()
                    .ok_or(Error::UndefinedTransition { state: q, symbol: a })?;
                let key = (*next, Some(a));
                let j = *index.entry(key).or_insert_with(|| {
                    nodes.push(key);
                    edges.push(Vec::new());
                    nodes.len() - 1
                });
                edges[i].push((j, out.is_empty()));
            }
            i += 1;
        }
        Ok(ContextGraph { edges })
    }

    fn check_complete_and_productive(&self) -> Result<()> {
        let g = self.context_graph()?;
        // a cycle of empty outputs would starve
        let n = g.edges.len();
        let mut indegree = vec![0usize; n];
        for e in &g.edges {
            for &(j, empty) in e {
                if empty {
                    indegree[j] += 1;
                }
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for &(j, empty) in &g.edges[v] {
                if empty {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        queue.push(j);
                    }
                }
            }
        }
        if removed < n {
            return Err(Error::Starvation);
        }
        Ok(())
    }

    fn check_output_admissible(&self) -> Result<()> {
        let start = (self.initial, None::<Symbol>, None::<Symbol>);
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((q, last_in, last_out)) = queue.pop_front() {
            for a in self.inputs_after(last_in) {
                let (next, out) = self.transitions[q][a as usize].as_ref().expect("complete");
                let joined_ok = match (last_out, out.first()) {
                    (Some(x), Some(&y)) => self.codomain.follows(x, y),
                    _ => true,
                };
                if !joined_ok || !self.codomain.is_admissible(out) {
                    return Err(Error::InadmissibleOutput(format!(
                        "state {q} on {} emits {}",
                        self.domain.label(a),
                        self.codomain.render(out)
                    )));
                }
                let key = (*next, Some(a), out.last().copied().or(last_out));
                if seen.insert(key) {
                    queue.push_back(key);
                }
            }
        }
        Ok(())
    }

    /// Runs from state `q`; fails on an undefined transition.
    pub fn run(&self, q: usize, input: &[Symbol]) -> Result<(usize, Vec<Symbol>)> {
        let mut q = q;
        let mut out = Vec::new();
        for &a in input {
            let (next, w) = self.transitions[q][a as usize]
                .as_ref()
                .ok_or(Error::UndefinedTransition { state: q, symbol: a })?;
            out.extend_from_slice(w);
            q = *next;
        }
        Ok((q, out))
    }

    /// Exact image of an eventually periodic point.
    pub fn apply(&self, x: &EventuallyPeriodicPoint) -> Result<EventuallyPeriodicPoint> {
        let (mut q, mut pre) = self.run(self.initial, x.preperiod())?;
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut chunks: Vec<Vec<Symbol>> = Vec::new();
        let start = loop {
            if let Some(&i) = seen.get(&q) {
                break i;
            }
            seen.insert(q, chunks.len());
            let (next, out) = self.run(q, x.period())?;
            chunks.push(out);
            q = next;
        };
        for c in &chunks[..start] {
            pre.extend_from_slice(c);
        }
        let period: Vec<Symbol> = chunks[start..].concat();
        if period.is_empty() {
            return Err(Error::Starvation);
        }
        EventuallyPeriodicPoint::new(&self.codomain, pre, period)
            .map_err(|e| Error::InadmissibleOutput(e.to_string()))
    }

    pub fn identity(p: &Presentation) -> Self {
        let row = (0..p.n_symbols() as Symbol).map(|a| Some((0, vec![a]))).collect();
        Transducer {
            domain: Arc::clone(p),
            codomain: Arc::clone(p),
            initial: 0,
            transitions: vec![row],
        }
    }

    /// Single-state transducer applying `map` to each symbol.
    pub fn symbol_map(
        domain: &Presentation,
        codomain: &Presentation,
        map: impl Fn(Symbol) -> Vec<Symbol>,
    ) -> Result<Self> {
        let row = (0..domain.n_symbols() as Symbol).map(|a| Some((0, map(a)))).collect();
        Self::new(domain, codomain, 0, vec![row])
    }

    /// The sliding block code `x -> (x_1..x_{k+1})(x_2..x_{k+2})...` onto the
    /// `k`-block recoding, and its inverse.
    pub fn block_conjugacy(hb: &HigherBlock) -> Result<(Self, Self)> {
        let base = hb.base();
        let k = hb.k();
        let ranker = base.ranker(k + 1)?;
        let mut prefixes: Vec<Vec<Symbol>> = vec![Vec::new()];
        for j in 1..=k {
            prefixes.extend(base.word_table(j)?.iter().map(<[Symbol]>::to_vec));
        }
        let index: HashMap<&[Symbol], usize> =
            prefixes.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut transitions = vec![vec![None; base.n_symbols()]; prefixes.len()];
        for (q, w) in prefixes.iter().enumerate() {
            for a in 0..base.n_symbols() as Symbol {
                if w.last().is_some_and(|&l| !base.follows(l, a)) {
                    continue;
                }
                let mut next = w.clone();
                next.push(a);
                let out = if next.len() == k + 1 {
                    let e = ranker.rank_unchecked(&next) as Symbol;
                    next.remove(0);
                    vec![e]
                } else {
                    Vec::new()
                };
                transitions[q][a as usize] = Some((index[next.as_slice()], out));
            }
        }
        let forward = Self::new(base, hb.presentation(), 0, transitions)?;
        let inverse = Self::symbol_map(hb.presentation(), base, |e| vec![hb.edge_word(e)[0]])?;
        Ok((forward, inverse))
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Transducer) -> Result<Self> {
        if !same_presentation(&first.codomain, &self.domain) {
            return Err(Error::DomainMismatch);
        }
        let start = (first.initial, self.initial);
        let mut index = HashMap::from([(start, 0usize)]);
        let mut states = vec![start];
        let mut transitions = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (q1, q2) = states[i];
            let mut row = Vec::with_capacity(first.domain.n_symbols());
            for a in 0..first.domain.n_symbols() {
                let t = first.transitions[q1][a].as_ref().and_then(|(n1, w)| {
                    let (n2, out) = self.run(q2, w).ok()?;
                    let key = (*n1, n2);
                    let j = *index.entry(key).or_insert_with(|| {
                        states.push(key);
                        states.len() - 1
                    });
                    Some((j, out))
                });
                row.push(t);
            }
            transitions.push(row);
            i += 1;
        }
        Self::new(&first.domain, &self.codomain, 0, transitions)
    }
}

struct ContextGraph {
    edges: Vec<Vec<(usize, bool)>>,
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
    fn identity_applies() {
        let p = fib();
        let id = Transducer::identity(&p);
        let x = EventuallyPeriodicPoint::new(&p, vec![1], vec![0, 0, 1]).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn starving_machine_rejected() {
        let p = fib();
        let row = vec![Some((0, vec![])), Some((0, vec![1]))];
        assert_eq!(Transducer::new(&p, &p, 0, vec![row]), Err(Error::Starvation));
    }

    #[test]
    fn inadmissible_output_rejected() {
        let p = fib();
        let row = vec![Some((0, vec![1])), Some((0, vec![1]))];
        assert!(matches!(Transducer::new(&p, &p, 0, vec![row]), Err(Error::InadmissibleOutput(_))));
    }

    #[test]
    fn incomplete_machine_rejected() {
        let p = fib();
        let row = vec![Some((0, vec![0])), None];
        assert!(matches!(
            Transducer::new(&p, &p, 0, vec![row]),
            Err(Error::UndefinedTransition { .. })
        ));
    }

    #[test]
    fn block_conjugacy_round_trip() {
        let p = fib();
        let hb = p.higher_block(2).unwrap();
        let (fwd, inv) = Transducer::block_conjugacy(&hb).unwrap();
        let back = inv.compose(&fwd).unwrap();
        for x in p.eventually_periodic_points(3, 4).unwrap() {
            let y = fwd.apply(&x).unwrap();
            assert_eq!(y.prefix(5), hb.encode(&x.prefix(7)).unwrap());
            assert_eq!(inv.apply(&y).unwrap(), x);
            assert_eq!(back.apply(&x).unwrap(), x);
        }
    }
}
