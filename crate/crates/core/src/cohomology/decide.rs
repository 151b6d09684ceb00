use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{LocallyConstantFunction, Ring};
use crate::error::{Error, Result};
use crate::sft::{Presentation, Symbol};

/// Result of asking whether `[f] = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Vanishing {
    /// `f = b - b o sigma` for the contained `b`.
    Coboundary(LocallyConstantFunction),
    /// A cyclically admissible word whose orbit sum is `sum != 0`.
    NonzeroCycle { cycle: Vec<Symbol>, sum: BigRational },
}

impl Vanishing {
    pub fn is_zero(&self) -> bool {
        matches!(self, Vanishing::Coboundary(_))
    }

    pub fn witness(&self) -> Option<&LocallyConstantFunction> {
        match self {
            Vanishing::Coboundary(b) => Some(b),
            Vanishing::NonzeroCycle { .. } => None,
        }
    }
}

/// Result of asking whether `[f]` lies in the positive cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Positivity {
    /// `representative = f + b - b o sigma` is pointwise nonnegative.
    Nonnegative {
        representative: LocallyConstantFunction,
        transfer: LocallyConstantFunction,
    },
    NegativeCycle { cycle: Vec<Symbol>, sum: BigRational },
}

impl Positivity {
    pub fn is_nonnegative(&self) -> bool {
        matches!(self, Positivity::Nonnegative { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderUnit {
    Yes,
    /// A cycle with orbit sum `<= 0`.
    No { cycle: Vec<Symbol>, sum: BigRational },
}

impl OrderUnit {
    pub fn is_order_unit(&self) -> bool {
        matches!(self, OrderUnit::Yes)
    }
}

/// Graph with vertices `B_{d-1}` and one edge per word of `B_d`, from its
/// prefix to its suffix; edge `i` is the `i`-th word of `B_d`.
struct PotentialGraph {
    d: usize,
    n: usize,
    tail: Vec<usize>,
    head: Vec<usize>,
    first: Vec<Symbol>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl PotentialGraph {
    fn new(p: &Presentation, d: usize) -> Result<Self> {
        debug_assert!(d >= 2);
        let ranker = p.ranker(d - 1)?;
        let n = p.word_count(d - 1) as usize;
        let words = p.word_table(d)?;
        let mut g = PotentialGraph {
            d,
            n,
            tail: Vec::with_capacity(words.len()),
            head: Vec::with_capacity(words.len()),
            first: Vec::with_capacity(words.len()),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        };
        for (i, w) in words.iter().enumerate() {
            let t = ranker.rank_unchecked(&w[..d - 1]);
            let h = ranker.rank_unchecked(&w[1..]);
            g.tail.push(t);
            g.head.push(h);
            g.first.push(w[0]);
            g.out[t].push(i);
            g.inc[h].push(i);
        }
        Ok(g)
    }

    /// Periodic word traced by a closed walk.
    fn cycle_word(&self, walk: &[usize]) -> Vec<Symbol> {
        debug_assert!(walk
            .iter()
            .zip(walk.iter().cycle().skip(1))
            .all(|(&a, &b)| self.head[a] == self.tail[b]));
        walk.iter().map(|&e| self.first[e]).collect()
    }

    /// BFS arborescence from vertex 0; `parent[v]` is the tree edge into `v`.
    fn out_tree(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut order = vec![0];
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &e in &self.out[u] {
                let v = self.head[e];
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(e);
                    order.push(v);
                }
            }
        }
        debug_assert_eq!(order.len(), self.n);
        (order, parent)
    }

    /// BFS in-arborescence to vertex 0; `next[v]` is the tree edge leaving `v`.
    fn in_tree(&self) -> Vec<Option<usize>> {
        let mut next = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.inc[u] {
                let v = self.tail[e];
                if !seen[v] {
                    seen[v] = true;
                    next[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        next
    }

    fn path_from_root(&self, parent: &[Option<usize>], v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(e) = parent[cur] {
            path.push(e);
            cur = self.tail[e];
        }
        path.reverse();
        path
    }

    fn path_to_root(&self, next: &[Option<usize>], v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(e) = next[cur] {
            path.push(e);
            cur = self.head[e];
        }
        path
    }
}

fn decision_depth(f: &LocallyConstantFunction, d: usize) -> usize {
    d.max(f.depth()).max(2)
}

impl LocallyConstantFunction {
    /// Decides `[f] = 0` on the potential graph of depth `max(depth, 2)`.
    pub fn class_is_zero(&self) -> Result<Vanishing> {
        self.class_is_zero_at(2)
    }

    /// Same decision on the potential graph at depth `max(d, depth, 2)`.
    pub fn class_is_zero_at(&self, d: usize) -> Result<Vanishing> {
        let p = self.presentation();
        let d = decision_depth(self, d);
        let g = PotentialGraph::new(p, d)?;
        let w = self.table_at(d)?;
        let (order, parent) = g.out_tree();
        let mut b = vec![BigRational::zero(); g.n];
        for &v in &order[1..] {
            let e = parent[v].expect("tree edge");
            b[v] = &b[g.tail[e]] - &w[e];
        }
        let delta =
            |e: usize| -> BigRational { &w[e] - (&b[g.tail[e]] - &b[g.head[e]]) };
        let bad = (0..w.len()).find(|&e| !delta(e).is_zero());
        let Some(e) = bad else {
            let witness = LocallyConstantFunction::new(p, d - 1, b, self.ring())?;
            assert_eq!(witness.coboundary()?, *self, "coboundary witness failed");
            return Ok(Vanishing::Coboundary(witness));
        };
        let next = g.in_tree();
        let back = g.path_to_root(&next, g.head[e]);
        let back_sum: BigRational = back.iter().map(|&x| delta(x)).sum();
        let mut walk;
        if !(&back_sum + delta(e)).is_zero() {
            walk = g.path_from_root(&parent, g.tail[e]);
            walk.push(e);
        } else {
            walk = g.path_from_root(&parent, g.head[e]);
        }
        walk.extend(back);
        let cycle = g.cycle_word(&walk);
        let sum = self.orbit_sum(&cycle)?;
        assert!(!sum.is_zero(), "violating cycle has zero orbit sum");
        Ok(Vanishing::NonzeroCycle { cycle, sum })
    }

    pub fn class_equal(&self, other: &Self) -> Result<Vanishing> {
        self.sub(other)?.class_is_zero()
    }

    /// Decides whether `f` is cohomologous to a nonnegative function by
    /// Bellman-Ford on the difference constraints `b(head) <= b(tail) + f`.
    pub fn class_is_nonnegative(&self) -> Result<Positivity> {
        let (g, w) = self.integer_graph()?;
        match shortest_potentials(&g, &w) {
            Ok(dist) => {
                let p = self.presentation();
                let dist_q = dist.into_iter().map(BigRational::from_integer).collect();
                let transfer = LocallyConstantFunction::new(p, g.d - 1, dist_q, Ring::Integer)?;
                let representative = self.add(&transfer.coboundary()?)?;
                assert!(
                    representative.table().iter().all(|v| !v.is_negative()),
                    "representative has a negative value"
                );
                Ok(Positivity::Nonnegative {
                    representative,
                    transfer,
                })
            }
            Err(walk) => {
                let cycle = g.cycle_word(&walk);
                let sum = self.orbit_sum(&cycle)?;
                assert!(sum.is_negative(), "reported cycle is not negative");
                Ok(Positivity::NegativeCycle { cycle, sum })
            }
        }
    }

    /// `[f]` is an order unit iff every periodic orbit sum is strictly positive.
    pub fn order_unit_check(&self) -> Result<OrderUnit> {
        let (g, w) = self.integer_graph()?;
        let dist = match shortest_potentials(&g, &w) {
            Ok(dist) => dist,
            Err(walk) => {
                let cycle = g.cycle_word(&walk);
                let sum = self.orbit_sum(&cycle)?;
                return Ok(OrderUnit::No { cycle, sum });
            }
        };
        // reduced weights are nonnegative; zero cycles live in the tight subgraph
        let tight: Vec<bool> = (0..w.len())
            .map(|e| (&w[e] + &dist[g.tail[e]] - &dist[g.head[e]]).is_zero())
            .collect();
        match find_cycle(&g, &tight) {
            None => Ok(OrderUnit::Yes),
            Some(walk) => {
                let cycle = g.cycle_word(&walk);
                let sum = self.orbit_sum(&cycle)?;
                assert!(sum.is_zero());
                Ok(OrderUnit::No { cycle, sum })
            }
        }
    }

    fn integer_graph(&self) -> Result<(PotentialGraph, Vec<BigInt>)> {
        if self.ring() != Ring::Integer {
            return Err(Error::RationalNotSupported);
        }
        let d = decision_depth(self, 2);
        let g = PotentialGraph::new(self.presentation(), d)?;
        let w = self.table_at(d)?.into_iter().map(|v| v.to_integer()).collect();
        Ok((g, w))
    }
}

/// Bellman-Ford from a virtual source at distance 0; returns either the
/// potentials or a closed walk of negative weight.
fn shortest_potentials(g: &PotentialGraph, w: &[BigInt]) -> std::result::Result<Vec<BigInt>, Vec<usize>> {
    let mut dist = vec![BigInt::zero(); g.n];
    let mut pred: Vec<Option<usize>> = vec![None; g.n];
    let mut last = None;
    for _ in 0..=g.n {
        last = None;
        for e in 0..w.len() {
            let cand = &dist[g.tail[e]] + &w[e];
            if cand < dist[g.head[e]] {
                dist[g.head[e]] = cand;
                pred[g.head[e]] = Some(e);
                last = Some(g.head[e]);
            }
        }
        if last.is_none() {
            return Ok(dist);
        }
    }
    let mut v = last.expect("relaxed in the final round");
    for _ in 0..g.n {
        v = g.tail[pred[v].expect("predecessor")];
    }
    let start = v;
    let mut walk = Vec::new();
    loop {
        let e = pred[v].expect("predecessor");
        walk.push(e);
        v = g.tail[e];
        if v == start {
            break;
        }
    }
    walk.reverse();
    Err(walk)
}

/// Any directed cycle using only edges with `allowed[e]`.
fn find_cycle(g: &PotentialGraph, allowed: &[bool]) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; g.n];
    let mut via: Vec<Option<usize>> = vec![None; g.n];
    for root in 0..g.n {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        state[root] = 1;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i == g.out[u].len() {
                state[u] = 2;
                stack.pop();
                continue;
            }
            let e = g.out[u][*i];
            *i += 1;
            if !allowed[e] {
                continue;
            }
            let v = g.head[e];
            match state[v] {
                0 => {
                    state[v] = 1;
                    via[v] = Some(e);
                    stack.push((v, 0));
                }
                1 => {
                    let mut walk = vec![e];
                    let mut cur = u;
                    while cur != v {
                        let pe = via[cur].expect("tree edge");
                        walk.push(pe);
                        cur = g.tail[pe];
                    }
                    walk.reverse();
                    return Some(walk);
                }
                _ => {}
            }
        }
    }
    None
}
