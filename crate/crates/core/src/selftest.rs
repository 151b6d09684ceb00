//! Randomized lemma suite run by `sftlab selftest`.
//!
//! Every instance draws from its own random stream, so reports depend only
//! on the seed and the instance count, never on the thread count.

use std::fmt;

use num_traits::Signed;
use rayon::prelude::*;

use crate::actions::CircleAction;
use crate::cohomology::{LocallyConstantFunction, Positivity, Vanishing};
use crate::intlat::{cokernel, det_sign};
use crate::moves::{expand, BijectionOrder, ElementaryEquivalence};
use crate::random::{elementary_pair, function_up_to, integer_function, rng_for, vertex_presentation, TestRng};
use crate::sft::Symbol;
use crate::transducer::transfer_psi;

type Outcome = std::result::Result<(), String>;
type Check = fn(&mut TestRng) -> Outcome;

const CHECKS: [(&str, Check); 7] = [
    ("coboundary-vanishing", coboundary_vanishing),
    ("cocycle-conjugacy", cocycle_conjugacy),
    ("gauge-order", gauge_order),
    ("elementary-transfer", elementary_transfer),
    ("expansion-transfer", expansion_transfer),
    ("expansion-invariants", expansion_invariants),
    ("transducer-agreement", transducer_agreement),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Index and message of the first failing instance.
    pub first_failure: Option<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed == c.total)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed: {}", self.seed)?;
        for c in &self.checks {
            write!(f, "{}: {}/{}", c.name, c.passed, c.total)?;
            if let Some((i, msg)) = &c.first_failure {
                write!(f, " (first failure at instance {i}: {msg})")?;
            }
            writeln!(f)?;
        }
        write!(f, "result: {}", if self.all_passed() { "pass" } else { "fail" })
    }
}

pub fn run(seed: u64, instances: usize) -> SelftestReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(ci, (name, check))| {
            let outcomes: Vec<Outcome> = (0..instances)
                .into_par_iter()
                .map(|i| check(&mut rng_for(seed, ((ci as u64) << 32) | i as u64)))
                .collect();
            CheckReport {
                name,
                passed: outcomes.iter().filter(|o| o.is_ok()).count(),
                total: instances,
                first_failure: outcomes
                    .into_iter()
                    .enumerate()
                    .find_map(|(i, o)| o.err().map(|m| (i, m))),
            }
        })
        .collect();
    SelftestReport { seed, checks }
}

fn ensure(cond: bool, msg: &str) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The certificate of a nonzero class is a genuine cycle with the claimed
/// nonzero orbit sum.
fn cycle_certificate_holds(f: &LocallyConstantFunction, v: &Vanishing) -> bool {
    match v {
        Vanishing::NonzeroCycle { cycle, sum } => {
            f.presentation().is_cyclically_admissible(cycle)
                && f.orbit_sum(cycle).as_ref() == Ok(sum)
                && !num_traits::Zero::is_zero(sum)
        }
        Vanishing::Coboundary(_) => false,
    }
}

fn coboundary_vanishing(rng: &mut TestRng) -> Outcome {
    use rand::Rng;
    let p = vertex_presentation(rng, 6);
    let depth = rng.gen_range(1..=3);
    let b = integer_function(rng, &p, depth, -5, 5);
    let f = b.coboundary().map_err(err)?;
    match f.class_is_zero().map_err(err)? {
        Vanishing::Coboundary(w) => ensure(w.coboundary().map_err(err)? == f, "witness does not reproduce f")?,
        Vanishing::NonzeroCycle { .. } => return Err("coboundary reported nonzero".into()),
    }
    let g = f.add(&LocallyConstantFunction::one(&p)).map_err(err)?;
    let v = g.class_is_zero().map_err(err)?;
    ensure(cycle_certificate_holds(&g, &v), "coboundary + 1 lacks a cycle certificate")
}

fn cocycle_conjugacy(rng: &mut TestRng) -> Outcome {
    let p = vertex_presentation(rng, 6);
    let f = function_up_to(rng, &p, 2, -3, 3);
    let b = function_up_to(rng, &p, 3, -5, 5);
    let db = b.coboundary().map_err(err)?;
    let alpha = CircleAction::new(f.clone()).map_err(err)?;
    let beta = CircleAction::new(f.add(&db).map_err(err)?).map_err(err)?;
    let v = alpha.equivalent(&beta).map_err(err)?;
    let w = v.witness().ok_or("cohomologous classifiers reported inequivalent")?;
    ensure(w.coboundary().map_err(err)? == db, "witness coboundary differs")?;
    let gauge = CircleAction::gauge(&p);
    let v = gauge.equivalent(&CircleAction::identity(&p)).map_err(err)?;
    ensure(cycle_certificate_holds(&LocallyConstantFunction::one(&p).negate(), &v), "gauge equivalent to identity")
}

fn gauge_order(rng: &mut TestRng) -> Outcome {
    let p = vertex_presentation(rng, 6);
    let gauge = CircleAction::gauge(&p);
    match gauge.class_nonnegative().map_err(err)? {
        Positivity::Nonnegative { representative, .. } => {
            ensure(!representative.table().iter().any(Signed::is_negative), "negative representative")?;
            ensure(
                representative.class_equal(gauge.classifier()).map_err(err)?.is_zero(),
                "representative not cohomologous",
            )?;
        }
        Positivity::NegativeCycle { .. } => return Err("gauge not nonnegative".into()),
    }
    ensure(gauge.order_unit_check().map_err(err)?.is_order_unit(), "1 is not an order unit")?;
    ensure(
        !gauge.inverse().class_nonnegative().map_err(err)?.is_nonnegative(),
        "inverse gauge nonnegative",
    )
}

fn elementary_transfer(rng: &mut TestRng) -> Outcome {
    use rand::Rng;
    let ee = elementary_pair(rng, 4, 2, 3, 20_000);
    let ee = if rng.gen_bool(0.5) {
        ee
    } else {
        ElementaryEquivalence::with_order(ee.c(), ee.d(), BijectionOrder::ReverseLex).map_err(err)?
    };
    let f = function_up_to(rng, ee.a(), 2, -5, 5);
    let g = function_up_to(rng, ee.b(), 2, -5, 5);
    let psi_phi = ee.psi(&ee.phi(&f).map_err(err)?).map_err(err)?;
    ensure(psi_phi == f.pullback_sigma().map_err(err)?, "psi(phi(f)) != f o sigma")?;
    let phi_psi = ee.phi(&ee.psi(&g).map_err(err)?).map_err(err)?;
    ensure(phi_psi == g.pullback_sigma().map_err(err)?, "phi(psi(g)) != g o sigma")
}

fn expansion_transfer(rng: &mut TestRng) -> Outcome {
    use rand::Rng;
    let p = vertex_presentation(rng, 5);
    let v = rng.gen_range(0..p.n_vertices()) as Symbol;
    let e = expand(&p, v).map_err(err)?;
    let f = function_up_to(rng, &p, 3, -5, 5);
    ensure(e.psi_xi(&e.psi_eta(&f).map_err(err)?).map_err(err)? == f, "Psi_xi Psi_eta f != f")?;
    let ft = function_up_to(rng, e.expanded(), 3, -5, 5);
    let round = e.psi_eta(&e.psi_xi(&ft).map_err(err)?).map_err(err)?;
    let diff = round.sub(&ft).map_err(err)?;
    let f0 = ft
        .mul(&LocallyConstantFunction::indicator(e.expanded(), &[0]).map_err(err)?)
        .map_err(err)?;
    let expected = f0.pullback_sigma().map_err(err)?.sub(&f0).map_err(err)?;
    ensure(diff == expected, "Psi_eta Psi_xi f - f != f0 o sigma - f0")?;
    ensure(diff.class_is_zero().map_err(err)?.is_zero(), "difference not a coboundary")
}

fn expansion_invariants(rng: &mut TestRng) -> Outcome {
    use rand::Rng;
    let p = vertex_presentation(rng, 6);
    let v = rng.gen_range(0..p.n_vertices()) as Symbol;
    let e = expand(&p, v).map_err(err)?;
    let a = p.adjacency_matrix().identity_minus();
    let b = e.matrix().identity_minus();
    ensure(a.determinant() == b.determinant(), "det(I - A) changed")?;
    ensure(det_sign(&a) == det_sign(&b), "det sign changed")?;
    ensure(cokernel(&a) == cokernel(&b), "Bowen-Franks group changed")
}

fn transducer_agreement(rng: &mut TestRng) -> Outcome {
    use rand::Rng;
    let p = vertex_presentation(rng, 4);
    let v = rng.gen_range(0..p.n_vertices()) as Symbol;
    let e = expand(&p, v).map_err(err)?;
    let ft = function_up_to(rng, e.expanded(), 2, -5, 5);
    let via_machine = transfer_psi(e.xi(), e.xi_data(), &ft).map_err(err)?;
    ensure(via_machine == e.psi_xi(&ft).map_err(err)?, "transfer_psi(xi) != psi_xi")?;
    let f = function_up_to(rng, &p, 2, -5, 5);
    let via_machine = transfer_psi(e.eta(), e.eta_data(), &f).map_err(err)?;
    ensure(via_machine == e.psi_eta(&f).map_err(err)?, "transfer_psi(eta) != psi_eta")
}
