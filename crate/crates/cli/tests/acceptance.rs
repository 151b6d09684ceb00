//! Acceptance suite: one pass/fail line per criterion.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use sftlab::actions::CircleAction;
use sftlab::classify::{coe_verdict, flow_equivalent, InvariantReport, Verdict};
use sftlab::cohomology::{LocallyConstantFunction, Positivity, Vanishing};
use sftlab::intlat::{cokernel, smith, IntMatrix};
use sftlab::moves::{expand, BijectionOrder, ElementaryEquivalence};
use sftlab::random::{elementary_pair, integer_function, rng_for, vertex_presentation, TestRng};
use sftlab::sft::{EventuallyPeriodicPoint, Presentation, PresentationKind, SftPresentation, Symbol};
use sftlab::transducer::{
    equivalent_maps, is_eventual_conjugacy, is_strong_coe, transfer_psi, verify_orbit_relation, OrbitData,
    Transducer,
};

const SEED: u64 = 20_160_601;

struct Pass {
    detail: String,
    notes: Vec<String>,
}

type Outcome = Result<Pass, String>;

fn pass(detail: impl Into<String>) -> Outcome {
    Ok(Pass {
        detail: detail.into(),
        notes: Vec::new(),
    })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(criterion: u64, i: u64) -> TestRng {
    rng_for(SEED, (criterion << 32) | i)
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn vertex(rows: &[Vec<i64>]) -> Presentation {
    SftPresentation::validate(&IntMatrix::from_rows(rows), PresentationKind::Vertex).unwrap()
}

fn fib() -> Presentation {
    vertex(&[vec![1, 1], vec![1, 0]])
}

fn full(n: usize) -> Presentation {
    vertex(&vec![vec![1; n]; n])
}

fn up_to(rng: &mut TestRng, p: &Presentation, max_depth: usize) -> LocallyConstantFunction {
    let d = rng.gen_range(1..=max_depth);
    integer_function(rng, p, d, -5, 5)
}

/// Word -> value, read off the table of `f`.
fn lookup(f: &LocallyConstantFunction) -> HashMap<Vec<Symbol>, BigRational> {
    let p = f.presentation();
    p.word_table(f.depth())
        .unwrap()
        .iter()
        .zip(f.table())
        .map(|(w, v)| (w.to_vec(), v.clone()))
        .collect()
}

/// Checks a `NonzeroCycle` certificate by recomputing the orbit sum
/// symbol by symbol.
fn cycle_certificate(f: &LocallyConstantFunction, v: &Vanishing) -> Result<(Vec<Symbol>, BigRational), String> {
    let Vanishing::NonzeroCycle { cycle, sum } = v else {
        return Err("expected a cycle certificate".into());
    };
    let p = f.presentation();
    check(p.is_cyclically_admissible(cycle), || "certificate cycle not cyclically admissible".into())?;
    let table = lookup(f);
    let m = cycle.len();
    let total: BigRational = (0..m)
        .map(|i| {
            let w: Vec<Symbol> = (0..f.depth()).map(|j| cycle[(i + j) % m]).collect();
            table[&w].clone()
        })
        .sum();
    check(&total == sum && !sum.is_zero(), || format!("certificate sum {sum} but recomputed {total}"))?;
    Ok((cycle.clone(), total))
}

/// Determinant by Gaussian elimination over the rationals.
fn det_oracle(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let factor = &a[r][c] / &a[c][c];
            for k in c..n {
                let sub = &factor * &a[c][k];
                a[r][k] -= sub;
            }
        }
    }
    det.to_integer()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors `D_k / D_{k-1}` from gcds of all `k x k` minors.
fn minor_gcd_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                    .collect();
                g = g.gcd(&det_oracle(&minor));
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat(BigInt::zero()).take(r.min(c) - out.len()));
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn snf_matches_oracle(m: &IntMatrix) -> Result<(), String> {
    let dec = smith(m);
    check(dec.verify(m), || "Smith decomposition fails re-verification".into())?;
    let oracle = minor_gcd_factors(m);
    check(dec.diagonal() == oracle, || {
        format!("SNF diagonal {:?} but minor gcds give {:?}", dec.diagonal(), oracle)
    })
}

fn nontrivial_factors(m: &IntMatrix) -> Vec<BigInt> {
    minor_gcd_factors(m).into_iter().filter(|d| !d.is_one()).collect()
}

// 1
fn cohomology_soundness() -> Outcome {
    let n = 200;
    for i in 0..n {
        let mut rng = rng(1, i);
        let p = vertex_presentation(&mut rng, 6);
        let b = up_to(&mut rng, &p, 3);
        let f = b.coboundary().map_err(e)?;
        let v = f.class_is_zero().map_err(e)?;
        let w = v.witness().ok_or_else(|| format!("instance {i}: coboundary reported nonzero"))?;
        check(w.coboundary().map_err(e)? == f, || format!("instance {i}: witness does not reproduce f"))?;
        let g = f.add(&LocallyConstantFunction::one(&p)).map_err(e)?;
        let (cycle, sum) = cycle_certificate(&g, &g.class_is_zero().map_err(e)?).map_err(|m| format!("instance {i}: {m}"))?;
        check(sum == BigRational::from_integer(cycle.len().into()), || {
            format!("instance {i}: orbit sum of coboundary + 1 differs from the period")
        })?;
    }
    pass(format!("{n}/{n} instances, witnesses and cycle certificates verified"))
}

// 2
fn cocycle_round_trip() -> Outcome {
    let n = 100;
    for i in 0..n {
        let mut rng = rng(2, i);
        let p = vertex_presentation(&mut rng, 6);
        let f = up_to(&mut rng, &p, 2);
        let b = up_to(&mut rng, &p, 3);
        let db = b.coboundary().map_err(e)?;
        let alpha = CircleAction::new(f.clone()).map_err(e)?;
        let beta = CircleAction::new(f.add(&db).map_err(e)?).map_err(e)?;
        let v = alpha.equivalent(&beta).map_err(e)?;
        let w = v.witness().ok_or_else(|| format!("instance {i}: not equivalent"))?;
        check(w.coboundary().map_err(e)? == db, || format!("instance {i}: witness coboundary differs"))?;
        let gauge = CircleAction::gauge(&p);
        let v = gauge.equivalent(&CircleAction::identity(&p)).map_err(e)?;
        check(!v.is_zero(), || format!("instance {i}: gauge equivalent to identity"))?;
        cycle_certificate(&LocallyConstantFunction::one(&p).negate(), &v).map_err(|m| format!("instance {i}: {m}"))?;
    }
    pass(format!("{n}/{n} instances"))
}

/// `f o sigma` as a table over `B_{depth + 1}`.
fn pullback_oracle(f: &LocallyConstantFunction) -> Vec<BigRational> {
    let table = lookup(f);
    f.presentation()
        .word_table(f.depth() + 1)
        .unwrap()
        .iter()
        .map(|w| table[&w[1..]].clone())
        .collect()
}

fn table_equals(f: &LocallyConstantFunction, depth: usize, expected: &[BigRational]) -> bool {
    f.depth() <= depth && f.table_at(depth).map(|t| t == expected).unwrap_or(false)
}

// 3
fn elementary_identities() -> Outcome {
    let n = 100;
    for i in 0..n {
        let mut rng = rng(3, i);
        let ee = elementary_pair(&mut rng, 4, 2, 3, 50_000);
        let ee = if i % 2 == 0 {
            ee
        } else {
            ElementaryEquivalence::with_order(ee.c(), ee.d(), BijectionOrder::ReverseLex).map_err(e)?
        };
        let f = up_to(&mut rng, ee.a(), 2);
        let g = up_to(&mut rng, ee.b(), 2);
        let psi_phi = ee.psi(&ee.phi(&f).map_err(e)?).map_err(e)?;
        check(table_equals(&psi_phi, f.depth() + 1, &pullback_oracle(&f)), || {
            format!("instance {i}: psi(phi(f)) != f o sigma")
        })?;
        let phi_psi = ee.phi(&ee.psi(&g).map_err(e)?).map_err(e)?;
        check(table_equals(&phi_psi, g.depth() + 1, &pullback_oracle(&g)), || {
            format!("instance {i}: phi(psi(g)) != g o sigma")
        })?;
    }
    pass(format!("{n}/{n} (C, D) pairs, both bijection orders"))
}

// 4
fn expansion_lemma() -> Outcome {
    let n = 100;
    for i in 0..n {
        let mut rng = rng(4, i);
        let p = vertex_presentation(&mut rng, 5);
        let x = expand(&p, 0).map_err(e)?;
        let f = up_to(&mut rng, &p, 3);
        let back = x.psi_xi(&x.psi_eta(&f).map_err(e)?).map_err(e)?;
        check(back == f, || format!("instance {i}: Psi_xi(Psi_eta(f)) != f"))?;

        let ft = up_to(&mut rng, x.expanded(), 3);
        let round = x.psi_eta(&x.psi_xi(&ft).map_err(e)?).map_err(e)?;
        let diff = round.sub(&ft).map_err(e)?;
        let d = ft.depth();
        let table = lookup(&ft);
        let f0 = |w: &[Symbol]| if w[0] == 0 { table[&w[..d]].clone() } else { BigRational::zero() };
        let expected: Vec<BigRational> = x
            .expanded()
            .word_table(d + 1)
            .map_err(e)?
            .iter()
            .map(|w| f0(&w[1..]) - f0(&w[..d]))
            .collect();
        check(table_equals(&diff, d + 1, &expected), || {
            format!("instance {i}: Psi_eta(Psi_xi(f)) - f != f0 o sigma - f0")
        })?;
        check(diff.class_is_zero().map_err(e)?.is_zero(), || format!("instance {i}: difference not a coboundary"))?;
    }
    pass(format!("{n}/{n} instances"))
}

// 5
fn parry_sullivan_invariance() -> Outcome {
    let n = 100;
    for i in 0..n {
        let mut rng = rng(5, i);
        let p = vertex_presentation(&mut rng, 6);
        let x = expand(&p, 0).map_err(e)?;
        let a = p.adjacency_matrix().identity_minus();
        let b = x.matrix().identity_minus();
        check(det_oracle(&a.to_rows()) == det_oracle(&b.to_rows()), || format!("instance {i}: det changed"))?;
        check(a.determinant() == det_oracle(&a.to_rows()), || format!("instance {i}: library det disagrees"))?;
        check(nontrivial_factors(&a) == nontrivial_factors(&b), || format!("instance {i}: invariant factors changed"))?;
        check(cokernel(&a) == cokernel(&b), || format!("instance {i}: library cokernels differ"))?;
    }
    pass(format!("{n}/{n} instances, det and invariant factors by independent oracles"))
}

// 6
fn transducer_agreement() -> Outcome {
    let mut cases = vec![fib()];
    cases.extend((0..30).map(|i| vertex_presentation(&mut rng(6, i), 4)));
    for (i, p) in cases.iter().enumerate() {
        let mut rng = rng(6, 1000 + i as u64);
        let x = expand(p, 0).map_err(e)?;
        let ft = up_to(&mut rng, x.expanded(), 2);
        check(transfer_psi(x.xi(), x.xi_data(), &ft).map_err(e)? == x.psi_xi(&ft).map_err(e)?, || {
            format!("case {i}: transfer_psi(xi) != psi_xi")
        })?;
        let f = up_to(&mut rng, p, 2);
        check(transfer_psi(x.eta(), x.eta_data(), &f).map_err(e)? == x.psi_eta(&f).map_err(e)?, || {
            format!("case {i}: transfer_psi(eta) != psi_eta")
        })?;
        check(verify_orbit_relation(x.xi(), x.xi_data()).map_err(e)?.holds(), || format!("case {i}: xi orbit relation"))?;
        check(verify_orbit_relation(x.eta(), x.eta_data()).map_err(e)?.holds(), || format!("case {i}: eta orbit relation"))?;
        let composed = x.eta().compose(x.xi()).map_err(e)?;
        check(equivalent_maps(&composed, &Transducer::identity(p), 4).map_err(e)?.is_equal(), || {
            format!("case {i}: eta o xi not the identity within delay bound 4")
        })?;
    }
    pass(format!("{}/{} shifts (Fibonacci and random)", cases.len(), cases.len()))
}

fn report_lines(name: &str, r: &InvariantReport) -> String {
    format!(
        "{name}: BF = {}, sgn det(I-A) = {}, K0 = {}",
        r.bf_group, r.det_sign, r.k0_pointed
    )
}

// 7
fn classification_fixtures() -> Outcome {
    let mut notes = Vec::new();
    let (f, f2, f3) = (fib(), full(2), full(3));
    let fe = flow_equivalent(&f, &f2);
    let ce = coe_verdict(&f, &f2);
    notes.push(report_lines("fibonacci", &fe.a));
    notes.push(report_lines("full-2", &fe.b));
    notes.push(format!("fibonacci vs full-2: flow {}, coe {}", yes(fe.equivalent), ce.verdict));
    check(fe.equivalent && ce.verdict == Verdict::Yes, || "fibonacci vs full-2 not yes/yes".into())?;
    let fe = flow_equivalent(&f2, &f3);
    let ce = coe_verdict(&f2, &f3);
    notes.push(report_lines("full-3", &fe.b));
    notes.push(format!("full-2 vs full-3: flow {}, coe {}", yes(fe.equivalent), ce.verdict));
    check(!fe.equivalent && ce.verdict == Verdict::No, || "full-2 vs full-3 not no/no".into())?;
    check(fe.a.bf_group.is_trivial() && fe.b.bf_group.to_string() == "Z/2", || "BF groups not trivial vs Z/2".into())?;

    let mut oracle_checked = 0;
    for p in [&f, &f2, &f3] {
        snf_matches_oracle(&p.adjacency_matrix().identity_minus())?;
        oracle_checked += 1;
    }
    let n = 50;
    for i in 0..n {
        let p = vertex_presentation(&mut rng(7, i), 6);
        let x = expand(&p, 0).map_err(e)?;
        check(flow_equivalent(&p, x.expanded()).equivalent, || format!("instance {i}: A vs expand(A) not flow equivalent"))?;
        if p.n_vertices() <= 4 {
            snf_matches_oracle(&p.adjacency_matrix().identity_minus())?;
            oracle_checked += 1;
        }
    }
    for i in 0..100 {
        let mut rng = rng(7, 1000 + i);
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        snf_matches_oracle(&IntMatrix::from_rows(&rows))?;
        oracle_checked += 1;
    }
    Ok(Pass {
        detail: format!("fixtures as expected, {n}/{n} expansions flow equivalent, {oracle_checked} SNFs match minor gcds"),
        notes,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// 8
fn order_structure() -> Outcome {
    let mut cases = vec![fib(), full(2), full(3)];
    cases.extend((0..100).map(|i| vertex_presentation(&mut rng(8, i), 6)));
    for (i, p) in cases.iter().enumerate() {
        let gauge = CircleAction::gauge(p);
        match gauge.class_nonnegative().map_err(e)? {
            Positivity::Nonnegative { representative, .. } => {
                check(!representative.table().iter().any(Signed::is_negative), || format!("case {i}: negative representative"))?;
                check(representative.class_equal(gauge.classifier()).map_err(e)?.is_zero(), || {
                    format!("case {i}: representative not cohomologous")
                })?;
            }
            Positivity::NegativeCycle { .. } => return Err(format!("case {i}: gauge not nonnegative")),
        }
        check(gauge.order_unit_check().map_err(e)?.is_order_unit(), || format!("case {i}: 1 not an order unit"))?;
        check(!gauge.inverse().class_nonnegative().map_err(e)?.is_nonnegative(), || {
            format!("case {i}: inverse gauge nonnegative")
        })?;
    }
    pass(format!("{}/{} shifts", cases.len(), cases.len()))
}

// 9
fn coe_detectors() -> Outcome {
    let mut cases = vec![fib(), full(2)];
    cases.extend((0..10).map(|i| vertex_presentation(&mut rng(9, i), 4)));
    let mut conjugacies = 0;
    for (i, p) in cases.iter().enumerate() {
        for k in [2, 3] {
            let hb = p.higher_block(k).map_err(e)?;
            let (fwd, inv) = Transducer::block_conjugacy(&hb).map_err(e)?;
            let (dh, dg) = (OrbitData::conjugacy(p), OrbitData::conjugacy(hb.presentation()));
            check(is_eventual_conjugacy(&fwd, &dh, &inv, &dg).map_err(e)?, || {
                format!("case {i}, k = {k}: block conjugacy not an eventual conjugacy")
            })?;
            conjugacies += 1;
        }
    }
    let p = fib();
    let x = expand(&p, 0).map_err(e)?;
    check(!is_eventual_conjugacy(x.xi(), x.xi_data(), x.eta(), x.eta_data()).map_err(e)?, || {
        "xi reported as eventual conjugacy".into()
    })?;
    let strong = is_strong_coe(x.xi(), x.xi_data()).map_err(e)?;
    check(!strong.is_zero(), || "xi reported strong".into())?;
    let fixed = EventuallyPeriodicPoint::periodic(&p, vec![0]).map_err(e)?;
    let psi_one = transfer_psi(x.xi(), x.xi_data(), &LocallyConstantFunction::one(x.expanded())).map_err(e)?;
    let at_fixed = psi_one.evaluate(&fixed);
    check(at_fixed == BigRational::from_integer(2.into()), || format!("Psi_xi(1) at 1^inf is {at_fixed}, expected 2"))?;
    let (cycle, sum) = cycle_certificate(&psi_one.sub(&LocallyConstantFunction::one(&p)).map_err(e)?, &strong)?;
    check(cycle == vec![0] && sum.is_one(), || format!("strong-coe certificate ({cycle:?}, {sum}) is not the fixed point"))?;
    pass(format!(
        "{conjugacies} block conjugacies eventual; xi on Fibonacci: eventual no, strong no, orbit sums 2 vs 1 at 1^inf"
    ))
}

// 10
struct GoldenCase {
    name: &'static str,
    args: &'static [&'static str],
}

const GOLDEN: &[GoldenCase] = &[
    GoldenCase { name: "validate_fib", args: &["validate", "fib.mat"] },
    GoldenCase { name: "words_fib_4", args: &["words", "fib.mat", "4"] },
    GoldenCase { name: "snf_full3", args: &["snf", "full3.mat"] },
    GoldenCase { name: "invariants_fib", args: &["invariants", "fib.mat"] },
    GoldenCase { name: "invariants_full3", args: &["invariants", "full3.mat"] },
    GoldenCase { name: "flow_fib_full2", args: &["flow-equiv", "fib.mat", "full2.mat"] },
    GoldenCase { name: "flow_full2_full3", args: &["flow-equiv", "full2.mat", "full3.mat"] },
    GoldenCase { name: "coe_fib_full2", args: &["coe", "fib.mat", "full2.mat"] },
    GoldenCase { name: "coe_full2_full3", args: &["coe", "full2.mat", "full3.mat"] },
    GoldenCase { name: "cohom_zero", args: &["cohom", "class-equal", "fib.mat", "cob.fn"] },
    GoldenCase { name: "cohom_equal", args: &["cohom", "class-equal", "fib.mat", "f.fn", "one.fn"] },
    GoldenCase { name: "cohom_positive_minus_one", args: &["cohom", "positive", "fib.mat", "minus_one.fn"] },
    GoldenCase { name: "cohom_positive_f", args: &["cohom", "positive", "fib.mat", "f.fn"] },
    GoldenCase { name: "cohom_orbit_sum", args: &["cohom", "orbit-sum", "fib.mat", "f.fn", "12"] },
    GoldenCase { name: "action_compose", args: &["action", "compose", "fib.mat", "one.fn", "f.fn"] },
    GoldenCase { name: "action_equivalent", args: &["action", "equivalent", "fib.mat", "f.fn", "cob.fn"] },
    GoldenCase { name: "action_positive", args: &["action", "positive", "fib.mat", "one.fn"] },
    GoldenCase {
        name: "action_phase",
        args: &["action", "phase", "fib.mat", "f.fn", "12", "--point", "(1)", "--t", "1/3"],
    },
    GoldenCase { name: "transducer_apply", args: &["transducer", "apply", "fib.mat", "fib2.mat", "block.tdx", "2(1)"] },
    GoldenCase {
        name: "transducer_compose",
        args: &["transducer", "compose", "fib.mat", "fib2.mat", "fib.mat", "block.tdx", "unblock.tdx"],
    },
    GoldenCase { name: "transducer_equiv", args: &["transducer", "equiv", "fib.mat", "fib.mat", "id.tdx", "id.tdx"] },
    GoldenCase {
        name: "transducer_verify_coe",
        args: &[
            "transducer", "verify-coe", "fib.mat", "fib2.mat", "block.tdx", "zero.fn", "one.fn", "unblock.tdx",
            "zero2.fn", "one2.fn",
        ],
    },
    GoldenCase {
        name: "transducer_psi",
        args: &["transducer", "psi", "fib.mat", "fib2.mat", "block.tdx", "zero.fn", "one.fn", "g2.fn"],
    },
    GoldenCase { name: "expand_fib", args: &["expand", "fib.mat"] },
    GoldenCase { name: "expand_fib_2", args: &["expand", "fib.mat", "--vertex", "2"] },
    GoldenCase { name: "elementary", args: &["elementary", "c.mat", "d.mat"] },
    GoldenCase { name: "transfer_phi", args: &["transfer", "phi", "c.mat", "d.mat", "fcd.fn"] },
    GoldenCase { name: "transfer_psi_xi", args: &["transfer", "psi-xi", "fib.mat", "fexp.fn"] },
    GoldenCase { name: "transfer_psi_eta", args: &["transfer", "psi-eta", "fib.mat", "f.fn"] },
    GoldenCase {
        name: "sse_two_full2",
        args: &["sse-search", "two.mat", "full2.mat", "--inner-dim", "2", "--entry", "1", "--chain", "1"],
    },
    GoldenCase { name: "selftest", args: &["selftest", "--instances", "10"] },
    GoldenCase { name: "json_coe", args: &["--json", "coe", "fib.mat", "full2.mat"] },
    GoldenCase { name: "json_invariants_full3", args: &["--json", "invariants", "full3.mat"] },
];

fn test_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run_cli(args: &[&str], threads: Option<&str>) -> Result<String, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sftlab"));
    cmd.current_dir(test_dir().join("fixtures")).args(args);
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    let out = cmd.output().map_err(e)?;
    if !out.status.success() {
        return Err(format!(
            "`sftlab {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    String::from_utf8(out.stdout).map_err(e)
}

fn cli_determinism() -> Outcome {
    let bless = std::env::var_os("SFTLAB_BLESS").is_some();
    let golden_dir = test_dir().join("golden");
    for case in GOLDEN {
        let path = golden_dir.join(format!("{}.txt", case.name));
        let first = run_cli(case.args, None)?;
        if bless {
            std::fs::write(&path, &first).map_err(e)?;
        }
        let golden = std::fs::read_to_string(&path).map_err(|err| format!("{}: {err}", path.display()))?;
        let runs = [
            ("first run", first),
            ("second run", run_cli(case.args, None)?),
            ("1 thread", run_cli(case.args, Some("1"))?),
            ("4 threads", run_cli(case.args, Some("4"))?),
        ];
        for (label, out) in runs {
            check(out == golden, || format!("{}: {label} differs from the golden file", case.name))?;
        }
    }
    pass(format!("{} reports identical to golden files across 2 runs and 1/4 threads", GOLDEN.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("cohomology decision soundness", cohomology_soundness),
        ("cocycle conjugacy round trip", cocycle_round_trip),
        ("elementary equivalence transfer identities", elementary_identities),
        ("expansion transfer identities", expansion_lemma),
        ("expansion invariance of det and Bowen-Franks", parry_sullivan_invariance),
        ("transducer and formula agreement", transducer_agreement),
        ("classification fixtures", classification_fixtures),
        ("order structure of the gauge action", order_structure),
        ("eventual and strong orbit equivalence detectors", coe_detectors),
        ("CLI determinism", cli_determinism),
    ];
    println!("acceptance suite, seed {SEED}");
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(p) => {
                println!("[PASS] {:>2} {name}: {} ({secs:.1}s)", i + 1, p.detail);
                for n in p.notes {
                    println!("          {n}");
                }
            }
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
