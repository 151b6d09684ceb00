use std::path::Path;

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

use sftlab::actions::CircleAction;
use sftlab::classify::{
    coe_verdict, consistency_check, decimal, flow_equivalent, invariants, CoeWitness, InvariantReport,
};
use sftlab::cohomology::{LocallyConstantFunction, OrderUnit, Positivity, Vanishing};
use sftlab::format::{
    parse_function, parse_matrix, parse_point, parse_presentation, parse_transducer, render_function,
    render_point, render_transducer, MatrixFile,
};
use sftlab::intlat::{smith, IntMatrix, PointedIsomorphism};
use sftlab::moves::{expand, sse_search, BijectionOrder, ElementaryEquivalence, Expansion, SseBounds, SseResult};
use sftlab::sft::{Presentation, PresentationKind, Symbol};
use sftlab::transducer::{
    default_delay_bound, equivalent_maps, transfer_psi, verify_orbit_relation, MapEquivalence, OrbitData,
    OrbitRelation, Transducer,
};
use sftlab::Error;

use crate::report::Report;
use crate::{ActionOp, CohomOp, Command, Order, TransducerOp, TransferOp, VerifyCoeArgs};

pub struct Outcome {
    pub report: Report,
    pub status: u8,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, status: 0 }
    }
}

/// 1 for internal contradictions, 2 for everything else.
pub fn exit_status(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::ContradictionDetected(_) | Error::InvalidResult(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

struct Shift {
    id: String,
    p: Presentation,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_matrix(path: &Path) -> Result<(String, MatrixFile)> {
    let file = parse_matrix(&read(path)?).with_context(|| path.display().to_string())?;
    Ok((stem(path), file))
}

fn load_shift(path: &Path) -> Result<Shift> {
    let p = parse_presentation(&read(path)?).with_context(|| path.display().to_string())?;
    Ok(Shift { id: stem(path), p })
}

fn load_function(path: &Path, shift: &Shift) -> Result<LocallyConstantFunction> {
    load_function_on(path, &shift.id, &shift.p)
}

fn load_function_on(path: &Path, id: &str, p: &Presentation) -> Result<LocallyConstantFunction> {
    let (found, f) = parse_function(&read(path)?, p).with_context(|| path.display().to_string())?;
    if found != id {
        bail!("{}: function is over `{found}`, expected `{id}`", path.display());
    }
    Ok(f)
}

fn load_transducer(path: &Path, domain: &Shift, codomain: &Shift) -> Result<Transducer> {
    let (d, c, t) =
        parse_transducer(&read(path)?, &domain.p, &codomain.p).with_context(|| path.display().to_string())?;
    if d != domain.id || c != codomain.id {
        bail!(
            "{}: transducer maps `{d}` to `{c}`, expected `{}` to `{}`",
            path.display(),
            domain.id,
            codomain.id
        );
    }
    Ok(t)
}

fn parse_vertex(p: &Presentation, label: &str) -> Result<Symbol> {
    if p.kind() != PresentationKind::Vertex {
        return Err(Error::NotVertexKind.into());
    }
    p.symbol(label).with_context(|| format!("unknown vertex `{label}`"))
}

fn rows(m: &IntMatrix) -> Vec<String> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect()
}

fn put_function(r: &mut Report, key: &str, id: &str, f: &LocallyConstantFunction) {
    let p = f.presentation();
    let words = p.word_table(f.depth()).expect("table exists for a constructed function");
    let values: Vec<Value> = words
        .iter()
        .zip(f.table())
        .map(|(w, v)| json!([p.render(w), v.to_string()]))
        .collect();
    let j = json!({
        "matrix": id,
        "depth": f.depth(),
        "ring": f.ring().symbol(),
        "values": values,
    });
    let lines = render_function(id, f).lines().map(str::to_string).collect();
    r.custom(key, j, lines);
}

fn put_cycle(r: &mut Report, p: &Presentation, cycle: &[Symbol], sum: &BigRational) {
    r.kv("cycle", format!("({})", p.render(cycle))).kv("orbit-sum", sum);
}

fn put_vanishing(r: &mut Report, key: &str, v: &Vanishing, id: &str, p: &Presentation) {
    match v {
        Vanishing::Coboundary(b) => {
            r.flag(key, true);
            put_function(r, "witness", id, b);
        }
        Vanishing::NonzeroCycle { cycle, sum } => {
            r.flag(key, false);
            put_cycle(r, p, cycle, sum);
        }
    }
}

fn put_positivity(r: &mut Report, key: &str, v: &Positivity, id: &str, p: &Presentation) {
    match v {
        Positivity::Nonnegative { representative, transfer } => {
            r.flag(key, true);
            put_function(r, "representative", id, representative);
            put_function(r, "transfer", id, transfer);
        }
        Positivity::NegativeCycle { cycle, sum } => {
            r.flag(key, false);
            put_cycle(r, p, cycle, sum);
        }
    }
}

fn put_order_unit(r: &mut Report, v: &OrderUnit, p: &Presentation) {
    let mut s = Report::new();
    match v {
        OrderUnit::Yes => {
            s.flag("order-unit", true);
        }
        OrderUnit::No { cycle, sum } => {
            s.flag("order-unit", false);
            put_cycle(&mut s, p, cycle, sum);
        }
    }
    r.section("order-unit-check", s);
}

fn invariant_section(inv: &InvariantReport) -> Report {
    let mut r = Report::new();
    r.kv("bowen-franks", &inv.bf_group)
        .list("invariant-factors", inv.bf_group.torsion())
        .num("free-rank", inv.bf_group.free_rank() as u64)
        .kv("k0", inv.k0_pointed.group())
        .list("k0-unit", inv.k0_pointed.marked())
        .kv("det", &inv.det)
        .kv("det-sign", inv.det_sign)
        .kv(
            "spectral-radius",
            format!(
                "[{}, {}]",
                decimal(&inv.spectral_radius.0, 6, false),
                decimal(&inv.spectral_radius.1, 6, true)
            ),
        );
    r
}

pub fn run(command: Command, seed: u64) -> Result<Outcome> {
    Ok(match command {
        Command::Validate { matrix } => validate(&matrix)?.into(),
        Command::Words { matrix, k, limit } => words(&matrix, k, limit)?.into(),
        Command::Snf { matrix } => snf(&matrix)?.into(),
        Command::Invariants { matrix } => {
            let s = load_shift(&matrix)?;
            let mut r = Report::new();
            r.kv("matrix", &s.id);
            let inv = invariant_section(&invariants(&s.p));
            r.section("invariants", inv);
            r.into()
        }
        Command::FlowEquiv { a, b } => flow(&a, &b)?.into(),
        Command::Coe { a, b } => coe(&a, &b)?.into(),
        Command::Cohom { op } => cohom(op)?.into(),
        Command::Action { op } => action(op)?.into(),
        Command::Transducer { op } => transducer(op)?.into(),
        Command::Expand { matrix, vertex } => expand_cmd(&matrix, &vertex)?.into(),
        Command::Elementary { c, d, order } => elementary(&c, &d, order)?.into(),
        Command::Transfer { op } => transfer(op)?.into(),
        Command::SseSearch { a, b, inner_dim, entry, chain } => {
            sse(&a, &b, SseBounds { inner_dim, entry, chain })?.into()
        }
        Command::Selftest { instances } => selftest(seed, instances),
    })
}

fn validate(path: &Path) -> Result<Report> {
    let s = load_shift(path)?;
    let p = &s.p;
    let cert = p.certificate();
    let parents = |v: &[Option<usize>]| -> Vec<String> {
        v.iter()
            .map(|x| x.map_or_else(|| "-".to_string(), |i| (i + 1).to_string()))
            .collect()
    };
    let mut r = Report::new();
    r.kv("matrix", &s.id)
        .kv("kind", p.kind().as_str())
        .num("vertices", p.n_vertices() as u64)
        .num("symbols", p.n_symbols() as u64)
        .list("labels", p.labels())
        .flag("valid", true);
    let mut c = Report::new();
    c.list("out-tree-parents", &parents(&cert.out_parent))
        .list("in-tree-parents", &parents(&cert.in_parent))
        .flag("verified", cert.verify(p.adjacency()));
    r.section("irreducibility-certificate", c);
    Ok(r)
}

fn words(path: &Path, k: usize, limit: usize) -> Result<Report> {
    let s = load_shift(path)?;
    let table = s.p.word_table(k)?;
    let shown: Vec<String> = table.iter().take(limit).map(|w| s.p.render(w)).collect();
    let mut r = Report::new();
    r.kv("matrix", &s.id)
        .num("length", k as u64)
        .num("count", table.len() as u64)
        .flag("truncated", table.len() > limit)
        .block("words", shown);
    Ok(r)
}

fn snf(path: &Path) -> Result<Report> {
    let (id, file) = load_matrix(path)?;
    let dec = smith(&file.matrix);
    if !dec.verify(&file.matrix) {
        return Err(Error::InvalidResult("Smith decomposition failed re-verification".into()).into());
    }
    let mut r = Report::new();
    r.kv("matrix", id)
        .list("diagonal", &dec.diagonal())
        .num("rank", dec.rank() as u64)
        .block("u", rows(&dec.u))
        .block("d", rows(&dec.d))
        .block("v", rows(&dec.v))
        .flag("verified", true);
    Ok(r)
}

fn flow(a: &Path, b: &Path) -> Result<Report> {
    let (sa, sb) = (load_shift(a)?, load_shift(b)?);
    let v = flow_equivalent(&sa.p, &sb.p);
    let mut r = Report::new();
    r.flag("flow-equivalent", v.equivalent)
        .flag("bowen-franks-equal", v.a.bf_group == v.b.bf_group)
        .flag("det-sign-equal", v.a.det_sign == v.b.det_sign)
        .section(&sa.id, invariant_section(&v.a))
        .section(&sb.id, invariant_section(&v.b));
    Ok(r)
}

fn coe(a: &Path, b: &Path) -> Result<Report> {
    let (sa, sb) = (load_shift(a)?, load_shift(b)?);
    let v = coe_verdict(&sa.p, &sb.p);
    let mut r = Report::new();
    r.kv("continuously-orbit-equivalent", v.verdict).kv("reason", &v.reason);
    if let Some(PointedIsomorphism::Yes(aut)) = &v.isomorphism {
        r.block("k0-isomorphism", rows(&aut.matrix))
            .block("k0-isomorphism-inverse", rows(&aut.inverse));
    }
    r.section(&sa.id, invariant_section(&v.a))
        .section(&sb.id, invariant_section(&v.b));
    Ok(r)
}

fn cohom(op: CohomOp) -> Result<Report> {
    let mut r = Report::new();
    match op {
        CohomOp::ClassEqual { matrix, f, g } => {
            let s = load_shift(&matrix)?;
            let f = load_function(&f, &s)?;
            match g {
                Some(g) => {
                    let g = load_function(&g, &s)?;
                    put_vanishing(&mut r, "class-equal", &f.class_equal(&g)?, &s.id, &s.p);
                }
                None => put_vanishing(&mut r, "class-zero", &f.class_is_zero()?, &s.id, &s.p),
            }
        }
        CohomOp::Positive { matrix, f } => {
            let s = load_shift(&matrix)?;
            let f = load_function(&f, &s)?;
            put_positivity(&mut r, "nonnegative", &f.class_is_nonnegative()?, &s.id, &s.p);
            put_order_unit(&mut r, &f.order_unit_check()?, &s.p);
        }
        CohomOp::OrbitSum { matrix, f, cycle } => {
            let s = load_shift(&matrix)?;
            let f = load_function(&f, &s)?;
            let w = s.p.parse_symbols(&cycle)?;
            r.kv("cycle", format!("({})", s.p.render(&w))).kv("orbit-sum", f.orbit_sum(&w)?);
        }
    }
    Ok(r)
}

fn action(op: ActionOp) -> Result<Report> {
    let mut r = Report::new();
    match op {
        ActionOp::Compose { matrix, f, g } => {
            let s = load_shift(&matrix)?;
            let a = CircleAction::new(load_function(&f, &s)?)?;
            let b = CircleAction::new(load_function(&g, &s)?)?;
            put_function(&mut r, "classifier", &s.id, a.compose(&b)?.classifier());
        }
        ActionOp::Equivalent { matrix, f, g } => {
            let s = load_shift(&matrix)?;
            let a = CircleAction::new(load_function(&f, &s)?)?;
            let b = CircleAction::new(load_function(&g, &s)?)?;
            put_vanishing(&mut r, "cocycle-conjugate", &a.equivalent(&b)?, &s.id, &s.p);
        }
        ActionOp::Positive { matrix, f } => {
            let s = load_shift(&matrix)?;
            let a = CircleAction::new(load_function(&f, &s)?)?;
            put_positivity(&mut r, "nonnegative", &a.class_nonnegative()?, &s.id, &s.p);
            put_order_unit(&mut r, &a.order_unit_check()?, &s.p);
        }
        ActionOp::Phase { matrix, f, word, point, t } => {
            let s = load_shift(&matrix)?;
            let a = CircleAction::new(load_function(&f, &s)?)?;
            let mu = s.p.parse_symbols(&word)?;
            let phase = a.phase_on_word(&mu)?;
            r.kv("word", s.p.render(&mu));
            put_function(&mut r, "exponent", &s.id, phase.exponent());
            match (point, t) {
                (Some(x), t) => {
                    let x = parse_point(&x, &s.p)?;
                    r.kv("point", render_point(&s.p, &x))
                        .kv("exponent-at-point", phase.exponent_at(&x)?);
                    if let Some(t) = t {
                        let t: BigRational = t.parse().map_err(|_| Error::Parse {
                            line: 1,
                            message: format!("expected a rational time `p/q`, found `{t}`"),
                        })?;
                        r.kv("t", &t).kv("phase", a.evaluate(&mu, &t, &x)?);
                    }
                }
                (None, Some(_)) => bail!("--t requires --point"),
                (None, None) => {}
            }
        }
    }
    Ok(r)
}

fn put_equivalence(r: &mut Report, v: &MapEquivalence, p: &Presentation) {
    r.kv("maps", v.label());
    match v {
        MapEquivalence::Unequal(w) => {
            r.kv("counterexample-prefix", p.render(w));
        }
        MapEquivalence::Inconclusive { delay_bound } => {
            r.num("delay-bound", *delay_bound as u64);
        }
        MapEquivalence::Equal => {}
    }
}

fn put_orbit_relation(r: &mut Report, key: &str, v: &OrbitRelation, p: &Presentation) {
    match v {
        OrbitRelation::Holds { points_checked } => {
            r.flag(key, true).num("points-checked", *points_checked as u64);
        }
        OrbitRelation::Fails { counterexample } => {
            r.flag(key, false).kv("counterexample", render_point(p, counterexample));
        }
    }
}

fn transducer(op: TransducerOp) -> Result<Report> {
    let mut r = Report::new();
    match op {
        TransducerOp::Apply { domain, codomain, transducer, point } => {
            let (d, c) = (load_shift(&domain)?, load_shift(&codomain)?);
            let t = load_transducer(&transducer, &d, &c)?;
            let x = parse_point(&point, &d.p)?;
            r.kv("point", render_point(&d.p, &x))
                .kv("image", render_point(&c.p, &t.apply(&x)?));
        }
        TransducerOp::Compose { first_domain, middle, last_codomain, first, second } => {
            let (a, b, c) = (load_shift(&first_domain)?, load_shift(&middle)?, load_shift(&last_codomain)?);
            let t1 = load_transducer(&first, &a, &b)?;
            let t2 = load_transducer(&second, &b, &c)?;
            let t = t2.compose(&t1)?;
            r.num("states", t.n_states() as u64).block(
                "transducer",
                render_transducer(&a.id, &c.id, &t).lines().map(str::to_string).collect(),
            );
        }
        TransducerOp::Equiv { domain, codomain, t1, t2, delay_bound } => {
            let (d, c) = (load_shift(&domain)?, load_shift(&codomain)?);
            let t1 = load_transducer(&t1, &d, &c)?;
            let t2 = load_transducer(&t2, &d, &c)?;
            let bound = delay_bound.unwrap_or_else(|| default_delay_bound(&t1, &t2));
            put_equivalence(&mut r, &equivalent_maps(&t1, &t2, bound)?, &d.p);
        }
        TransducerOp::VerifyCoe(args) => return verify_coe(&args),
        TransducerOp::Psi { domain, codomain, transducer, k1, l1, f } => {
            let (d, c) = (load_shift(&domain)?, load_shift(&codomain)?);
            let h = load_transducer(&transducer, &d, &c)?;
            let data = OrbitData::new(load_function(&k1, &d)?, load_function(&l1, &d)?)?;
            let f = load_function(&f, &c)?;
            let rel = verify_orbit_relation(&h, &data)?;
            put_orbit_relation(&mut r, "orbit-relation", &rel, &d.p);
            if rel.holds() {
                put_function(&mut r, "psi", &d.id, &transfer_psi(&h, &data, &f)?);
            }
        }
    }
    Ok(r)
}

fn verify_coe(args: &VerifyCoeArgs) -> Result<Report> {
    let (a, b) = (load_shift(&args.a)?, load_shift(&args.b)?);
    let w = CoeWitness {
        forward: load_transducer(&args.forward, &a, &b)?,
        forward_data: OrbitData::new(load_function(&args.forward_k1, &a)?, load_function(&args.forward_l1, &a)?)?,
        inverse: load_transducer(&args.inverse, &b, &a)?,
        inverse_data: OrbitData::new(load_function(&args.inverse_k1, &b)?, load_function(&args.inverse_l1, &b)?)?,
    };
    let c = consistency_check(&a.p, &b.p, Some(&w))?;
    let mut r = Report::new();
    r.flag("witness-verified", c.witness_verified)
        .kv("invariant-verdict", c.coe.verdict)
        .kv("reason", &c.coe.reason);
    if let Some((fwd, inv)) = &c.psi_one {
        put_function(&mut r, "psi-forward-one", &a.id, fwd);
        put_function(&mut r, "psi-inverse-one", &b.id, inv);
    }
    if let Some(e) = c.eventual_conjugacy {
        r.flag("eventual-conjugacy", e);
    }
    if let Some(s) = c.strong {
        r.flag("strong", s);
    }
    Ok(r)
}

fn expanded_id(id: &str, vertex: &str) -> String {
    format!("{id}@exp{vertex}")
}

fn load_expansion(matrix: &Path, vertex: &str) -> Result<(Shift, Expansion)> {
    let s = load_shift(matrix)?;
    let v = parse_vertex(&s.p, vertex)?;
    let e = expand(&s.p, v)?;
    Ok((s, e))
}

fn symbol_map_lines(t: &Transducer) -> Vec<String> {
    let (d, c) = (t.domain(), t.codomain());
    (0..d.n_symbols() as Symbol)
        .map(|s| {
            let (_, out) = t.transition(t.initial(), s).expect("symbol maps are total");
            let out = if out.is_empty() { "-".to_string() } else { c.render(out) };
            format!("{} -> {out}", d.label(s))
        })
        .collect()
}

fn expand_cmd(matrix: &Path, vertex: &str) -> Result<Report> {
    let (s, e) = load_expansion(matrix, vertex)?;
    let eid = expanded_id(&s.id, vertex);
    let mut r = Report::new();
    r.kv("matrix", &s.id)
        .kv("vertex", vertex)
        .kv("expanded", &eid)
        .block("expanded-matrix", rows(&e.matrix()))
        .kv("det-base", s.p.adjacency_matrix().identity_minus().determinant())
        .kv("det-expanded", e.matrix().identity_minus().determinant())
        .block("xi", symbol_map_lines(e.xi()))
        .block("eta", symbol_map_lines(e.eta()));
    put_function(&mut r, "xi-l1", &s.id, e.xi_data().l1());
    put_function(&mut r, "eta-l1", &eid, e.eta_data().l1());
    Ok(r)
}

fn load_elementary(c: &Path, d: &Path, order: Order) -> Result<(String, String, ElementaryEquivalence)> {
    let (cid, cf) = load_matrix(c)?;
    let (did, df) = load_matrix(d)?;
    let order = match order {
        Order::Lex => BijectionOrder::Lex,
        Order::ReverseLex => BijectionOrder::ReverseLex,
    };
    let ee = ElementaryEquivalence::with_order(&cf.matrix, &df.matrix, order)?;
    Ok((format!("{cid}*{did}"), format!("{did}*{cid}"), ee))
}

fn elementary(c: &Path, d: &Path, order: Order) -> Result<Report> {
    let (aid, bid, ee) = load_elementary(c, d, order)?;
    let (ia, ib) = (invariants(ee.a()), invariants(ee.b()));
    let mut r = Report::new();
    r.kv("a", &aid)
        .block("a-matrix", rows(&ee.a().adjacency_matrix()))
        .kv("b", &bid)
        .block("b-matrix", rows(&ee.b().adjacency_matrix()))
        .block("z", rows(&ee.z()))
        .section(&aid, invariant_section(&ia))
        .section(&bid, invariant_section(&ib));
    Ok(r)
}

fn transfer(op: TransferOp) -> Result<Report> {
    let mut r = Report::new();
    match op {
        TransferOp::Phi { c, d, f } => {
            let (aid, bid, ee) = load_elementary(&c, &d, Order::Lex)?;
            let f = load_function_on(&f, &aid, ee.a())?;
            put_function(&mut r, "phi", &bid, &ee.phi(&f)?);
        }
        TransferOp::Psi { c, d, g } => {
            let (aid, bid, ee) = load_elementary(&c, &d, Order::Lex)?;
            let g = load_function_on(&g, &bid, ee.b())?;
            put_function(&mut r, "psi", &aid, &ee.psi(&g)?);
        }
        TransferOp::PsiXi { matrix, f, vertex } => {
            let (s, e) = load_expansion(&matrix, &vertex)?;
            let f = load_function_on(&f, &expanded_id(&s.id, &vertex), e.expanded())?;
            put_function(&mut r, "psi-xi", &s.id, &e.psi_xi(&f)?);
        }
        TransferOp::PsiEta { matrix, f, vertex } => {
            let (s, e) = load_expansion(&matrix, &vertex)?;
            let f = load_function(&f, &s)?;
            put_function(&mut r, "psi-eta", &expanded_id(&s.id, &vertex), &e.psi_eta(&f)?);
        }
    }
    Ok(r)
}

fn sse(a: &Path, b: &Path, bounds: SseBounds) -> Result<Report> {
    let (aid, af) = load_matrix(a)?;
    let (bid, bf) = load_matrix(b)?;
    let mut r = Report::new();
    r.kv("from", aid)
        .kv("to", bid)
        .kv(
            "bounds",
            format!("inner-dim={} entry={} chain={}", bounds.inner_dim, bounds.entry, bounds.chain),
        );
    match sse_search(&af.matrix, &bf.matrix, bounds) {
        SseResult::Found(chain) => {
            r.flag("found", true).num("length", chain.len() as u64);
            for (i, ee) in chain.iter().enumerate() {
                let mut step = Report::new();
                step.block("c", rows(ee.c()))
                    .block("d", rows(ee.d()))
                    .block("cd", rows(&ee.a().adjacency_matrix()))
                    .block("dc", rows(&ee.b().adjacency_matrix()));
                r.section(&format!("step-{}", i + 1), step);
            }
        }
        SseResult::NotFound => {
            r.flag("found", false)
                .kv("note", "no chain within the bounds; this does not rule out equivalence");
        }
    }
    Ok(r)
}

fn selftest(seed: u64, instances: usize) -> Outcome {
    let rep = sftlab::selftest::run(seed, instances);
    let mut r = Report::new();
    r.num("seed", seed).num("instances", instances as u64);
    for c in &rep.checks {
        let mut s = Report::new();
        s.num("passed", c.passed as u64).num("total", c.total as u64);
        if let Some((i, msg)) = &c.first_failure {
            s.num("first-failure", *i as u64).kv("message", msg);
        }
        r.section(c.name, s);
    }
    r.flag("all-passed", rep.all_passed());
    Outcome {
        report: r,
        status: if rep.all_passed() { 0 } else { 1 },
    }
}
