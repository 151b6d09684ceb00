//! Plain-text formats for matrices, functions, transducers and points.
//!
//! Matrix files:
//!
//! ```text
//! # comment
//! matrix vertex 2
//! 1 1
//! 1 0
//! ```
//!
//! `matrix rect <rows> <cols>` holds the rectangular factors of an
//! elementary equivalence. Function files start with
//! `function <matrix-id> depth=<k> ring=<Z|Q>` followed by one
//! `<word> <value>` line per admissible word in lexicographic order.
//! Transducer files start with
//! `transducer <domain-id> <codomain-id> states=<m> initial=<q0>` followed by
//! lines `q a -> q' w` (`w` is `-` for the empty word). Points are written
//! `u(v)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cohomology::{LocallyConstantFunction, Ring};
use crate::error::{Error, Result};
use crate::intlat::IntMatrix;
use crate::sft::{EventuallyPeriodicPoint, Presentation, PresentationKind, SftPresentation, Symbol};
use crate::transducer::{Transducer, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Vertex,
    Edge,
    Rect,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Vertex => "vertex",
            MatrixKind::Edge => "edge",
            MatrixKind::Rect => "rect",
        }
    }

    pub fn presentation_kind(self) -> Option<PresentationKind> {
        match self {
            MatrixKind::Vertex => Some(PresentationKind::Vertex),
            MatrixKind::Edge => Some(PresentationKind::Edge),
            MatrixKind::Rect => None,
        }
    }
}

impl From<PresentationKind> for MatrixKind {
    fn from(k: PresentationKind) -> Self {
        match k {
            PresentationKind::Vertex => MatrixKind::Vertex,
            PresentationKind::Edge => MatrixKind::Edge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub matrix: IntMatrix,
}

/// Non-blank, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, found `{tok}`")))
}

fn key_value<'a>(line: usize, tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=...`, found `{tok}`")))
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (kind, rows, cols) = match toks.as_slice() {
        ["matrix", "vertex", n] => {
            let n = number(hl, n, "dimension")?;
            (MatrixKind::Vertex, n, n)
        }
        ["matrix", "edge", n] => {
            let n = number(hl, n, "dimension")?;
            (MatrixKind::Edge, n, n)
        }
        ["matrix", "rect", r, c] => (MatrixKind::Rect, number(hl, r, "rows")?, number(hl, c, "columns")?),
        _ => {
            return Err(Error::parse(
                hl,
                "expected `matrix vertex <n>`, `matrix edge <n>` or `matrix rect <r> <c>`",
            ))
        }
    };
    if rows == 0 || cols == 0 {
        return Err(Error::parse(hl, "dimension must be positive"));
    }
    let mut m = IntMatrix::zeros(rows, cols);
    let mut last = hl;
    for i in 0..rows {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(last + 1, format!("expected {rows} rows, found {i}")))?;
        last = ln;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::parse(ln, format!("expected {cols} entries, found {}", entries.len())));
        }
        for (j, tok) in entries.iter().enumerate() {
            let x: BigInt = number(ln, tok, "an integer")?;
            if x < BigInt::from(0) {
                return Err(Error::parse(ln, format!("negative entry {x}")));
            }
            m[(i, j)] = x;
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content after matrix rows"));
    }
    Ok(MatrixFile { kind, matrix: m })
}

/// Parses and validates a square matrix file.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let file = parse_matrix(text)?;
    let kind = file
        .kind
        .presentation_kind()
        .ok_or_else(|| Error::parse(1, "a shift needs a square `vertex` or `edge` matrix"))?;
    SftPresentation::validate(&file.matrix, kind)
}

pub fn render_matrix(kind: MatrixKind, m: &IntMatrix) -> String {
    let mut out = match kind {
        MatrixKind::Rect => format!("matrix rect {} {}\n", m.rows(), m.cols()),
        k => format!("matrix {} {}\n", k.as_str(), m.rows()),
    };
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_rational(line: usize, tok: &str) -> Result<BigRational> {
    let bad = || Error::parse(line, format!("expected a number, found `{tok}`"));
    match tok.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(Error::parse(line, "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

/// Parses a function file over `p`; returns the matrix id from the header.
pub fn parse_function(text: &str, p: &Presentation) -> Result<(String, LocallyConstantFunction)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty function file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let ["function", id, depth, ring] = toks.as_slice() else {
        return Err(Error::parse(hl, "expected `function <matrix-id> depth=<k> ring=<Z|Q>`"));
    };
    let depth: usize = number(hl, key_value(hl, depth, "depth")?, "a depth")?;
    if depth == 0 {
        return Err(Error::parse(hl, "depth must be at least 1"));
    }
    let ring = match key_value(hl, ring, "ring")? {
        "Z" => Ring::Integer,
        "Q" => Ring::Rational,
        other => return Err(Error::parse(hl, format!("unknown ring `{other}`"))),
    };
    let words = p.word_table(depth)?;
    let mut table = Vec::with_capacity(words.len());
    let mut last = hl;
    for expected in words.iter() {
        let want = p.render(expected);
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(last + 1, format!("missing entry for word `{want}`")))?;
        last = ln;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [word, value] = toks.as_slice() else {
            return Err(Error::parse(ln, "expected `<word> <value>`"));
        };
        if *word != want {
            return Err(Error::parse(ln, format!("expected word `{want}`, found `{word}`")));
        }
        let v = parse_rational(ln, value)?;
        if ring == Ring::Integer && !v.is_integer() {
            return Err(Error::parse(ln, format!("non-integer value {v} with ring=Z")));
        }
        table.push(v);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content after the last word"));
    }
    Ok((id.to_string(), LocallyConstantFunction::new(p, depth, table, ring)?))
}

pub fn render_function(id: &str, f: &LocallyConstantFunction) -> String {
    format!("function {id} {f}\n")
}

/// Parses a transducer file; returns the domain and codomain ids from the
/// header.
pub fn parse_transducer(
    text: &str,
    domain: &Presentation,
    codomain: &Presentation,
) -> Result<(String, String, Transducer)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty transducer file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let ["transducer", dom, cod, states, initial] = toks.as_slice() else {
        return Err(Error::parse(
            hl,
            "expected `transducer <domain-id> <codomain-id> states=<m> initial=<q0>`",
        ));
    };
    let n: usize = number(hl, key_value(hl, states, "states")?, "a state count")?;
    let q0: usize = number(hl, key_value(hl, initial, "initial")?, "a state")?;
    if n == 0 || q0 >= n {
        return Err(Error::parse(hl, format!("initial state {q0} out of range for {n} states")));
    }
    let mut transitions: Vec<Vec<Transition>> = vec![vec![None; domain.n_symbols()]; n];
    let symbol = |ln: usize, p: &Presentation, tok: &str| -> Result<Symbol> {
        p.symbol(tok)
            .ok_or_else(|| Error::parse(ln, format!("unknown symbol `{tok}`")))
    };
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [q, a, "->", r, w] = toks.as_slice() else {
            return Err(Error::parse(ln, "expected `q a -> q' w`"));
        };
        let q: usize = number(ln, q, "a state")?;
        let r: usize = number(ln, r, "a state")?;
        if q >= n || r >= n {
            return Err(Error::parse(ln, format!("state out of range for {n} states")));
        }
        let a = symbol(ln, domain, a)?;
        let out = codomain
            .parse_symbols(w)
            .map_err(|e| Error::parse(ln, e.to_string()))?;
        let slot = &mut transitions[q][a as usize];
        if slot.is_some() {
            return Err(Error::parse(ln, "duplicate transition"));
        }
        *slot = Some((r, out));
    }
    let t = Transducer::new(domain, codomain, q0, transitions)?;
    Ok((dom.to_string(), cod.to_string(), t))
}

pub fn render_transducer(domain_id: &str, codomain_id: &str, t: &Transducer) -> String {
    let mut out = format!(
        "transducer {domain_id} {codomain_id} states={} initial={}\n",
        t.n_states(),
        t.initial()
    );
    for (q, row) in t.transitions().iter().enumerate() {
        for (a, tr) in row.iter().enumerate() {
            if let Some((r, w)) = tr {
                let w = if w.is_empty() { "-".to_string() } else { t.codomain().render(w) };
                out.push_str(&format!("{q} {} -> {r} {w}\n", t.domain().label(a as Symbol)));
            }
        }
    }
    out
}

/// Parses `u(v)`.
pub fn parse_point(text: &str, p: &Presentation) -> Result<EventuallyPeriodicPoint> {
    let text = text.trim();
    let bad = || Error::parse(1, format!("expected `u(v)`, found `{text}`"));
    let (u, rest) = text.split_once('(').ok_or_else(bad)?;
    let v = rest.strip_suffix(')').ok_or_else(bad)?;
    let u = p.parse_symbols(u)?;
    let v = p.parse_symbols(v)?;
    EventuallyPeriodicPoint::new(p, u, v)
}

pub fn render_point(p: &Presentation, x: &EventuallyPeriodicPoint) -> String {
    format!("{}({})", p.render(x.preperiod()), p.render(x.period()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIB: &str = "# golden mean\nmatrix vertex 2\n1 1\n1 0\n";

    #[test]
    fn matrix_round_trip() {
        let f = parse_matrix(FIB).unwrap();
        assert_eq!(f.kind, MatrixKind::Vertex);
        assert_eq!(render_matrix(f.kind, &f.matrix), "matrix vertex 2\n1 1\n1 0\n");
        let r = parse_matrix("matrix rect 1 2\n1 1\n").unwrap();
        assert_eq!((r.matrix.rows(), r.matrix.cols()), (1, 2));
        assert_eq!(parse_matrix(&render_matrix(r.kind, &r.matrix)).unwrap(), r);
    }

    #[test]
    fn matrix_errors_carry_lines() {
        let e = parse_matrix("matrix vertex 2\n1 1\n1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_matrix("matrix vertex 2\n1 x\n1 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(matches!(parse_matrix("matrix square 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("matrix vertex 1\n-1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_presentation("matrix vertex 2\n0 1\n1 0\n"), Err(Error::PermutationMatrix)));
        assert!(matches!(parse_presentation("matrix rect 1 1\n2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn function_round_trip() {
        let p = parse_presentation(FIB).unwrap();
        let text = "function fib depth=2 ring=Z\n11 3\n12 -1\n21 0\n";
        let (id, f) = parse_function(text, &p).unwrap();
        assert_eq!(id, "fib");
        assert_eq!(render_function("fib", &f), text);
        let q = "function fib depth=1 ring=Q\n1 1/2\n2 -3\n";
        let (_, g) = parse_function(q, &p).unwrap();
        assert_eq!(render_function("fib", &g), q);
    }

    #[test]
    fn function_errors() {
        let p = parse_presentation(FIB).unwrap();
        let missing = "function fib depth=2 ring=Z\n11 3\n12 -1\n";
        assert!(matches!(parse_function(missing, &p), Err(Error::Parse { line: 4, .. })));
        let order = "function fib depth=2 ring=Z\n12 3\n11 -1\n21 0\n";
        assert!(matches!(parse_function(order, &p), Err(Error::Parse { line: 2, .. })));
        let ring = "function fib depth=1 ring=Z\n1 1/2\n2 0\n";
        assert!(matches!(parse_function(ring, &p), Err(Error::Parse { line: 2, .. })));
        let inadmissible = "function fib depth=2 ring=Z\n11 3\n12 -1\n21 0\n22 0\n";
        assert!(matches!(parse_function(inadmissible, &p), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn transducer_round_trip() {
        let p = parse_presentation(FIB).unwrap();
        let hb = p.higher_block(2).unwrap();
        let (fwd, inv) = Transducer::block_conjugacy(&hb).unwrap();
        for t in [&fwd, &inv] {
            let text = render_transducer("a", "b", t);
            let (d, c, back) = parse_transducer(&text, t.domain(), t.codomain()).unwrap();
            assert_eq!((d.as_str(), c.as_str()), ("a", "b"));
            assert_eq!(&back, t);
        }
        let id = "transducer fib fib states=1 initial=0\n0 1 -> 0 1\n0 2 -> 0 2\n";
        let (_, _, t) = parse_transducer(id, &p, &p).unwrap();
        assert_eq!(t, Transducer::identity(&p));
        let starving = "transducer fib fib states=1 initial=0\n0 1 -> 0 -\n0 2 -> 0 2\n";
        assert!(matches!(parse_transducer(starving, &p, &p), Err(Error::Starvation)));
        let dup = "transducer fib fib states=1 initial=0\n0 1 -> 0 1\n0 1 -> 0 2\n";
        assert!(matches!(parse_transducer(dup, &p, &p), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn points() {
        let p = parse_presentation(FIB).unwrap();
        let x = parse_point("1(12)", &p).unwrap();
        assert_eq!(render_point(&p, &x), "1(12)");
        let y = parse_point("(21)", &p).unwrap();
        assert_eq!(render_point(&p, &y), "(21)");
        assert!(parse_point("2(2)", &p).is_err());
        assert!(parse_point("12", &p).is_err());
    }
}
