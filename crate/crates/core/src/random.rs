//! Seeded generators for test instances.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{LocallyConstantFunction, Ring};
use crate::intlat::IntMatrix;
use crate::moves::ElementaryEquivalence;
use crate::sft::{Presentation, PresentationKind, SftPresentation};

pub type TestRng = ChaCha8Rng;

/// Independent stream `index` derived from `seed`.
pub fn rng_for(seed: u64, index: u64) -> TestRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Irreducible, non-permutation 0-1 matrix with `2 <= n <= max_n` vertices.
pub fn vertex_presentation<R: Rng>(rng: &mut R, max_n: usize) -> Presentation {
    assert!(max_n >= 2);
    loop {
        let n = rng.gen_range(2..=max_n);
        let density = rng.gen_range(0.25..0.75);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| i64::from(rng.gen_bool(density))).collect())
            .collect();
        if let Ok(p) = SftPresentation::validate(&IntMatrix::from_rows(&rows), PresentationKind::Vertex) {
            return p;
        }
    }
}

/// Integer function of the given depth with values in `lo..=hi`.
pub fn integer_function<R: Rng>(
    rng: &mut R,
    p: &Presentation,
    depth: usize,
    lo: i64,
    hi: i64,
) -> LocallyConstantFunction {
    let n = p.word_count(depth) as usize;
    let table: Vec<BigRational> = (0..n)
        .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(lo..=hi))))
        .collect();
    LocallyConstantFunction::new(p, depth, table, Ring::Integer).expect("table size matches")
}

/// Like [`integer_function`] with a depth drawn from `1..=max_depth`.
pub fn function_up_to<R: Rng>(
    rng: &mut R,
    p: &Presentation,
    max_depth: usize,
    lo: i64,
    hi: i64,
) -> LocallyConstantFunction {
    let depth = rng.gen_range(1..=max_depth);
    integer_function(rng, p, depth, lo, hi)
}

/// `(C, D)` with shapes at most `max_dim` and entries at most `max_entry`
/// such that both products are irreducible non-permutation matrices and
/// `|B_{depth}|` of both stays below `max_words`.
pub fn elementary_pair<R: Rng>(
    rng: &mut R,
    max_dim: usize,
    max_entry: i64,
    depth: usize,
    max_words: u64,
) -> ElementaryEquivalence {
    loop {
        let n = rng.gen_range(1..=max_dim);
        let m = rng.gen_range(1..=max_dim);
        let mut gen = |r: usize, c: usize| {
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(0..=max_entry)).collect())
                .collect();
            IntMatrix::from_rows(&rows)
        };
        let c = gen(n, m);
        let d = gen(m, n);
        let Ok(ee) = ElementaryEquivalence::new(&c, &d) else { continue };
        if ee.a().word_count(depth) <= max_words && ee.b().word_count(depth) <= max_words {
            return ee;
        }
    }
}
