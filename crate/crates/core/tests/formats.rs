use proptest::prelude::*;

use sftlab::format::{
    parse_function, parse_matrix, parse_point, parse_presentation, parse_transducer, render_function, render_matrix,
    render_point, render_transducer,
};
use sftlab::random::{function_up_to, rng_for, vertex_presentation};
use sftlab::sft::EventuallyPeriodicPoint;
use sftlab::transducer::Transducer;

#[test]
fn fibonacci_text_round_trip() {
    let text = "# golden mean\nmatrix vertex 2\n1 1\n1 0\n";
    let m = parse_matrix(text).unwrap();
    let again = parse_matrix(&render_matrix(m.kind, &m.matrix)).unwrap();
    assert_eq!(again.matrix, m.matrix);
    assert_eq!(again.kind, m.kind);
}

#[test]
fn block_transducer_round_trip() {
    let p = parse_presentation("matrix vertex 2\n1 1\n1 0\n").unwrap();
    let hb = p.higher_block(2).unwrap();
    let (fwd, _) = Transducer::block_conjugacy(&hb).unwrap();
    let text = render_transducer("fib", "fib@hb2", &fwd);
    let (d, c, back) = parse_transducer(&text, &p, hb.presentation()).unwrap();
    assert_eq!((d.as_str(), c.as_str()), ("fib", "fib@hb2"));
    assert_eq!(back, fwd);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functions_round_trip(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let p = vertex_presentation(&mut rng, 5);
        let f = function_up_to(&mut rng, &p, 3, -9, 9);
        let (id, back) = parse_function(&render_function("x", &f), &p).unwrap();
        prop_assert_eq!(id, "x");
        prop_assert_eq!(back, f);
    }

    #[test]
    fn matrices_round_trip(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 1);
        let p = vertex_presentation(&mut rng, 6);
        let m = p.adjacency_matrix();
        let back = parse_matrix(&render_matrix(sftlab::format::MatrixKind::Vertex, &m)).unwrap();
        prop_assert_eq!(back.matrix, m);
    }

    #[test]
    fn fixed_points_round_trip(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 2);
        let p = vertex_presentation(&mut rng, 5);
        let Some(v) = (0..p.n_vertices()).find(|&v| p.is_cyclically_admissible(&[v as _])) else {
            return Ok(());
        };
        let x = EventuallyPeriodicPoint::periodic(&p, vec![v as _]).unwrap();
        prop_assert_eq!(parse_point(&render_point(&p, &x), &p).unwrap(), x);
    }
}
