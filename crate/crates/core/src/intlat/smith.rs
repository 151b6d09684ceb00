use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal with
/// nonnegative entries `d_1 | d_2 | ...` (zeros last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal of `d`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Re-checks every defining property against the original matrix.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        if self.u.mul(m).mul(&self.v) != self.d || !self.d.is_diagonal() {
            return false;
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return false;
        }
        let chain = diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        });
        chain && self.u.determinant().abs().is_one() && self.v.determinant().abs().is_one()
    }
}

/// Smith normal form with a fixed pivoting rule: the nonzero entry of
/// smallest absolute value in the active block, ties broken row-major.
pub fn smith(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_in_block(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let q = -a[(i, t)].div_floor(&a[(t, t)]);
                    a.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let q = -a[(t, j)].div_floor(&a[(t, t)]);
                    a.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
            }

            // Remainders left in the pivot row/column: smallest one becomes the pivot.
            let mut best: Option<(BigInt, bool, usize)> = None;
            for i in t + 1..rows {
                let x = a[(i, t)].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |(b, _, _)| x < *b) {
                    best = Some((x, true, i));
                }
            }
            for j in t + 1..cols {
                let x = a[(t, j)].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |(b, _, _)| x < *b) {
                    best = Some((x, false, j));
                }
            }
            if let Some((_, is_row, k)) = best {
                if is_row {
                    a.swap_rows(t, k);
                    u.swap_rows(t, k);
                } else {
                    a.swap_cols(t, k);
                    v.swap_cols(t, k);
                }
                continue;
            }

            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let dec = SmithDecomposition { u, d: a, v };
    debug_assert!(dec.verify(m), "Smith decomposition failed verification");
    dec
}

fn smallest_in_block(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if !x.is_zero() && best.as_ref().map_or(true, |(b, _, _)| x < *b) {
                best = Some((x, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}
