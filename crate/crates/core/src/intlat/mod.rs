//! Exact integer linear algebra: Smith normal form, cokernels, lattice
//! membership and pointed-group isomorphism.

mod factor;
mod group;
mod matrix;
mod smith;

pub use factor::{factorize, is_probable_prime};
pub use group::{
    cokernel, lattice_member, pointed_iso, Cokernel, FgAbelianGroup, GroupAutomorphism,
    LatticeMembership, PointedGroup, PointedIsomorphism,
};
pub use matrix::IntMatrix;
pub use smith::{smith, SmithDecomposition};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Inverse of a unimodular matrix (Gauss-Jordan over the rationals).
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    assert!(m.is_square());
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m[(i, j)].clone())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !a[r][c].is_zero())
            .expect("matrix is singular");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let v = &a[c][j] * &f;
                    a[r][j] -= v;
                }
            }
        }
    }
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &a[i][n + j];
            assert!(x.is_integer(), "matrix is not unimodular");
            out[(i, j)] = x.to_integer();
        }
    }
    out
}

/// Sign of `det(m)` as -1, 0 or 1.
pub fn det_sign(m: &IntMatrix) -> i8 {
    use num_traits::Signed;
    let d: BigInt = m.determinant();
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}
