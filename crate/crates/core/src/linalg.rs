//! Dense exact linear algebra over big rationals.

use num_traits::{One, Zero};

use crate::symfunc::Rational;

pub type RationalMatrix = Vec<Vec<Rational>>;

/// Gauss–Jordan inverse. Returns `None` for a singular or non-square input.
pub fn invert(matrix: &RationalMatrix) -> Option<RationalMatrix> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut a = matrix.clone();
    let mut inv: RationalMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);

        let scale = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &scale;
        }
        for v in inv[col].iter_mut() {
            *v *= &scale;
        }

        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let da = &factor * &a[col][c];
                a[r][c] -= da;
                let di = &factor * &inv[col][c];
                inv[r][c] -= di;
            }
        }
    }
    Some(inv)
}

/// `matrix · v`.
pub fn mul_vec(matrix: &RationalMatrix, v: &[Rational]) -> Vec<Rational> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}
