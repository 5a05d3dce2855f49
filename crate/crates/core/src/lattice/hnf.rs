use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{content, is_zero_vector, IntMatrix, IntVector};
use crate::error::{Error, Result};

/// Row-style Hermite normal form.
///
/// Returns `(hnf, transform)` with `transform` unimodular and
/// `transform * m == hnf`. Nonzero rows come first, pivots are positive and
/// strictly move right, and entries above each pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pivot_row = 0;
    for col in 0..h.cols() {
        if pivot_row == h.rows() {
            break;
        }
        loop {
            // smallest nonzero entry at or below pivot_row
            let best = (pivot_row..h.rows())
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..h.rows() {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
                h.sub_row_multiple(r, pivot_row, &q);
                u.sub_row_multiple(r, pivot_row, &q);
                if !h[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
            h.sub_row_multiple(r, pivot_row, &q);
            u.sub_row_multiple(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// The nonzero rows of the HNF: the canonical basis of the row lattice.
pub fn canonical_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(m);
    let rows: Vec<IntVector> = h.row_vectors().into_iter().filter(|r| !is_zero_vector(r)).collect();
    IntMatrix::from_rows(m.cols(), &rows)
}

/// Basis (as rows) of `{x in Z^cols : m * x = 0}`, in canonical form.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let t = m.transpose();
    let (h, u) = hermite_normal_form(&t);
    let rows: Vec<IntVector> = (0..n).filter(|&i| is_zero_vector(h.row(i))).map(|i| u.row(i).to_vec()).collect();
    canonical_basis(&IntMatrix::from_rows(n, &rows))
}

/// Basis of `span_Q(rows of generators) ∩ Z^rank`, in canonical form.
pub fn saturate(generators: &IntMatrix) -> IntMatrix {
    integer_kernel(&integer_kernel(generators))
}

/// `v / gcd(v)`; the zero vector has no primitive representative.
pub fn primitive(v: &[BigInt]) -> Result<IntVector> {
    let g = content(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// An integer `X` with `m * X = I` when `m` (rows ≤ cols) is surjective onto
/// `Z^rows`; `None` otherwise.
pub fn right_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let k = m.rows();
    let (h, t) = hermite_normal_form(&m.transpose());
    if h.rows() < k || h.select_rows(0..k) != IntMatrix::identity(k) {
        return None;
    }
    Some(t.select_rows(0..k).transpose())
}

/// True iff `m: Z^cols -> Z^rows` is onto.
pub fn is_surjective(m: &IntMatrix) -> bool {
    right_inverse(m).is_some()
}
