//! Small dense linear solver used for the local Vandermonde systems.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Absolute pivot threshold applied after row equilibration.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

/// Solves `a · x = b` in place by Gaussian elimination with partial
/// pivoting. `a` is row-major `dim × dim`; each row (and its right-hand
/// side) is first divided by the row's largest magnitude entry.
pub fn solve_in_place<T: Scalar>(a: &mut [T], b: &mut [T]) -> Result<()> {
    let dim = b.len();
    assert_eq!(a.len(), dim * dim, "matrix is not {dim}x{dim}");
    let tol: T = lit(PIVOT_TOLERANCE);

    for row in 0..dim {
        let scale = a[row * dim..(row + 1) * dim]
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()));
        if scale == T::zero() || !scale.is_finite() {
            return Err(Error::SingularSystem {
                column: 0,
                pivot: scale.to_f64().unwrap_or(f64::NAN),
            });
        }
        for v in &mut a[row * dim..(row + 1) * dim] {
            *v /= scale;
        }
        b[row] /= scale;
    }

    for col in 0..dim {
        let (pivot_row, pivot) =
            (col..dim)
                .map(|r| (r, a[r * dim + col].abs()))
                .fold(
                    (col, T::zero()),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot.is_nan() || pivot < tol {
            return Err(Error::SingularSystem {
                column: col,
                pivot: pivot.to_f64().unwrap_or(f64::NAN),
            });
        }
        if pivot_row != col {
            for c in 0..dim {
                a.swap(col * dim + c, pivot_row * dim + c);
            }
            b.swap(col, pivot_row);
        }
        let diag = a[col * dim + col];
        for r in col + 1..dim {
            let factor = a[r * dim + col] / diag;
            if factor == T::zero() {
                continue;
            }
            a[r * dim + col] = T::zero();
            for c in col + 1..dim {
                let v = a[col * dim + c];
                a[r * dim + c] -= factor * v;
            }
            let v = b[col];
            b[r] -= factor * v;
        }
    }

    for row in (0..dim).rev() {
        let mut acc = b[row];
        for c in row + 1..dim {
            acc -= a[row * dim + c] * b[c];
        }
        b[row] = acc / a[row * dim + row];
    }
    Ok(())
}
