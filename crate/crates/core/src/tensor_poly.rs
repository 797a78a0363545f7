//! Local tensor-product interpolating polynomials on a single block.
//!
//! A block polynomial is stored in the scaled, barycenter-shifted basis
//! `((x - x_b)/h_x)^λ ((y - y_b)/h_y)^μ`, where `h_x` and `h_y` are the
//! largest node distances from the barycenter along each axis. This spans
//! `P_r ⊗ P_s` and stays well defined when a node sits on the barycenter.

use crate::error::{Error, Result};
use crate::linalg::solve_in_place;
use crate::scalar::{from_usize, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LocalPolynomial<T> {
    r: usize,
    s: usize,
    center: (T, T),
    h_x: T,
    h_y: T,
    /// `a_{λμ}` at `λ * (s + 1) + μ`.
    coeffs: Vec<T>,
}

impl<T: Scalar> LocalPolynomial<T> {
    /// Builds a polynomial from explicit coefficients, `coeffs[λ][μ]`.
    pub fn from_coeffs(center: (T, T), h_x: T, h_y: T, coeffs: Vec<Vec<T>>) -> Self {
        let r = coeffs.len() - 1;
        let s = coeffs[0].len() - 1;
        assert!(
            coeffs.iter().all(|c| c.len() == s + 1),
            "ragged coefficient matrix"
        );
        assert!(
            h_x > T::zero() && h_y > T::zero(),
            "scale factors must be positive"
        );
        Self {
            r,
            s,
            center,
            h_x,
            h_y,
            coeffs: coeffs.into_iter().flatten().collect(),
        }
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn center(&self) -> (T, T) {
        self.center
    }

    pub fn scales(&self) -> (T, T) {
        (self.h_x, self.h_y)
    }

    /// Coefficient `a_{λμ}`.
    pub fn coeff(&self, lambda: usize, mu: usize) -> T {
        self.coeffs[lambda * (self.s + 1) + mu]
    }

    /// Nested Horner evaluation in both variables.
    #[inline]
    pub fn eval(&self, x: T, y: T) -> T {
        let xi = (x - self.center.0) / self.h_x;
        let eta = (y - self.center.1) / self.h_y;
        let stride = self.s + 1;
        let mut acc = T::zero();
        for row in self.coeffs.chunks_exact(stride).rev() {
            let inner = row.iter().rev().fold(T::zero(), |a, &c| a * eta + c);
            acc = acc * xi + inner;
        }
        acc
    }
}

/// Bounds on `|∂^{r+1}_x f|`, `|∂^{s+1}_y f|` and `|∂^{r+1}_x ∂^{s+1}_y f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBounds<T> {
    pub m_x: T,
    pub m_y: T,
    pub m_xy: T,
}

impl<T: Scalar> DerivativeBounds<T> {
    /// Panics unless all three bounds are finite and non-negative.
    pub fn new(m_x: T, m_y: T, m_xy: T) -> Self {
        for v in [m_x, m_y, m_xy] {
            assert!(
                v.is_finite() && v >= T::zero(),
                "derivative bound must be finite and >= 0"
            );
        }
        Self { m_x, m_y, m_xy }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }
}

fn mean<T: Scalar>(c: &[T]) -> T {
    c.iter().copied().sum::<T>() / from_usize(c.len())
}

fn max_offset<T: Scalar>(c: &[T], center: T) -> T {
    c.iter()
        .fold(T::zero(), |acc, &v| acc.max((v - center).abs()))
}

fn check_increasing<T: Scalar>(c: &[T]) -> Result<()> {
    if c.len() < 2 {
        return Err(Error::AxisTooShort(c.len()));
    }
    for (i, v) in c.iter().enumerate() {
        if !v.is_finite() || (i > 0 && c[i - 1] >= *v) {
            return Err(Error::AxisNotIncreasing(i + 1));
        }
    }
    Ok(())
}

/// Fits the tensor-product interpolant of degree `(r, s)` with
/// `r = block_x.len() - 1`, `s = block_y.len() - 1`.
///
/// `values` is row-major with `s + 1` rows of `r + 1` entries:
/// `values[β * (r + 1) + α]` is the datum at `(block_x[α], block_y[β])`.
pub fn fit<T: Scalar>(block_x: &[T], block_y: &[T], values: &[T]) -> Result<LocalPolynomial<T>> {
    check_increasing(block_x)?;
    check_increasing(block_y)?;
    let (nx, ny) = (block_x.len(), block_y.len());
    if values.len() != nx * ny {
        return Err(Error::ShapeMismatch {
            rows: values.len() / nx,
            cols: nx,
            expected_rows: ny,
            expected_cols: nx,
        });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue {
            row: i / nx + 1,
            col: i % nx + 1,
        });
    }

    let center = (mean(block_x), mean(block_y));
    let h_x = max_offset(block_x, center.0);
    let h_y = max_offset(block_y, center.1);

    // Powers of the scaled node offsets along each axis.
    let powers = |c: &[T], ctr: T, h: T| -> Vec<Vec<T>> {
        c.iter()
            .map(|&v| {
                let t = (v - ctr) / h;
                let mut p = Vec::with_capacity(c.len());
                let mut acc = T::one();
                for _ in 0..c.len() {
                    p.push(acc);
                    acc *= t;
                }
                p
            })
            .collect()
    };
    let px = powers(block_x, center.0, h_x);
    let py = powers(block_y, center.1, h_y);

    // Unknown a_{λμ} sits at column λ + μ(r+1); node (α, β) at row α + β(r+1).
    let dim = nx * ny;
    let mut matrix = vec![T::zero(); dim * dim];
    let mut rhs = vec![T::zero(); dim];
    for beta in 0..ny {
        for alpha in 0..nx {
            let row = alpha + beta * nx;
            rhs[row] = values[beta * nx + alpha];
            for mu in 0..ny {
                for lambda in 0..nx {
                    matrix[row * dim + lambda + mu * nx] = px[alpha][lambda] * py[beta][mu];
                }
            }
        }
    }
    solve_in_place(&mut matrix, &mut rhs)?;

    let mut coeffs = vec![T::zero(); dim];
    for mu in 0..ny {
        for lambda in 0..nx {
            coeffs[lambda * ny + mu] = rhs[lambda + mu * nx];
        }
    }
    Ok(LocalPolynomial {
        r: nx - 1,
        s: ny - 1,
        center,
        h_x,
        h_y,
        coeffs,
    })
}

/// The node polynomials `u_r(x) = Π (x - x_λ)` and `v_s(y) = Π (y - y_μ)`.
pub fn node_polynomials<T: Scalar>(block_x: &[T], block_y: &[T], x: T, y: T) -> (T, T) {
    let u = block_x.iter().fold(T::one(), |acc, &c| acc * (x - c));
    let v = block_y.iter().fold(T::one(), |acc, &c| acc * (y - c));
    (u, v)
}

fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, i| acc * from_usize(i))
}

/// Upper bound on `|f(x, y) - p(x, y)|` from the tensor-product remainder
/// with the intermediate-point derivatives replaced by their sup bounds.
pub fn stancu_bound<T: Scalar>(
    block_x: &[T],
    block_y: &[T],
    x: T,
    y: T,
    bounds: &DerivativeBounds<T>,
) -> T {
    let (u, v) = node_polynomials(block_x, block_y, x, y);
    let (u, v) = (u.abs(), v.abs());
    let fx: T = factorial(block_x.len());
    let fy: T = factorial(block_y.len());
    u * bounds.m_x / fx + v * bounds.m_y / fy + u * v * bounds.m_xy / (fx * fy)
}
