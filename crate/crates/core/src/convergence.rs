//! Empirical approximation order on refined uniform grids over `[0, 1]²`.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{CartesianGrid, GridAxis};
use crate::scalar::{lit, Scalar};
use crate::shepard::build_model;

/// Side of the uniform sample lattice used for the error norm.
pub const DEFAULT_SAMPLE_DENSITY: usize = 201;

/// The four-term Franke exponential test function.
pub fn franke<T: Scalar>(x: T, y: T) -> T {
    let c = lit::<T>;
    let (x9, y9) = (c(9.0) * x, c(9.0) * y);
    let sq = |v: T| v * v;
    c(0.75) * (-(sq(x9 - c(2.0)) + sq(y9 - c(2.0))) / c(4.0)).exp()
        + c(0.75) * (-sq(x9 + c(1.0)) / c(49.0) - (y9 + c(1.0)) / c(10.0)).exp()
        + c(0.5) * (-(sq(x9 - c(7.0)) + sq(y9 - c(3.0))) / c(4.0)).exp()
        - c(0.2) * (-sq(x9 - c(4.0)) - sq(y9 - c(7.0))).exp()
}

/// Named test functions selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Franke,
    /// `exp(x + y)`
    Exp,
}

impl TestFunction {
    pub fn eval<T: Scalar>(self, x: T, y: T) -> T {
        match self {
            TestFunction::Franke => franke(x, y),
            TestFunction::Exp => (x + y).exp(),
        }
    }
}

impl FromStr for TestFunction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "franke" => Ok(TestFunction::Franke),
            "exp" => Ok(TestFunction::Exp),
            other => Err(format!(
                "unknown test function '{other}' (expected franke or exp)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<T> {
    pub m: usize,
    pub n: usize,
    pub l_max: T,
    pub max_err: T,
    /// `log2(e_prev / e)`, present only when `l_max` halved since the
    /// previous row.
    pub observed_order: Option<T>,
}

/// Builds the `(r, s, u)` interpolant of `f` on square uniform grids of the
/// given sizes and records the sup error over a `sample_density²` lattice.
pub fn run_convergence<T, F>(
    f: F,
    r: usize,
    s: usize,
    u: T,
    sizes: &[usize],
    sample_density: usize,
) -> Result<Vec<ConvergenceRow<T>>>
where
    T: Scalar,
    F: Fn(T, T) -> T + Sync,
{
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::SizesNotIncreasing);
    }
    for &size in sizes {
        if size < r.max(s) + 1 || (size - 1) % r != 0 || (size - 1) % s != 0 {
            return Err(Error::IncompatibleSize { size, r, s });
        }
    }
    let sample = GridAxis::linspace(T::zero(), T::one(), sample_density.max(2))?;
    let exact: Vec<Vec<T>> = sample
        .coords()
        .par_iter()
        .map(|&y| sample.coords().iter().map(|&x| f(x, y)).collect())
        .collect();

    let mut rows: Vec<ConvergenceRow<T>> = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let axis = GridAxis::linspace(T::zero(), T::one(), size)?;
        let grid = CartesianGrid::sample(axis.clone(), axis, &f)?;
        let model = build_model(&grid, r, s, u)?;
        let approx = model.eval_grid(sample.coords(), sample.coords());
        let max_err = approx
            .iter()
            .zip(&exact)
            .flat_map(|(a, e)| a.iter().zip(e).map(|(&p, &q)| (p - q).abs()))
            .fold(T::zero(), T::max);
        let l_max = model.l_max();
        let two: T = lit(2.0);
        let observed_order = rows.last().and_then(|prev| {
            let ratio = prev.l_max / l_max;
            ((ratio - two).abs() < lit(1e-9)).then(|| (prev.max_err / max_err).log2())
        });
        rows.push(ConvergenceRow {
            m: size,
            n: size,
            l_max,
            max_err,
            observed_order,
        });
    }
    Ok(rows)
}

/// CSV table with columns `m,n,l_max,max_err,observed_order`.
pub fn convergence_csv<T: Scalar>(rows: &[ConvergenceRow<T>]) -> String {
    let mut out = String::from("m,n,l_max,max_err,observed_order\n");
    for row in rows {
        let order = row
            .observed_order
            .and_then(|o| o.to_f64())
            .map(|o| format!("{o:?}"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{:?},{:?},{}",
            row.m,
            row.n,
            row.l_max.to_f64().unwrap_or(f64::NAN),
            row.max_err.to_f64().unwrap_or(f64::NAN),
            order
        );
    }
    out
}
