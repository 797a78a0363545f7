//! The multinode Shepard operator on rectangular grids.
//!
//! Each block `σ_{k,ℓ}` of the covering carries its local tensor-product
//! interpolant `p_{k,ℓ}`. The blend weight of a block is the product of the
//! inverse `u`-th powers of the distances from the query point to all of the
//! block's nodes, normalized over all blocks. Weights are evaluated in the
//! log domain: with `S_j = Σ log ‖(x, y) - node‖` over the nodes of block
//! `j`, `W_j = exp(-u (S_j - S_min)) / Σ_l exp(-u (S_l - S_min))`.

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{build_covering, BlockCovering, CartesianGrid};
use crate::scalar::{from_usize, lit, Scalar};
use crate::tensor_poly::{fit, LocalPolynomial};

/// Relative node-hit tolerance, scaled by the largest block side.
pub const NODE_TOLERANCE: f64 = 1e-12;

/// Relative weight below which the pruned evaluation drops a block.
pub const PRUNE_RATIO: f64 = 1e-16;

/// Lower limit on `u` above which the approximation-order estimate holds:
/// `(3 + r + s) / ((r + 1)(s + 1))`.
pub fn order_threshold(r: usize, s: usize) -> f64 {
    (3 + r + s) as f64 / ((r + 1) * (s + 1)) as f64
}

/// How [`ShepardModel::eval`] sums over blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Every block contributes, as in the operator's definition.
    #[default]
    Exact,
    /// Blocks whose weight is provably below [`PRUNE_RATIO`] times the
    /// largest weight are skipped, using the distance from the query point
    /// to each block's bounding rectangle as a lower bound for all of its
    /// node distances.
    Pruned,
}

/// Blend weights at one point, in `block_index_map` order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    pub weights: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn sum(&self) -> T {
        self.weights.iter().copied().sum()
    }

    pub fn min(&self) -> T {
        self.weights.iter().copied().fold(T::infinity(), T::min)
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect<T> {
    x0: T,
    x1: T,
    y0: T,
    y1: T,
}

impl<T: Scalar> Rect<T> {
    fn distance(&self, x: T, y: T) -> T {
        let dx = (self.x0 - x).max(x - self.x1).max(T::zero());
        let dy = (self.y0 - y).max(y - self.y1).max(T::zero());
        (dx * dx + dy * dy).sqrt()
    }
}

/// A fitted, evaluable multinode Shepard interpolant.
#[derive(Debug, Clone)]
pub struct ShepardModel<T> {
    grid: CartesianGrid<T>,
    covering: BlockCovering<T>,
    polys: Vec<LocalPolynomial<T>>,
    rects: Vec<Rect<T>>,
    u: T,
    node_x: Vec<T>,
    node_y: Vec<T>,
    node_z: Vec<T>,
    l_max: T,
    eps_node: T,
    mode: EvalMode,
}

/// Fits one local polynomial per block of the `(r, s)` covering of `grid`.
pub fn build_model<T: Scalar>(
    grid: &CartesianGrid<T>,
    r: usize,
    s: usize,
    u: T,
) -> Result<ShepardModel<T>> {
    if u <= T::zero() || !u.is_finite() {
        return Err(Error::InvalidExponent(u.to_f64().unwrap_or(f64::NAN)));
    }
    let covering = build_covering(grid, r, s)?;
    let threshold = order_threshold(r, s);
    if u.to_f64().is_some_and(|u| u <= threshold) {
        warn!("exponent u = {u} is not above (3+r+s)/t = {threshold:.4}; the approximation-order estimate does not apply");
    }

    let xc = grid.x_axis().coords();
    let yc = grid.y_axis().coords();
    let m = grid.m();
    let z = grid.z_row_major();

    let polys = covering
        .blocks
        .par_iter()
        .map(|b| {
            let bx = &xc[b.x_start - 1..b.x_start + r];
            let by = &yc[b.y_start - 1..b.y_start + s];
            let mut values = Vec::with_capacity((r + 1) * (s + 1));
            for row in b.y_start - 1..b.y_start + s {
                values.extend_from_slice(&z[row * m + b.x_start - 1..row * m + b.x_start + r]);
            }
            fit(bx, by, &values)
        })
        .collect::<Result<Vec<_>>>()?;

    let rects: Vec<Rect<T>> = covering
        .blocks
        .iter()
        .map(|b| Rect {
            x0: xc[b.x_start - 1],
            x1: xc[b.x_start + r - 1],
            y0: yc[b.y_start - 1],
            y1: yc[b.y_start + s - 1],
        })
        .collect();
    let l_max = rects
        .iter()
        .fold(T::zero(), |acc, q| acc.max(q.x1 - q.x0).max(q.y1 - q.y0));

    let (node_x, node_y, node_z) = grid.flattened();
    Ok(ShepardModel {
        grid: grid.clone(),
        covering,
        polys,
        rects,
        u,
        node_x,
        node_y,
        node_z,
        l_max,
        eps_node: lit::<T>(NODE_TOLERANCE) * l_max,
        mode: EvalMode::Exact,
    })
}

impl<T: Scalar> ShepardModel<T> {
    pub fn with_mode(mut self, mode: EvalMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn grid(&self) -> &CartesianGrid<T> {
        &self.grid
    }

    pub fn covering(&self) -> &BlockCovering<T> {
        &self.covering
    }

    pub fn polys(&self) -> &[LocalPolynomial<T>] {
        &self.polys
    }

    pub fn u(&self) -> T {
        self.u
    }

    /// Largest block side length.
    pub fn l_max(&self) -> T {
        self.l_max
    }

    /// Distance below which a query point is treated as a node hit.
    pub fn node_tolerance(&self) -> T {
        self.eps_node
    }

    /// Value stored at the flattened (1-based) node index.
    pub fn node_value(&self, index: usize) -> T {
        self.node_z[index - 1]
    }

    /// Closest grid node as `(flattened 1-based index, distance)`. Ties go
    /// to the lowest index.
    pub fn nearest_node(&self, x: T, y: T) -> (usize, T) {
        let xa = self.grid.x_axis();
        let ya = self.grid.y_axis();
        let n = self.grid.n();
        let ix = xa.lower_index(x);
        let iy = ya.lower_index(y);
        let mut best = (usize::MAX, T::infinity());
        for mu in ix..=(ix + 1).min(xa.len() - 1) {
            for nu in iy..=(iy + 1).min(ya.len() - 1) {
                let dx = x - xa.coords()[mu];
                let dy = y - ya.coords()[nu];
                let d2 = dx * dx + dy * dy;
                if d2 < best.1 {
                    best = (mu * n + nu + 1, d2);
                }
            }
        }
        (best.0, best.1.sqrt())
    }

    fn node_hit(&self, x: T, y: T) -> Option<usize> {
        let (idx, d) = self.nearest_node(x, y);
        (d < self.eps_node).then_some(idx)
    }

    /// Sum of log-distances to a contiguous run of `len` column-major nodes.
    #[inline]
    fn block_log_sum(&self, logs: &[T], x_start: usize, y_start: usize) -> T {
        let (r, s, n) = (self.covering.r, self.covering.s, self.covering.n);
        let mut acc = T::zero();
        for i in 0..=r {
            let base = (x_start - 1 + i) * n + y_start - 1;
            for &v in &logs[base..=base + s] {
                acc += v;
            }
        }
        acc
    }

    fn direct_block_log_sum(&self, j: usize, x: T, y: T) -> T {
        let b = &self.covering.blocks[j];
        let half: T = lit(0.5);
        let xc = self.grid.x_axis().coords();
        let yc = self.grid.y_axis().coords();
        let mut acc = T::zero();
        for &bx in &xc[b.x_start - 1..b.x_start + self.covering.r] {
            let dx = x - bx;
            for &by in &yc[b.y_start - 1..b.y_start + self.covering.s] {
                let dy = y - by;
                acc += half * (dx * dx + dy * dy).ln();
            }
        }
        acc
    }

    /// Fills `out` with `S_j` for every block.
    fn log_sums(&self, x: T, y: T, logs: &mut Vec<T>, out: &mut Vec<T>) {
        let half: T = lit(0.5);
        logs.clear();
        logs.extend(self.node_x.iter().zip(&self.node_y).map(|(&nx, &ny)| {
            let dx = x - nx;
            let dy = y - ny;
            half * (dx * dx + dy * dy).ln()
        }));
        out.clear();
        out.extend(
            self.covering
                .blocks
                .iter()
                .map(|b| self.block_log_sum(logs, b.x_start, b.y_start)),
        );
    }

    /// Normalized blend weights at a point that is not a grid node.
    pub fn weights(&self, x: T, y: T) -> Result<WeightVector<T>> {
        if let Some(node) = self.node_hit(x, y) {
            return Err(Error::NodeCoincidence { node });
        }
        let mut logs = Vec::new();
        let mut sums = Vec::new();
        self.log_sums(x, y, &mut logs, &mut sums);
        let s_min = sums.iter().copied().fold(T::infinity(), T::min);
        let mut weights: Vec<T> = sums
            .iter()
            .map(|&sj| (-self.u * (sj - s_min)).exp())
            .collect();
        let total: T = weights.iter().copied().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(WeightVector { weights })
    }

    /// Evaluates the interpolant. Points within the node tolerance of a grid
    /// node return that node's stored value.
    pub fn eval(&self, x: T, y: T) -> T {
        let mut scratch = Scratch::default();
        self.eval_with(x, y, &mut scratch)
    }

    fn eval_with(&self, x: T, y: T, scratch: &mut Scratch<T>) -> T {
        if let Some(node) = self.node_hit(x, y) {
            return self.node_z[node - 1];
        }
        match self.mode {
            EvalMode::Exact => {
                self.log_sums(x, y, &mut scratch.logs, &mut scratch.sums);
                let s_min = scratch.sums.iter().copied().fold(T::infinity(), T::min);
                let (mut num, mut den) = (T::zero(), T::zero());
                for (sj, p) in scratch.sums.iter().zip(&self.polys) {
                    let w = (-self.u * (*sj - s_min)).exp();
                    if w > T::zero() {
                        num += w * p.eval(x, y);
                        den += w;
                    }
                }
                num / den
            }
            EvalMode::Pruned => self.eval_pruned(x, y, scratch),
        }
    }

    fn eval_pruned(&self, x: T, y: T, scratch: &mut Scratch<T>) -> T {
        let dists = &mut scratch.logs;
        dists.clear();
        dists.extend(self.rects.iter().map(|q| q.distance(x, y)));
        let reference = dists
            .iter()
            .enumerate()
            .fold(
                (0, T::infinity()),
                |best, (j, &d)| if d < best.1 { (j, d) } else { best },
            )
            .0;
        let s_ref = self.direct_block_log_sum(reference, x, y);
        // Block j has S_j >= t·ln(d_j); skip it when that already puts its
        // weight below PRUNE_RATIO times the reference block's weight.
        let t: T = from_usize(self.covering.t());
        let cutoff = ((-lit::<T>(PRUNE_RATIO).ln() / self.u + s_ref) / t).exp();

        let sums = &mut scratch.sums;
        sums.clear();
        let mut kept = Vec::new();
        for (j, &d) in dists.iter().enumerate() {
            if d <= cutoff {
                let sj = if j == reference {
                    s_ref
                } else {
                    self.direct_block_log_sum(j, x, y)
                };
                sums.push(sj);
                kept.push(j);
            }
        }
        let s_min = sums.iter().copied().fold(T::infinity(), T::min);
        let (mut num, mut den) = (T::zero(), T::zero());
        for (&sj, &j) in sums.iter().zip(&kept) {
            let w = (-self.u * (sj - s_min)).exp();
            num += w * self.polys[j].eval(x, y);
            den += w;
        }
        num / den
    }

    /// Evaluates on the tensor grid `xs × ys`; row `ν` of the result holds
    /// the values at `(xs[μ], ys[ν])`.
    pub fn eval_grid(&self, xs: &[T], ys: &[T]) -> Vec<Vec<T>> {
        ys.par_iter()
            .map_init(Scratch::default, |scratch, &y| {
                xs.iter().map(|&x| self.eval_with(x, y, scratch)).collect()
            })
            .collect()
    }
}

#[derive(Debug)]
struct Scratch<T> {
    logs: Vec<T>,
    sums: Vec<T>,
}

impl<T> Default for Scratch<T> {
    fn default() -> Self {
        Self {
            logs: Vec::new(),
            sums: Vec::new(),
        }
    }
}
