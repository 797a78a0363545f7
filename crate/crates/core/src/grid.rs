//! Cartesian node grids, flattened index arithmetic and the block covering.
//!
//! Every index exposed here is 1-based: node `(ν, μ)` is row `ν` (y index)
//! and column `μ` (x index), and its flattened position is `(μ-1)·n + ν`.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, Scalar};

/// A strictly increasing list of at least two finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis<T> {
    coords: Vec<T>,
}

impl<T: Scalar> GridAxis<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::AxisTooShort(coords.len()));
        }
        for (i, c) in coords.iter().enumerate() {
            if !c.is_finite() || (i > 0 && coords[i - 1] >= *c) {
                return Err(Error::AxisNotIncreasing(i + 1));
            }
        }
        Ok(Self { coords })
    }

    /// `len` equispaced coordinates from `start` with spacing `step`.
    pub fn uniform(start: T, step: T, len: usize) -> Result<Self> {
        Self::new((0..len).map(|i| start + step * from_usize(i)).collect())
    }

    /// `len` equispaced coordinates covering `[lo, hi]` with both ends hit exactly.
    pub fn linspace(lo: T, hi: T, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::AxisTooShort(len));
        }
        let last = from_usize::<T>(len - 1);
        Self::new(
            (0..len)
                .map(|i| {
                    if i + 1 == len {
                        hi
                    } else {
                        lo + (hi - lo) * from_usize(i) / last
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn first(&self) -> T {
        self.coords[0]
    }

    pub fn last(&self) -> T {
        self.coords[self.coords.len() - 1]
    }

    /// Position of the last coordinate `<= v` (0-based), clamped to the axis.
    pub(crate) fn lower_index(&self, v: T) -> usize {
        let p = self.coords.partition_point(|c| *c <= v);
        p.saturating_sub(1)
    }
}

/// Node axes plus the elevation matrix `z`, stored with `n` rows (y) and
/// `m` columns (x) so that `z[ν][μ]` is the value at `(x_μ, y_ν)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianGrid<T> {
    x_axis: GridAxis<T>,
    y_axis: GridAxis<T>,
    z: Vec<T>,
}

impl<T: Scalar> CartesianGrid<T> {
    /// `z` is row-major with `y_axis.len()` rows of `x_axis.len()` entries.
    pub fn new(x_axis: GridAxis<T>, y_axis: GridAxis<T>, z: Vec<Vec<T>>) -> Result<Self> {
        let (m, n) = (x_axis.len(), y_axis.len());
        let cols = z.first().map_or(0, Vec::len);
        if z.len() != n || z.iter().any(|row| row.len() != m) {
            return Err(Error::ShapeMismatch {
                rows: z.len(),
                cols,
                expected_rows: n,
                expected_cols: m,
            });
        }
        let z: Vec<T> = z.into_iter().flatten().collect();
        Self::from_row_major(x_axis, y_axis, z)
    }

    pub fn from_row_major(x_axis: GridAxis<T>, y_axis: GridAxis<T>, z: Vec<T>) -> Result<Self> {
        let (m, n) = (x_axis.len(), y_axis.len());
        if z.len() != m * n {
            return Err(Error::ShapeMismatch {
                rows: z.len() / m.max(1),
                cols: m,
                expected_rows: n,
                expected_cols: m,
            });
        }
        if let Some(i) = z.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: i / m + 1,
                col: i % m + 1,
            });
        }
        Ok(Self { x_axis, y_axis, z })
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(T, T) -> T>(
        x_axis: GridAxis<T>,
        y_axis: GridAxis<T>,
        f: F,
    ) -> Result<Self> {
        let mut z = Vec::with_capacity(x_axis.len() * y_axis.len());
        for &y in y_axis.coords() {
            for &x in x_axis.coords() {
                z.push(f(x, y));
            }
        }
        Self::from_row_major(x_axis, y_axis, z)
    }

    pub fn x_axis(&self) -> &GridAxis<T> {
        &self.x_axis
    }

    pub fn y_axis(&self) -> &GridAxis<T> {
        &self.y_axis
    }

    /// Number of x nodes.
    pub fn m(&self) -> usize {
        self.x_axis.len()
    }

    /// Number of y nodes.
    pub fn n(&self) -> usize {
        self.y_axis.len()
    }

    /// Elevation at row `nu`, column `mu` (both 1-based).
    pub fn z(&self, nu: usize, mu: usize) -> T {
        self.z[(nu - 1) * self.m() + (mu - 1)]
    }

    /// Row-major elevations, `n` rows of `m`.
    pub fn z_row_major(&self) -> &[T] {
        &self.z
    }

    pub fn z_rows(&self) -> Vec<Vec<T>> {
        self.z.chunks(self.m()).map(<[T]>::to_vec).collect()
    }

    /// Flattened node coordinates and values in column-major order, so that
    /// entry `flatten_index(ν, μ, n) - 1` belongs to node `(ν, μ)`.
    pub fn flattened(&self) -> (Vec<T>, Vec<T>, Vec<T>) {
        let (m, n) = (self.m(), self.n());
        let mut xs = Vec::with_capacity(m * n);
        let mut ys = Vec::with_capacity(m * n);
        let mut zs = Vec::with_capacity(m * n);
        for mu in 1..=m {
            for nu in 1..=n {
                xs.push(self.x_axis.coords[mu - 1]);
                ys.push(self.y_axis.coords[nu - 1]);
                zs.push(self.z(nu, mu));
            }
        }
        (xs, ys, zs)
    }
}

/// One rectangular block of `(r+1)×(s+1)` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block<T> {
    /// Column block index, 1..=K.
    pub k: usize,
    /// Row block index, 1..=L.
    pub l: usize,
    /// 1-based index of the first x node.
    pub x_start: usize,
    /// 1-based index of the first y node.
    pub y_start: usize,
    pub barycenter: (T, T),
}

/// The family of blocks covering the grid, in `block_index_map` order
/// (`k` outer, `ℓ` inner).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCovering<T> {
    pub r: usize,
    pub s: usize,
    pub k_blocks: usize,
    pub l_blocks: usize,
    pub m: usize,
    pub n: usize,
    pub blocks: Vec<Block<T>>,
}

impl<T: Scalar> BlockCovering<T> {
    /// Nodes per block.
    pub fn t(&self) -> usize {
        (self.r + 1) * (self.s + 1)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block `σ_{k,ℓ}` (1-based).
    pub fn block(&self, k: usize, l: usize) -> Result<&Block<T>> {
        check_range(k, self.k_blocks)?;
        check_range(l, self.l_blocks)?;
        Ok(&self.blocks[(k - 1) * self.l_blocks + (l - 1)])
    }

    /// Flattened index of the bottom-left node of block `(k, ℓ)`, including
    /// shifted trailing blocks.
    pub fn anchor_index(&self, k: usize, l: usize) -> Result<usize> {
        let b = self.block(k, l)?;
        flatten_index(b.y_start, b.x_start, self.n, self.m)
    }

    /// Flattened (1-based) indices of all nodes of a block, `i` outer over x.
    pub fn node_indices(&self, block: &Block<T>) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        let (xs, ys) = (block.x_start, block.y_start);
        (0..=self.r).flat_map(move |i| (0..=self.s).map(move |j| (xs + i - 1) * n + ys + j))
    }
}

fn check_range(index: usize, max: usize) -> Result<()> {
    if index == 0 || index > max {
        Err(Error::IndexOutOfRange { index, max })
    } else {
        Ok(())
    }
}

/// Start indices (1-based) of the blocks along one axis with `len` nodes
/// and block degree `deg`. When `deg` does not divide `len - 1` the final
/// block is shifted back so that it ends on the last node.
fn axis_starts(len: usize, deg: usize) -> Vec<usize> {
    let count = (len - 1).div_ceil(deg);
    (1..=count)
        .map(|k| ((k - 1) * deg + 1).min(len - deg))
        .collect()
}

/// Covers the grid with `(r+1)×(s+1)` node blocks.
pub fn build_covering<T: Scalar>(
    grid: &CartesianGrid<T>,
    r: usize,
    s: usize,
) -> Result<BlockCovering<T>> {
    let (m, n) = (grid.m(), grid.n());
    if r == 0 || s == 0 {
        return Err(Error::InvalidDegree { r, s });
    }
    if m < r + 1 || n < s + 1 {
        return Err(Error::GridTooSmall { m, n, r, s });
    }
    let xs = axis_starts(m, r);
    let ys = axis_starts(n, s);
    let xc = grid.x_axis().coords();
    let yc = grid.y_axis().coords();
    let mean = |c: &[T]| c.iter().copied().sum::<T>() / from_usize(c.len());
    let mut blocks = Vec::with_capacity(xs.len() * ys.len());
    for (ki, &x_start) in xs.iter().enumerate() {
        let xb = mean(&xc[x_start - 1..x_start + r]);
        for (li, &y_start) in ys.iter().enumerate() {
            let yb = mean(&yc[y_start - 1..y_start + s]);
            blocks.push(Block {
                k: ki + 1,
                l: li + 1,
                x_start,
                y_start,
                barycenter: (xb, yb),
            });
        }
    }
    Ok(BlockCovering {
        r,
        s,
        k_blocks: xs.len(),
        l_blocks: ys.len(),
        m,
        n,
        blocks,
    })
}

/// Maps the linear block index `j` to `(k, ℓ)`.
pub fn block_index_map(j: usize, k_blocks: usize, l_blocks: usize) -> Result<(usize, usize)> {
    check_range(j, k_blocks * l_blocks)?;
    Ok(((j - 1) / l_blocks + 1, (j - 1) % l_blocks + 1))
}

/// Inverse of [`block_index_map`].
pub fn block_linear_index(k: usize, l: usize, k_blocks: usize, l_blocks: usize) -> Result<usize> {
    check_range(k, k_blocks)?;
    check_range(l, l_blocks)?;
    Ok((k - 1) * l_blocks + l)
}

/// Column-major flattened index of node `(ν, μ)` on a grid with `n` rows
/// and `m` columns.
pub fn flatten_index(nu: usize, mu: usize, n: usize, m: usize) -> Result<usize> {
    check_range(nu, n)?;
    check_range(mu, m)?;
    Ok((mu - 1) * n + nu)
}

/// Inverse of [`flatten_index`]: returns `(ν, μ)`.
pub fn unflatten_index(index: usize, n: usize, m: usize) -> Result<(usize, usize)> {
    check_range(index, n * m)?;
    Ok(((index - 1) % n + 1, (index - 1) / n + 1))
}

/// Anchor index `(k-1)·r·n + (ℓ-1)·s + 1` of block `(k, ℓ)` for coverings
/// where the degrees divide the grid sizes. Use
/// [`BlockCovering::anchor_index`] for shifted trailing blocks.
pub fn block_anchor_index(
    k: usize,
    l: usize,
    r: usize,
    s: usize,
    m: usize,
    n: usize,
) -> Result<usize> {
    let k_max = (m.max(1) - 1) / r.max(1);
    let l_max = (n.max(1) - 1) / s.max(1);
    check_range(k, k_max)?;
    check_range(l, l_max)?;
    Ok((k - 1) * r * n + (l - 1) * s + 1)
}
