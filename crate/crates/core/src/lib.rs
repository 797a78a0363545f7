//! Multinode Shepard interpolation on rectangular grids.
//!
//! The grid is covered by `(r+1)×(s+1)` node blocks, each carrying a local
//! tensor-product interpolating polynomial. The blocks are blended with
//! multinode Shepard weights into a global interpolant that reproduces the
//! data at every node and every polynomial of `P_r ⊗ P_s`. Around that core
//! the crate provides ESRI ASCII raster I/O, DEM decimation and resampling,
//! vertical and horizontal accuracy metrics, and a convergence harness.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the raster tools use.

pub mod accuracy;
pub mod convergence;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod raster;
pub mod scalar;
pub mod shepard;
pub mod tensor_poly;

pub use error::{Error, Result};
pub use grid::{
    block_anchor_index, block_index_map, build_covering, flatten_index, unflatten_index, Block,
};
pub use scalar::Scalar;
pub use shepard::{build_model, order_threshold, EvalMode};
pub use tensor_poly::{fit, node_polynomials, stancu_bound};

pub type GridAxis = grid::GridAxis<f64>;
pub type CartesianGrid = grid::CartesianGrid<f64>;
pub type BlockCovering = grid::BlockCovering<f64>;
pub type LocalPolynomial = tensor_poly::LocalPolynomial<f64>;
pub type DerivativeBounds = tensor_poly::DerivativeBounds<f64>;
pub type ShepardModel = shepard::ShepardModel<f64>;
pub type WeightVector = shepard::WeightVector<f64>;

pub type GridAxisF32 = grid::GridAxis<f32>;
pub type CartesianGridF32 = grid::CartesianGrid<f32>;
pub type ShepardModelF32 = shepard::ShepardModel<f32>;
