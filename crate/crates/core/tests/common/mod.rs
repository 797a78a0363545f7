//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the crate's fitting or weighting code: local
//! polynomials use the Lagrange form and the blend weights are the literal
//! product-of-distances formula accumulated in double-double arithmetic.

#![allow(dead_code, clippy::too_many_arguments)]

use twofloat::TwoFloat;

/// 1-D Lagrange basis polynomial `i` on `nodes`, evaluated at `t`.
pub fn lagrange_basis(nodes: &[f64], i: usize, t: f64) -> f64 {
    let mut acc = 1.0;
    for (j, &c) in nodes.iter().enumerate() {
        if j != i {
            acc *= (t - c) / (nodes[i] - c);
        }
    }
    acc
}

/// Tensor-product Lagrange interpolant; `vals[β * bx.len() + α]` sits at
/// `(bx[α], by[β])`.
pub fn lagrange_2d(bx: &[f64], by: &[f64], vals: &[f64], x: f64, y: f64) -> f64 {
    let lx: Vec<f64> = (0..bx.len()).map(|a| lagrange_basis(bx, a, x)).collect();
    let ly: Vec<f64> = (0..by.len()).map(|b| lagrange_basis(by, b, y)).collect();
    let mut acc = 0.0;
    for (b, wy) in ly.iter().enumerate() {
        for (a, wx) in lx.iter().enumerate() {
            acc += vals[b * bx.len() + a] * wx * wy;
        }
    }
    acc
}

/// Blocks of a divisible covering as `(x node range, y node range)`,
/// 0-based, `k` outer and `ℓ` inner.
pub fn literal_blocks(m: usize, n: usize, r: usize, s: usize) -> Vec<(usize, usize)> {
    assert!(
        (m - 1).is_multiple_of(r) && (n - 1).is_multiple_of(s),
        "oracle handles divisible grids only"
    );
    let mut out = Vec::new();
    for k in 0..(m - 1) / r {
        for l in 0..(n - 1) / s {
            out.push((k * r, l * s));
        }
    }
    out
}

/// `(d²)^{-u/2}` for `u` a multiple of 1/2, via powers of the fourth root.
fn inverse_power(d2: TwoFloat, u: f64) -> TwoFloat {
    let quarters = 2.0 * u;
    assert!(quarters.fract() == 0.0, "oracle supports u in steps of 0.5");
    if (u / 2.0).fract() == 0.0 {
        d2.powi(-((u / 2.0) as i32))
    } else {
        d2.sqrt().sqrt().powi(-(quarters as i32))
    }
}

/// Literal multinode Shepard weights (product of `‖·‖^{-u}` over block
/// nodes, normalized), in double-double precision.
pub fn literal_weights(
    xs: &[f64],
    ys: &[f64],
    r: usize,
    s: usize,
    u: f64,
    x: f64,
    y: f64,
) -> Vec<TwoFloat> {
    let blocks = literal_blocks(xs.len(), ys.len(), r, s);
    let raw: Vec<TwoFloat> = blocks
        .iter()
        .map(|&(i0, j0)| {
            let mut prod = TwoFloat::from(1.0);
            for &nx in &xs[i0..=i0 + r] {
                for &ny in &ys[j0..=j0 + s] {
                    let dx = TwoFloat::from(x) - TwoFloat::from(nx);
                    let dy = TwoFloat::from(y) - TwoFloat::from(ny);
                    prod *= inverse_power(dx * dx + dy * dy, u);
                }
            }
            prod
        })
        .collect();
    let mut total = TwoFloat::from(0.0);
    for w in &raw {
        total += *w;
    }
    raw.into_iter().map(|w| w / total).collect()
}

/// Direct multinode Shepard evaluation: literal weights times Lagrange-form
/// local interpolants. `z[ν][μ]` is the value at `(xs[μ], ys[ν])`.
pub fn direct_shepard(
    xs: &[f64],
    ys: &[f64],
    z: &[Vec<f64>],
    r: usize,
    s: usize,
    u: f64,
    x: f64,
    y: f64,
) -> f64 {
    for (mu, &nx) in xs.iter().enumerate() {
        for (nu, &ny) in ys.iter().enumerate() {
            if nx == x && ny == y {
                return z[nu][mu];
            }
        }
    }
    let weights = literal_weights(xs, ys, r, s, u, x, y);
    let mut acc = TwoFloat::from(0.0);
    for (&(i0, j0), w) in literal_blocks(xs.len(), ys.len(), r, s).iter().zip(weights) {
        let bx = &xs[i0..=i0 + r];
        let by = &ys[j0..=j0 + s];
        let vals: Vec<f64> = (j0..=j0 + s)
            .flat_map(|nu| (i0..=i0 + r).map(move |mu| (nu, mu)))
            .map(|(nu, mu)| z[nu][mu])
            .collect();
        acc += w * TwoFloat::from(lagrange_2d(bx, by, &vals, x, y));
    }
    acc.hi() + acc.lo()
}

/// Exhaustive nearest node: `(column-major 1-based index, distance)`.
pub fn nearest_node_scan(xs: &[f64], ys: &[f64], x: f64, y: f64) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (mu, &nx) in xs.iter().enumerate() {
        for (nu, &ny) in ys.iter().enumerate() {
            let d2 = (x - nx).powi(2) + (y - ny).powi(2);
            if d2 < best.1 {
                best = (mu * ys.len() + nu + 1, d2);
            }
        }
    }
    (best.0, best.1.sqrt())
}

/// Random tensor polynomial `Σ c[λ][μ] x^λ y^μ`.
pub struct TensorPoly {
    pub coeffs: Vec<Vec<f64>>,
}

impl TensorPoly {
    pub fn random(r: usize, s: usize, rng: &mut impl rand::Rng) -> Self {
        Self {
            coeffs: (0..=r)
                .map(|_| (0..=s).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect(),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (l, row) in self.coeffs.iter().enumerate() {
            for (m, c) in row.iter().enumerate() {
                acc += c * x.powi(l as i32) * y.powi(m as i32);
            }
        }
        acc
    }
}

/// Strictly increasing random axis on `[lo, hi]` with both ends included.
pub fn random_axis(len: usize, lo: f64, hi: f64, rng: &mut impl rand::Rng) -> Vec<f64> {
    let gaps: Vec<f64> = (0..len - 1).map(|_| rng.gen_range(0.5..1.5)).collect();
    let total: f64 = gaps.iter().sum();
    let mut out = vec![lo];
    let mut acc = 0.0;
    for g in &gaps[..len - 2] {
        acc += g;
        out.push(lo + (hi - lo) * acc / total);
    }
    out.push(hi);
    out
}
