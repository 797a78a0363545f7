//! Vertical and horizontal accuracy of a test raster against a reference.
//!
//! Horizontal discrepancy follows `H_d = Σ A / ((Σ C_ref + Σ C_test) / 2)`,
//! where `C` are contour lengths and `A` the area between corresponding
//! contours. The area term for a level `c` is measured as the area of the
//! symmetric difference of the superlevel sets `{z_ref >= c}` and
//! `{z_test >= c}`, which equals the area between the two contours whenever
//! they pair up one-to-one.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::raster::Raster;

/// Sub-samples per cell edge used for the superlevel-set areas.
pub const AREA_SUBSAMPLES: usize = 4;

/// Number of default contour levels.
pub const DEFAULT_LEVEL_COUNT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct VerticalReport {
    pub mean_abs: f64,
    /// Population standard deviation of the absolute errors.
    pub sd_abs: f64,
    pub max_abs: f64,
    pub count: usize,
    pub threshold: f64,
    /// Row-major, north-up; `true` where `|ref - test| > threshold`.
    pub exceed_mask: Vec<bool>,
}

impl VerticalReport {
    pub fn exceed_count(&self) -> usize {
        self.exceed_mask.iter().filter(|&&b| b).count()
    }

    /// The mask as a 0/1 raster on the reference geometry; cells that were
    /// not compared carry the reference nodata value.
    pub fn mask_raster(&self, reference: &Raster, test: &Raster) -> Raster {
        let nodata = reference.nodata.unwrap_or(-9999.0);
        let values = reference
            .values
            .iter()
            .zip(&test.values)
            .zip(&self.exceed_mask)
            .map(|((&a, &b), &e)| {
                if reference.is_nodata(a) || test.is_nodata(b) {
                    nodata
                } else if e {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        Raster {
            nodata: Some(nodata),
            values,
            ..reference.clone()
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "count,mean_abs,sd_abs,max_abs,threshold,exceed_count\n{},{:?},{:?},{:?},{:?},{}\n",
            self.count,
            self.mean_abs,
            self.sd_abs,
            self.max_abs,
            self.threshold,
            self.exceed_count()
        )
    }

    pub fn summary(&self) -> String {
        format!(
            "cells compared: {}\nmean |error|: {:.3}\nsd |error|: {:.3}\nmax |error|: {:.3}\ncells with |error| > {:.3}: {}\n",
            self.count,
            self.mean_abs,
            self.sd_abs,
            self.max_abs,
            self.threshold,
            self.exceed_count()
        )
    }
}

/// Absolute-error statistics over all cells valid in both rasters.
pub fn vertical_accuracy(
    reference: &Raster,
    test: &Raster,
    threshold: f64,
) -> Result<VerticalReport> {
    reference.same_geometry(test)?;
    let mut count = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut max_abs = 0.0f64;
    let mut exceed_mask = Vec::with_capacity(reference.values.len());
    for (&a, &b) in reference.values.iter().zip(&test.values) {
        if reference.is_nodata(a) || test.is_nodata(b) {
            exceed_mask.push(false);
            continue;
        }
        let e = (a - b).abs();
        count += 1;
        let delta = e - mean;
        mean += delta / count as f64;
        m2 += delta * (e - mean);
        max_abs = max_abs.max(e);
        exceed_mask.push(e > threshold);
    }
    if count == 0 {
        return Err(Error::NoData);
    }
    Ok(VerticalReport {
        mean_abs: mean,
        sd_abs: (m2 / count as f64).max(0.0).sqrt(),
        max_abs,
        count,
        threshold,
        exceed_mask,
    })
}

/// Corner values of the cell between rows `row`, `row + 1` and columns
/// `col`, `col + 1`, ordered bottom-left, bottom-right, top-right, top-left.
fn cell_corners(r: &Raster, row: usize, col: usize) -> Option<[f64; 4]> {
    let c = [
        r.get(row + 1, col),
        r.get(row + 1, col + 1),
        r.get(row, col + 1),
        r.get(row, col),
    ];
    if c.iter().any(|&v| r.is_nodata(v) || !v.is_finite()) {
        None
    } else {
        Some(c)
    }
}

/// Length of the contour pieces inside one cell of side `h`.
fn cell_contour_length(c: [f64; 4], level: f64, h: f64) -> f64 {
    const CORNER: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let inside = c.map(|v| v >= level);
    let crossing = |e: usize| -> Option<(f64, f64)> {
        let (a, b) = (e, (e + 1) % 4);
        if inside[a] == inside[b] {
            return None;
        }
        let t = (level - c[a]) / (c[b] - c[a]);
        let (pa, pb) = (CORNER[a], CORNER[b]);
        Some((pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1)))
    };
    let seg = |p: (f64, f64), q: (f64, f64)| h * (p.0 - q.0).hypot(p.1 - q.1);
    let pts: Vec<(usize, (f64, f64))> =
        (0..4).filter_map(|e| crossing(e).map(|p| (e, p))).collect();
    match pts.len() {
        2 => seg(pts[0].1, pts[1].1),
        4 => {
            // Saddle: corner i sits between edges i-1 and i. The corners
            // whose class differs from the cell-centre average are cut off.
            let center_inside = c.iter().sum::<f64>() / 4.0 >= level;
            let p = |e: usize| pts[e].1;
            (0..4)
                .filter(|&i| inside[i] != center_inside)
                .map(|i| seg(p((i + 3) % 4), p(i)))
                .sum()
        }
        _ => 0.0,
    }
}

/// Total length of the marching-squares iso-contour at `level`, measured
/// on the cell-centre node lattice.
pub fn contour_length(r: &Raster, level: f64) -> f64 {
    if r.nrows < 2 || r.ncols < 2 {
        return 0.0;
    }
    (0..r.nrows - 1)
        .into_par_iter()
        .map(|row| {
            (0..r.ncols - 1)
                .filter_map(|col| cell_corners(r, row, col))
                .map(|c| cell_contour_length(c, level, r.cellsize))
                .sum::<f64>()
        })
        .sum()
}

/// `DEFAULT_LEVEL_COUNT` equispaced levels strictly between the raster's
/// minimum and maximum.
pub fn default_levels(r: &Raster) -> Vec<f64> {
    let Some((lo, hi)) = r.min_max() else {
        return Vec::new();
    };
    let step = (hi - lo) / (DEFAULT_LEVEL_COUNT + 1) as f64;
    (1..=DEFAULT_LEVEL_COUNT)
        .map(|i| lo + i as f64 * step)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelTerm {
    pub level: f64,
    pub area: f64,
    pub len_ref: f64,
    pub len_test: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalReport {
    pub levels: Vec<LevelTerm>,
    pub area_sum: f64,
    pub len_ref: f64,
    pub len_test: f64,
    pub h_d: f64,
}

fn discrepancy(area: f64, len_ref: f64, len_test: f64) -> f64 {
    let mean_len = 0.5 * (len_ref + len_test);
    if area == 0.0 {
        0.0
    } else if mean_len == 0.0 {
        f64::INFINITY
    } else {
        area / mean_len
    }
}

impl HorizontalReport {
    /// One row per level plus a `summary` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,level,area,len_ref,len_test,h_d\n");
        for t in &self.levels {
            let _ = writeln!(
                out,
                "level,{:?},{:?},{:?},{:?},{:?}",
                t.level,
                t.area,
                t.len_ref,
                t.len_test,
                discrepancy(t.area, t.len_ref, t.len_test)
            );
        }
        let _ = writeln!(
            out,
            "summary,,{:?},{:?},{:?},{:?}",
            self.area_sum, self.len_ref, self.len_test, self.h_d
        );
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!("levels: {}\n", self.levels.len());
        for t in &self.levels {
            let _ = writeln!(
                out,
                "  level {:.3}: area {:.3}, length ref {:.3}, length test {:.3}",
                t.level, t.area, t.len_ref, t.len_test
            );
        }
        let _ = writeln!(
            out,
            "total area: {:.3}\ntotal length ref: {:.3}\ntotal length test: {:.3}\nH_d: {:.3}",
            self.area_sum, self.len_ref, self.len_test, self.h_d
        );
        out
    }
}

/// Superlevel-set symmetric-difference areas for every level, by bilinear
/// sub-sampling of each cell on an `AREA_SUBSAMPLES²` lattice.
fn symmetric_difference_areas(a: &Raster, b: &Raster, levels: &[f64]) -> Vec<f64> {
    let n = AREA_SUBSAMPLES;
    let offsets: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    let sample_area = a.cellsize * a.cellsize / (n * n) as f64;
    let counts = (0..a.nrows - 1)
        .into_par_iter()
        .map(|row| {
            let mut counts = vec![0usize; levels.len()];
            let mut va = Vec::with_capacity(n * n);
            let mut vb = Vec::with_capacity(n * n);
            for col in 0..a.ncols - 1 {
                let (Some(ca), Some(cb)) = (cell_corners(a, row, col), cell_corners(b, row, col))
                else {
                    continue;
                };
                va.clear();
                vb.clear();
                for &ty in &offsets {
                    for &tx in &offsets {
                        let bil = |c: [f64; 4]| {
                            (1.0 - ty) * ((1.0 - tx) * c[0] + tx * c[1])
                                + ty * ((1.0 - tx) * c[3] + tx * c[2])
                        };
                        va.push(bil(ca));
                        vb.push(bil(cb));
                    }
                }
                for (k, &level) in levels.iter().enumerate() {
                    counts[k] += va
                        .iter()
                        .zip(&vb)
                        .filter(|(&p, &q)| (p >= level) != (q >= level))
                        .count();
                }
            }
            counts
        })
        .reduce(
            || vec![0usize; levels.len()],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    counts.into_iter().map(|c| c as f64 * sample_area).collect()
}

pub fn horizontal_discrepancy(
    reference: &Raster,
    test: &Raster,
    levels: &[f64],
) -> Result<HorizontalReport> {
    reference.same_geometry(test)?;
    if levels.is_empty() {
        return Err(Error::EmptyLevels);
    }
    if reference.nrows < 2 || reference.ncols < 2 {
        return Err(Error::GridMismatch(
            "rasters need at least 2x2 cells".into(),
        ));
    }
    let areas = symmetric_difference_areas(reference, test, levels);
    let terms: Vec<LevelTerm> = levels
        .iter()
        .zip(areas)
        .map(|(&level, area)| LevelTerm {
            level,
            area,
            len_ref: contour_length(reference, level),
            len_test: contour_length(test, level),
        })
        .collect();
    let area_sum = terms.iter().map(|t| t.area).sum();
    let len_ref = terms.iter().map(|t| t.len_ref).sum();
    let len_test = terms.iter().map(|t| t.len_test).sum();
    Ok(HorizontalReport {
        levels: terms,
        area_sum,
        len_ref,
        len_test,
        h_d: discrepancy(area_sum, len_ref, len_test),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ramp(shift: f64) -> Raster {
        // Centres at x = 0..=10, y = 0..=10.
        Raster::from_fn(11, 11, -0.5, -0.5, 1.0, move |x, _| x - shift).unwrap()
    }

    #[test]
    fn vertical_identity_and_offset() {
        let a = ramp(0.0);
        let rep = vertical_accuracy(&a, &a, 3.0).unwrap();
        assert_eq!(
            (rep.mean_abs, rep.sd_abs, rep.max_abs, rep.exceed_count()),
            (0.0, 0.0, 0.0, 0)
        );
        let b = ramp(-1.0);
        let rep = vertical_accuracy(&a, &b, 0.5).unwrap();
        assert!((rep.mean_abs - 1.0).abs() < 1e-15);
        assert!(rep.sd_abs < 1e-15);
        assert_eq!(rep.count, 121);
        assert_eq!(rep.exceed_count(), 121);
    }

    #[test]
    fn vertical_matches_two_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Raster::from_fn(10, 10, 0.0, 0.0, 1.0, |_, _| 0.0).unwrap();
        let mut a = a;
        let mut b = a.clone();
        for v in a.values.iter_mut().chain(b.values.iter_mut()) {
            *v = rng.gen_range(-50.0..50.0);
        }
        let rep = vertical_accuracy(&a, &b, 10.0).unwrap();
        let e: Vec<f64> = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(p, q)| (p - q).abs())
            .collect();
        let mean = e.iter().sum::<f64>() / e.len() as f64;
        let var = e.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / e.len() as f64;
        assert!((rep.mean_abs - mean).abs() < 1e-12);
        assert!((rep.sd_abs - var.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn vertical_skips_nodata_and_checks_geometry() {
        let mut a = ramp(0.0);
        a.nodata = Some(-9999.0);
        a.values[0] = -9999.0;
        let rep = vertical_accuracy(&a, &ramp(0.0), 1.0).unwrap();
        assert_eq!(rep.count, 120);
        let mask = rep.mask_raster(&a, &ramp(0.0));
        assert_eq!(mask.values[0], -9999.0);
        assert_eq!(mask.values[1], 0.0);
        let other = Raster::from_fn(11, 10, -0.5, -0.5, 1.0, |x, _| x).unwrap();
        assert!(matches!(
            vertical_accuracy(&a, &other, 1.0),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn contour_of_constant_and_plane() {
        let c = Raster::from_fn(5, 5, 0.0, 0.0, 1.0, |_, _| 2.0).unwrap();
        assert_eq!(contour_length(&c, 1.0), 0.0);
        assert_eq!(contour_length(&c, 3.0), 0.0);
        assert!((contour_length(&ramp(0.0), 5.0) - 10.0).abs() < 1e-9);
        assert!((contour_length(&ramp(0.0), 4.3) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn diagonal_plane_contour() {
        let r = Raster::from_fn(11, 11, -0.5, -0.5, 1.0, |x, y| x + y).unwrap();
        // x + y = 10 runs corner to corner: length 10·√2.
        assert!((contour_length(&r, 10.0) - 10.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn saddle_resolution() {
        // Corners bl=1, br=0, tr=1, tl=0; level 0.5; centre 0.5 counts as inside.
        let len = cell_contour_length([1.0, 0.0, 1.0, 0.0], 0.5, 1.0);
        // Two cut-off segments around the outside corners, each √2/2.
        assert!((len - 2f64.sqrt()).abs() < 1e-15);
        let len = cell_contour_length([1.0, 0.0, 1.0, 0.0], 0.6, 1.0);
        let leg = |t: f64| t.hypot(t);
        assert!((len - 2.0 * leg(0.4)).abs() < 1e-15);
    }

    #[test]
    fn circle_contour_length() {
        let n = 200;
        let h = 1.0 / n as f64;
        let r = Raster::from_fn(n, n, 0.0, 0.0, h, |x, y| {
            1.0 - ((x - 0.5).powi(2) + (y - 0.5).powi(2))
        })
        .unwrap();
        let radius = 0.3;
        let len = contour_length(&r, 1.0 - radius * radius);
        let want = 2.0 * std::f64::consts::PI * radius;
        assert!((len - want).abs() / want < 0.02);
    }

    #[test]
    fn horizontal_identity_and_shift() {
        let a = ramp(0.0);
        let rep = horizontal_discrepancy(&a, &a, &[5.0]).unwrap();
        assert_eq!((rep.area_sum, rep.h_d), (0.0, 0.0));
        for delta in [0.25, 0.5, 1.0] {
            let rep = horizontal_discrepancy(&a, &ramp(delta), &[5.0]).unwrap();
            assert!((rep.area_sum - 10.0 * delta).abs() < 1e-9);
            assert!((rep.len_ref - 10.0).abs() < 1e-9 && (rep.len_test - 10.0).abs() < 1e-9);
            assert!((rep.h_d - delta).abs() / delta < 0.02);
        }
    }

    fn cone(radius: f64, n: usize) -> Raster {
        let h = 1.0 / n as f64;
        Raster::from_fn(n, n, 0.0, 0.0, h, move |x, y| {
            radius - (x - 0.5).hypot(y - 0.5)
        })
        .unwrap()
    }

    #[test]
    fn nested_circles_recover_radial_offset() {
        let delta = 0.02;
        let rep =
            horizontal_discrepancy(&cone(0.25, 200), &cone(0.25 + delta, 200), &[0.0]).unwrap();
        assert!((rep.h_d - delta).abs() / delta < 0.02, "H_d = {}", rep.h_d);
    }

    #[test]
    fn horizontal_is_symmetric_and_linear_in_shift() {
        let a = cone(0.3, 120);
        let b = Raster::from_fn(120, 120, 0.0, 0.0, 1.0 / 120.0, |x, y| {
            0.3 - (x - 0.47).hypot(y - 0.52)
        })
        .unwrap();
        let levels = [-0.1, 0.0, 0.1];
        let ab = horizontal_discrepancy(&a, &b, &levels).unwrap();
        let ba = horizontal_discrepancy(&b, &a, &levels).unwrap();
        assert_eq!(ab.area_sum, ba.area_sum);
        assert!((ab.h_d - ba.h_d).abs() < 1e-12);

        let reference = ramp(0.0);
        let one = horizontal_discrepancy(&reference, &ramp(0.25), &[3.0, 5.0]).unwrap();
        let two = horizontal_discrepancy(&reference, &ramp(0.5), &[3.0, 5.0]).unwrap();
        assert!((two.h_d / one.h_d - 2.0).abs() < 0.02);
    }

    #[test]
    fn horizontal_errors_and_defaults() {
        let a = ramp(0.0);
        assert_eq!(horizontal_discrepancy(&a, &a, &[]), Err(Error::EmptyLevels));
        let levels = default_levels(&a);
        assert_eq!(levels.len(), 10);
        assert!(levels.iter().all(|&l| l > 0.0 && l < 10.0));
        assert!((levels[0] - 10.0 / 11.0).abs() < 1e-12);
        let csv = horizontal_discrepancy(&a, &ramp(0.5), &levels)
            .unwrap()
            .to_csv();
        assert_eq!(csv.lines().count(), 12);
        assert!(csv.lines().last().unwrap().starts_with("summary,,"));
    }
}
