//! Geo-referenced rasters, ESRI ASCII grid I/O, decimation and resampling.
//!
//! Values are cell-centred: the interpolation node of the cell in row
//! `row` (0 = top) and column `col` sits at
//! `(xll + (col + ½)·cellsize, yll + (nrows - row - ½)·cellsize)`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::shepard::{build_model, EvalMode};
use crate::{CartesianGrid, GridAxis, ShepardModel};

#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub ncols: usize,
    pub nrows: usize,
    /// Lower-left corner of the lower-left cell.
    pub xll: f64,
    pub yll: f64,
    pub cellsize: f64,
    pub nodata: Option<f64>,
    /// Row-major, north-up (row 0 is the top row).
    pub values: Vec<f64>,
}

impl Raster {
    pub fn new(
        ncols: usize,
        nrows: usize,
        xll: f64,
        yll: f64,
        cellsize: f64,
        nodata: Option<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if cellsize <= 0.0 || !cellsize.is_finite() {
            return Err(Error::InvalidCellSize(cellsize));
        }
        if values.len() != ncols * nrows || ncols == 0 || nrows == 0 {
            return Err(Error::ShapeMismatch {
                rows: values.len().checked_div(ncols).unwrap_or(0),
                cols: ncols,
                expected_rows: nrows,
                expected_cols: ncols,
            });
        }
        Ok(Self {
            ncols,
            nrows,
            xll,
            yll,
            cellsize,
            nodata,
            values,
        })
    }

    /// Samples `f` at the cell centres of the given geometry.
    pub fn from_fn(
        ncols: usize,
        nrows: usize,
        xll: f64,
        yll: f64,
        cellsize: f64,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(ncols * nrows);
        for row in 0..nrows {
            let y = yll + (nrows - row) as f64 * cellsize - 0.5 * cellsize;
            for col in 0..ncols {
                values.push(f(xll + (col as f64 + 0.5) * cellsize, y));
            }
        }
        Self::new(ncols, nrows, xll, yll, cellsize, None, values)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    pub fn is_nodata(&self, v: f64) -> bool {
        self.nodata.is_some_and(|nd| v == nd)
    }

    pub fn x_center(&self, col: usize) -> f64 {
        self.xll + (col as f64 + 0.5) * self.cellsize
    }

    pub fn y_center(&self, row: usize) -> f64 {
        self.yll + (self.nrows - row) as f64 * self.cellsize - 0.5 * self.cellsize
    }

    /// Cell-centre x coordinates, west to east.
    pub fn x_centers(&self) -> Vec<f64> {
        (0..self.ncols).map(|c| self.x_center(c)).collect()
    }

    /// Cell-centre y coordinates, south to north.
    pub fn y_centers(&self) -> Vec<f64> {
        (0..self.nrows).rev().map(|r| self.y_center(r)).collect()
    }

    pub fn same_geometry(&self, other: &Raster) -> Result<()> {
        if self.ncols != other.ncols || self.nrows != other.nrows {
            return Err(Error::GridMismatch(format!(
                "{}x{} vs {}x{} cells",
                self.ncols, self.nrows, other.ncols, other.nrows
            )));
        }
        let tol = 1e-9 * self.cellsize;
        if (self.cellsize - other.cellsize).abs() > tol
            || (self.xll - other.xll).abs() > tol
            || (self.yll - other.yll).abs() > tol
        {
            return Err(Error::GridMismatch(format!(
                "origin/cellsize ({}, {}, {}) vs ({}, {}, {})",
                self.xll, self.yll, self.cellsize, other.xll, other.yll, other.cellsize
            )));
        }
        Ok(())
    }

    /// Converts to a node grid (y ascending). Fails on any nodata cell.
    pub fn to_grid(&self) -> Result<CartesianGrid> {
        if let Some(i) = self
            .values
            .iter()
            .position(|&v| self.is_nodata(v) || !v.is_finite())
        {
            return Err(Error::NodataPresent {
                row: i / self.ncols + 1,
                col: i % self.ncols + 1,
            });
        }
        let z: Vec<f64> = self
            .values
            .chunks(self.ncols)
            .rev()
            .flatten()
            .copied()
            .collect();
        CartesianGrid::from_row_major(
            GridAxis::new(self.x_centers())?,
            GridAxis::new(self.y_centers())?,
            z,
        )
    }

    pub fn min_max(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .filter(|&&v| !self.is_nodata(v))
            .fold(None, |acc, &v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads an ESRI ASCII grid. Header keys are case-insensitive; a
/// `xllcenter`/`yllcenter` origin is converted to the corner convention.
pub fn read_asc<R: BufRead>(reader: R) -> Result<Raster> {
    let mut ncols = None;
    let mut nrows = None;
    let mut xll: Option<(f64, bool)> = None;
    let mut yll: Option<(f64, bool)> = None;
    let mut cellsize = None;
    let mut nodata = None;
    let mut values: Vec<f64> = Vec::new();
    let mut data_rows = 0usize;

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let first = trimmed.split_whitespace().next().unwrap_or_default();
        let is_header = data_rows == 0 && first.starts_with(|c: char| c.is_ascii_alphabetic());
        if is_header {
            let mut it = trimmed.split_whitespace();
            let key = it.next().unwrap_or_default().to_ascii_lowercase();
            let val = it.next().ok_or_else(|| {
                parse_err(lineno, format!("missing value for header key '{key}'"))
            })?;
            if it.next().is_some() {
                return Err(parse_err(
                    lineno,
                    format!("trailing tokens after header key '{key}'"),
                ));
            }
            let num = || -> Result<f64> {
                val.parse::<f64>()
                    .map_err(|_| parse_err(lineno, format!("bad number '{val}' for '{key}'")))
            };
            let count = || -> Result<usize> {
                val.parse::<usize>()
                    .map_err(|_| parse_err(lineno, format!("bad count '{val}' for '{key}'")))
            };
            match key.as_str() {
                "ncols" => ncols = Some(count()?),
                "nrows" => nrows = Some(count()?),
                "xllcorner" => xll = Some((num()?, false)),
                "xllcenter" => xll = Some((num()?, true)),
                "yllcorner" => yll = Some((num()?, false)),
                "yllcenter" => yll = Some((num()?, true)),
                "cellsize" => cellsize = Some(num()?),
                "nodata_value" => nodata = Some(num()?),
                _ => return Err(parse_err(lineno, format!("unknown header key '{key}'"))),
            }
            continue;
        }

        let ncols = ncols.ok_or_else(|| parse_err(lineno, "data before 'ncols' header"))?;
        let nrows = nrows.ok_or_else(|| parse_err(lineno, "data before 'nrows' header"))?;
        if data_rows == nrows {
            return Err(parse_err(lineno, format!("more than {nrows} data rows")));
        }
        let before = values.len();
        for tok in trimmed.split_whitespace() {
            let v = tok
                .parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("bad value '{tok}'")))?;
            values.push(v);
        }
        let got = values.len() - before;
        if got != ncols {
            return Err(parse_err(
                lineno,
                format!("expected {ncols} values, found {got}"),
            ));
        }
        data_rows += 1;
    }

    let missing = |k: &str| parse_err(0, format!("missing header key '{k}'"));
    let ncols = ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = nrows.ok_or_else(|| missing("nrows"))?;
    let (x0, xc) = xll.ok_or_else(|| missing("xllcorner"))?;
    let (y0, yc) = yll.ok_or_else(|| missing("yllcorner"))?;
    let cellsize = cellsize.ok_or_else(|| missing("cellsize"))?;
    if data_rows != nrows {
        return Err(parse_err(
            0,
            format!("expected {nrows} data rows, found {data_rows}"),
        ));
    }
    if cellsize <= 0.0 || !cellsize.is_finite() {
        return Err(Error::InvalidCellSize(cellsize));
    }
    let xll = if xc { x0 - 0.5 * cellsize } else { x0 };
    let yll = if yc { y0 - 0.5 * cellsize } else { y0 };
    Raster::new(ncols, nrows, xll, yll, cellsize, nodata, values)
}

pub fn read_asc_file(path: impl AsRef<Path>) -> Result<Raster> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_asc(BufReader::new(f))
}

/// Writes the raster with a corner-origin header and 17 significant digits
/// per value.
pub fn write_asc<W: Write>(r: &Raster, sink: W) -> Result<()> {
    let mut w = BufWriter::new(sink);
    writeln!(w, "ncols {}", r.ncols)?;
    writeln!(w, "nrows {}", r.nrows)?;
    writeln!(w, "xllcorner {:?}", r.xll)?;
    writeln!(w, "yllcorner {:?}", r.yll)?;
    writeln!(w, "cellsize {:?}", r.cellsize)?;
    if let Some(nd) = r.nodata {
        writeln!(w, "NODATA_value {nd:?}")?;
    }
    for row in r.values.chunks(r.ncols) {
        let mut first = true;
        for v in row {
            if !first {
                w.write_all(b" ")?;
            }
            first = false;
            write!(w, "{v:.16e}")?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_asc_file(r: &Raster, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_asc(r, f)
}

/// Keeps every `factor`-th node in each direction, starting from the
/// lower-left cell. Retained values are copied, not averaged.
pub fn decimate(r: &Raster, factor: usize) -> Result<Raster> {
    assert!(factor >= 1, "decimation factor must be >= 1");
    let ncols = (r.ncols - 1) / factor + 1;
    let nrows = (r.nrows - 1) / factor + 1;
    if ncols < 2 || nrows < 2 {
        return Err(Error::EmptyResult {
            cols: ncols,
            rows: nrows,
        });
    }
    let bottom = r.nrows - 1;
    let top = bottom - (nrows - 1) * factor;
    let mut values = Vec::with_capacity(ncols * nrows);
    for i in 0..nrows {
        let row = top + i * factor;
        values.extend((0..ncols).map(|j| r.get(row, j * factor)));
    }
    let shift = 0.5 * r.cellsize * (1.0 - factor as f64);
    Raster::new(
        ncols,
        nrows,
        r.xll + shift,
        r.yll + shift,
        r.cellsize * factor as f64,
        r.nodata,
        values,
    )
}

/// Removes border rows and columns made entirely of nodata.
pub fn crop_nodata_collar(r: &Raster) -> Raster {
    let row_empty = |row: usize| (0..r.ncols).all(|c| r.is_nodata(r.get(row, c)));
    let col_empty =
        |col: usize, r0: usize, r1: usize| (r0..r1).all(|row| r.is_nodata(r.get(row, col)));
    let mut r0 = 0;
    let mut r1 = r.nrows;
    while r0 < r1 && row_empty(r0) {
        r0 += 1;
    }
    while r1 > r0 && row_empty(r1 - 1) {
        r1 -= 1;
    }
    let mut c0 = 0;
    let mut c1 = r.ncols;
    while c0 < c1 && col_empty(c0, r0, r1) {
        c0 += 1;
    }
    while c1 > c0 && col_empty(c1 - 1, r0, r1) {
        c1 -= 1;
    }
    if (r0, r1, c0, c1) == (0, r.nrows, 0, r.ncols) {
        return r.clone();
    }
    warn!(
        "cropping nodata collar: rows {}..{} and columns {}..{} of {}x{} kept",
        r0, r1, c0, c1, r.ncols, r.nrows
    );
    let values = (r0..r1)
        .flat_map(|row| (c0..c1).map(move |c| (row, c)))
        .map(|(row, c)| r.get(row, c))
        .collect();
    Raster {
        ncols: c1 - c0,
        nrows: r1 - r0,
        xll: r.xll + c0 as f64 * r.cellsize,
        yll: r.yll + (r.nrows - r1) as f64 * r.cellsize,
        cellsize: r.cellsize,
        nodata: r.nodata,
        values,
    }
}

/// Cell-centre coordinates of a target grid with spacing `step`, starting
/// at the source's first centre and not extending past its last one.
fn target_axis(first: f64, last: f64, step: f64) -> Vec<f64> {
    let count = ((last - first) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| first + i as f64 * step).collect()
}

fn target_geometry(src: &Raster, target_cellsize: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if target_cellsize <= 0.0 || !target_cellsize.is_finite() {
        return Err(Error::InvalidCellSize(target_cellsize));
    }
    let xs = src.x_centers();
    let ys = src.y_centers();
    Ok((
        target_axis(xs[0], xs[xs.len() - 1], target_cellsize),
        target_axis(ys[0], ys[ys.len() - 1], target_cellsize),
    ))
}

/// Assembles a north-up raster from rows evaluated with ascending y.
fn assemble(
    xs: &[f64],
    ys: &[f64],
    cellsize: f64,
    rows_south_up: Vec<Vec<f64>>,
    nodata: Option<f64>,
) -> Result<Raster> {
    let values: Vec<f64> = rows_south_up.into_iter().rev().flatten().collect();
    Raster::new(
        xs.len(),
        ys.len(),
        xs[0] - 0.5 * cellsize,
        ys[0] - 0.5 * cellsize,
        cellsize,
        nodata,
        values,
    )
}

/// Builds the Shepard model of a raster after cropping any nodata collar.
pub fn raster_model(
    r: &Raster,
    rdeg: usize,
    sdeg: usize,
    u: f64,
) -> Result<(Raster, ShepardModel)> {
    let cropped = crop_nodata_collar(r);
    let grid = cropped.to_grid()?;
    let model = build_model(&grid, rdeg, sdeg, u)?;
    Ok((cropped, model))
}

/// Resamples with the multinode Shepard interpolant onto a grid of spacing
/// `target_cellsize` aligned to the source's lower-left cell centre.
pub fn resample(
    r: &Raster,
    target_cellsize: f64,
    rdeg: usize,
    sdeg: usize,
    u: f64,
) -> Result<Raster> {
    resample_with_mode(r, target_cellsize, rdeg, sdeg, u, EvalMode::Exact)
}

pub fn resample_with_mode(
    r: &Raster,
    target_cellsize: f64,
    rdeg: usize,
    sdeg: usize,
    u: f64,
    mode: EvalMode,
) -> Result<Raster> {
    let (cropped, model) = raster_model(r, rdeg, sdeg, u)?;
    resample_model(&cropped, &model.with_mode(mode), target_cellsize)
}

/// Evaluates an already built model of `src` on the target grid.
pub fn resample_model(src: &Raster, model: &ShepardModel, target_cellsize: f64) -> Result<Raster> {
    let (xs, ys) = target_geometry(src, target_cellsize)?;
    let rows = model.eval_grid(&xs, &ys);
    assemble(&xs, &ys, target_cellsize, rows, src.nodata)
}

/// Plain bilinear resampling onto the same target grid as [`resample`].
pub fn resample_bilinear(r: &Raster, target_cellsize: f64) -> Result<Raster> {
    let src = crop_nodata_collar(r);
    let grid = src.to_grid()?;
    let (xs, ys) = target_geometry(&src, target_cellsize)?;
    let xa = grid.x_axis();
    let ya = grid.y_axis();
    let m = grid.m();
    let z = grid.z_row_major();
    let locate = |axis: &GridAxis, v: f64| {
        let i = axis.lower_index(v).min(axis.len() - 2);
        let c = axis.coords();
        (i, (v - c[i]) / (c[i + 1] - c[i]))
    };
    let rows = ys
        .iter()
        .map(|&y| {
            let (j, ty) = locate(ya, y);
            xs.iter()
                .map(|&x| {
                    let (i, tx) = locate(xa, x);
                    let z00 = z[j * m + i];
                    let z10 = z[j * m + i + 1];
                    let z01 = z[(j + 1) * m + i];
                    let z11 = z[(j + 1) * m + i + 1];
                    (1.0 - ty) * ((1.0 - tx) * z00 + tx * z10) + ty * ((1.0 - tx) * z01 + tx * z11)
                })
                .collect()
        })
        .collect();
    assemble(&xs, &ys, target_cellsize, rows, src.nodata)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n3 4\n1 2\n";

    fn roundtrip(r: &Raster) -> Raster {
        let mut buf = Vec::new();
        write_asc(r, &mut buf).unwrap();
        read_asc(buf.as_slice()).unwrap()
    }

    #[test]
    fn reads_fixture() {
        let r = read_asc(FIXTURE.as_bytes()).unwrap();
        assert_eq!((r.ncols, r.nrows, r.cellsize), (2, 2, 1.0));
        assert_eq!(r.x_centers(), vec![0.5, 1.5]);
        assert_eq!(r.y_centers(), vec![0.5, 1.5]);
        let g = r.to_grid().unwrap();
        assert_eq!(g.z(1, 1), 1.0);
        assert_eq!(g.z(2, 2), 4.0);
        assert_eq!(roundtrip(&r), r);
    }

    #[test]
    fn center_origin_is_normalized() {
        let src = "NCOLS 3\nNROWS 1\nXLLCENTER 10\nYLLCENTER 20\nCELLSIZE 2\nnodata_value -9999\n1 2 -9999\n";
        let r = read_asc(src.as_bytes()).unwrap();
        assert_eq!((r.xll, r.yll), (9.0, 19.0));
        assert_eq!(r.x_center(0), 10.0);
        assert_eq!(r.y_center(0), 20.0);
        assert_eq!(r.nodata, Some(-9999.0));
        assert_eq!(roundtrip(&r), r);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_row = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n3 4\n1\n";
        assert_eq!(
            read_asc(bad_row.as_bytes()),
            Err(Error::Parse {
                line: 7,
                msg: "expected 2 values, found 1".into()
            })
        );
        let bad_tok = "ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n3 x\n";
        assert!(matches!(
            read_asc(bad_tok.as_bytes()),
            Err(Error::Parse { line: 6, .. })
        ));
        let short = "ncols 2\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\n3 4\n";
        assert!(matches!(
            read_asc(short.as_bytes()),
            Err(Error::Parse { .. })
        ));
        let no_cs = "ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\n3\n";
        assert!(matches!(
            read_asc(no_cs.as_bytes()),
            Err(Error::Parse { .. })
        ));
        let key = "ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nfoo 2\n3\n";
        assert!(matches!(
            read_asc(key.as_bytes()),
            Err(Error::Parse { line: 6, .. })
        ));
    }

    #[test]
    fn one_by_one_roundtrip() {
        let r = Raster::new(
            1,
            1,
            -3.25,
            7.0,
            0.1,
            Some(-9999.0),
            vec![std::f64::consts::PI],
        )
        .unwrap();
        assert_eq!(roundtrip(&r), r);
    }

    #[test]
    fn decimation() {
        let r = Raster::from_fn(9, 9, 0.0, 0.0, 2.0, |x, y| x * 100.0 + y).unwrap();
        assert_eq!(decimate(&r, 1).unwrap(), r);
        let d = decimate(&r, 2).unwrap();
        assert_eq!((d.ncols, d.nrows, d.cellsize), (5, 5, 4.0));
        for row in 0..5 {
            for col in 0..5 {
                assert_eq!(d.get(row, col), r.get(2 * row, 2 * col));
                assert_eq!(d.x_center(col), r.x_center(2 * col));
                assert_eq!(d.y_center(row), r.y_center(2 * row));
            }
        }
        // Non-divisible: anchored at the lower-left, trailing north/east dropped.
        let r = Raster::from_fn(8, 6, 0.0, 0.0, 1.0, |x, y| x + 10.0 * y).unwrap();
        let d = decimate(&r, 3).unwrap();
        assert_eq!((d.ncols, d.nrows), (3, 2));
        assert_eq!(d.x_center(0), 0.5);
        assert_eq!(d.y_center(1), 0.5);
        assert_eq!(d.get(1, 2), r.get(5, 6));
        assert_eq!(d.get(0, 0), r.get(2, 0));
        assert!(matches!(decimate(&r, 6), Err(Error::EmptyResult { .. })));
    }

    #[test]
    fn paper_resolutions() {
        let r = Raster::from_fn(33, 33, 0.0, 0.0, 2.0, |x, y| x - y).unwrap();
        assert_eq!(decimate(&r, 4).unwrap().cellsize, 8.0);
        assert_eq!(decimate(&r, 8).unwrap().cellsize, 16.0);
    }

    #[test]
    fn collar_crop_and_nodata() {
        let nd = -9999.0;
        let mut v = vec![nd; 5 * 4];
        for row in 1..3 {
            for col in 1..4 {
                v[row * 5 + col] = (row * 10 + col) as f64;
            }
        }
        let r = Raster::new(5, 4, 0.0, 0.0, 1.0, Some(nd), v).unwrap();
        let c = crop_nodata_collar(&r);
        assert_eq!((c.ncols, c.nrows, c.xll, c.yll), (3, 2, 1.0, 1.0));
        assert_eq!(c.get(0, 0), 11.0);
        assert_eq!(c.x_center(0), r.x_center(1));
        assert_eq!(c.y_center(0), r.y_center(1));

        let mut hole = c.clone();
        hole.values[1] = nd;
        assert!(matches!(
            hole.to_grid(),
            Err(Error::NodataPresent { row: 1, col: 2 })
        ));
        assert!(matches!(
            resample(&hole, 0.5, 1, 1, 2.0),
            Err(Error::NodataPresent { .. })
        ));
    }

    #[test]
    fn resample_at_source_resolution_is_identity() {
        let r = Raster::from_fn(9, 7, 100.0, 200.0, 2.0, |x, y| (x / 7.0).sin() * y).unwrap();
        let out = resample(&r, 2.0, 2, 2, 4.0).unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn resample_reproduces_bilinear_polynomial() {
        let q = |x: f64, y: f64| 1.0 + x + y + x * y;
        let r = Raster::from_fn(7, 7, 0.0, 0.0, 0.5, q).unwrap();
        for cs in [0.5, 0.25, 0.2, 0.35] {
            let out = resample(&r, cs, 2, 2, 4.0).unwrap();
            assert!(
                (out.x_center(0) - r.x_center(0)).abs() < 1e-12
                    && (out.y_center(out.nrows - 1) - r.y_center(r.nrows - 1)).abs() < 1e-12
            );
            for row in 0..out.nrows {
                for col in 0..out.ncols {
                    let want = q(out.x_center(col), out.y_center(row));
                    assert!((out.get(row, col) - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn bilinear_baseline() {
        let q = |x: f64, y: f64| 2.0 - x + 3.0 * y + 0.5 * x * y;
        let r = Raster::from_fn(6, 5, 0.0, 0.0, 1.0, q).unwrap();
        let out = resample_bilinear(&r, 0.25).unwrap();
        assert_eq!((out.ncols, out.nrows), (21, 17));
        for row in 0..out.nrows {
            for col in 0..out.ncols {
                let want = q(out.x_center(col), out.y_center(row));
                assert!((out.get(row, col) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn geometry_checks() {
        let a = Raster::from_fn(3, 3, 0.0, 0.0, 1.0, |x, _| x).unwrap();
        let b = Raster::from_fn(3, 3, 0.5, 0.0, 1.0, |x, _| x).unwrap();
        assert!(a.same_geometry(&a.clone()).is_ok());
        assert!(matches!(a.same_geometry(&b), Err(Error::GridMismatch(_))));
        assert!(matches!(
            Raster::new(1, 1, 0.0, 0.0, 0.0, None, vec![1.0]),
            Err(Error::InvalidCellSize(_))
        ));
    }
}
