//! File formats: curves (JSON, CSV), diagrams and reports (JSON), occupancy
//! rasters (plain PGM plus a JSON sidecar).
//!
//! Every float is written with 17 significant digits.

use crate::curve::SampledCurve;
use crate::error::{CurveSigError, Result};
use crate::geometry::Point;
use crate::inverse::OccupancyGrid;
use crate::persistence::PersistenceDiagram;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};
use std::fmt::Write as _;
use std::io;
use std::path::Path;

/// JSON formatter emitting floats as `{:.16e}`, i.e. 17 significant digits.
#[derive(Debug, Default, Clone, Copy)]
pub struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            CompactFormatter.write_f64(writer, value)
        }
    }
}

/// Serializes to compact JSON with full-precision floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[derive(Serialize, Deserialize)]
struct CurveFile {
    n: usize,
    vertices: Vec<Point>,
}

pub fn curve_to_json(curve: &SampledCurve) -> String {
    to_json(&CurveFile {
        n: curve.len(),
        vertices: curve.vertices().to_vec(),
    })
}

pub fn curve_from_json(text: &str) -> Result<SampledCurve> {
    let file: CurveFile =
        serde_json::from_str(text).map_err(|e| CurveSigError::Parse(format!("curve JSON: {e}")))?;
    if file.n != file.vertices.len() {
        return Err(CurveSigError::Parse(format!(
            "curve JSON: n = {} but {} vertices listed",
            file.n,
            file.vertices.len()
        )));
    }
    SampledCurve::new(file.vertices)
}

pub fn curve_to_csv(curve: &SampledCurve) -> String {
    let mut out = String::from("x,y\n");
    for p in curve.vertices() {
        writeln!(out, "{:.16e},{:.16e}", p.x, p.y).unwrap();
    }
    out
}

/// Reads `x,y` rows; a non-numeric first row is taken as a header.
pub fn curve_from_csv(text: &str) -> Result<SampledCurve> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut vertices = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CurveSigError::Parse(format!("curve CSV: {e}")))?;
        if record.len() != 2 {
            return Err(CurveSigError::Parse(format!(
                "curve CSV row {}: expected 2 columns, found {}",
                row + 1,
                record.len()
            )));
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(xy) => vertices.push(Point::new(xy[0], xy[1])),
            Err(_) if row == 0 => continue,
            Err(e) => {
                return Err(CurveSigError::Parse(format!(
                    "curve CSV row {}: {e}",
                    row + 1
                )))
            }
        }
    }
    SampledCurve::new(vertices)
}

/// Reads a curve, choosing CSV for a `.csv` extension and JSON otherwise.
pub fn read_curve(path: &Path) -> Result<SampledCurve> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CurveSigError::Parse(format!("cannot read {}: {e}", path.display())))?;
    if is_csv(path) {
        curve_from_csv(&text)
    } else {
        curve_from_json(&text)
    }
}

pub fn write_curve(path: &Path, curve: &SampledCurve) -> io::Result<()> {
    let text = if is_csv(path) {
        curve_to_csv(curve)
    } else {
        curve_to_json(curve) + "\n"
    };
    std::fs::write(path, text)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn diagram_to_json(diagram: &PersistenceDiagram) -> String {
    to_json(diagram)
}

pub fn diagram_from_json(text: &str) -> Result<PersistenceDiagram> {
    serde_json::from_str(text).map_err(|e| CurveSigError::Parse(format!("diagram JSON: {e}")))
}

/// Plain PGM, top row first; 255 marks an occupied cell.
pub fn occupancy_to_pgm(grid: &OccupancyGrid) -> String {
    let mut out = format!("P2\n{} {}\n255\n", grid.nx, grid.ny);
    for j in (0..grid.ny).rev() {
        let row: Vec<&str> = (0..grid.nx)
            .map(|i| if grid.occupied(i, j) { "255" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Sidecar for [`occupancy_to_pgm`]: bounding box, cell size, raster size
/// and flagged cells as `[i, j]` with `j` counted from the bottom row.
pub fn occupancy_sidecar(grid: &OccupancyGrid) -> String {
    to_json(grid)
}

/// Parses a PGM written by [`occupancy_to_pgm`] back into row-major cells
/// (bottom row first) with its dimensions.
pub fn occupancy_from_pgm(text: &str) -> Result<(usize, usize, Vec<bool>)> {
    let bad = |m: &str| CurveSigError::Parse(format!("PGM: {m}"));
    let mut tokens = text.split_ascii_whitespace();
    if tokens.next() != Some("P2") {
        return Err(bad("missing P2 magic"));
    }
    let mut num = || -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| bad("truncated"))?
            .parse()
            .map_err(|_| bad("non-integer token"))
    };
    let (nx, ny, _max) = (num()?, num()?, num()?);
    let mut rows = Vec::with_capacity(nx * ny);
    for _ in 0..nx * ny {
        rows.push(num()? != 0);
    }
    let mut cells = vec![false; nx * ny];
    for (r, chunk) in rows.chunks(nx.max(1)).enumerate() {
        let j = ny - 1 - r;
        cells[j * nx..(j + 1) * nx].copy_from_slice(chunk);
    }
    Ok((nx, ny, cells))
}
