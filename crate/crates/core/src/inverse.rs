//! Recovering a curve from its signatures alone.
//!
//! A four-point alternating sum of ranks below the top-right corner of a small
//! square is 0 when the curve misses the square and 1 when a single arc runs
//! through it with one coordinate rising and the other falling. Sweeping that
//! detector over a raster, in all four reflected frames, yields the image.

use crate::curve::{reflect, Orientation, Reflection, SampledCurve};
use crate::error::{CurveSigError, Result};
use crate::geometry::{line_angle, project_onto_segment, Point};
use crate::persistence::rank_h0;
use rayon::prelude::*;
use serde::Serialize;

/// Query access to the persistent Betti numbers of `s ∘ f`.
pub trait RankOracle: Sync {
    fn rank(&self, s: Reflection, u: Point, v: Point) -> Result<usize>;
}

impl<F> RankOracle for F
where
    F: Fn(Reflection, Point, Point) -> Result<usize> + Sync,
{
    fn rank(&self, s: Reflection, u: Point, v: Point) -> Result<usize> {
        self(s, u, v)
    }
}

/// Oracle answering from a known curve via [`rank_h0`].
#[derive(Debug, Clone)]
pub struct CurveOracle {
    frames: [SampledCurve; 4],
}

impl CurveOracle {
    pub fn new(curve: &SampledCurve) -> Self {
        Self {
            frames: Reflection::ALL.map(|s| reflect(curve, s)),
        }
    }
}

impl RankOracle for CurveOracle {
    fn rank(&self, s: Reflection, u: Point, v: Point) -> Result<usize> {
        let idx = Reflection::ALL.iter().position(|&r| r == s).unwrap();
        rank_h0(&self.frames[idx], u, v)
    }
}

/// Axis-aligned square cell with probe points at its thirds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRectangle {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
}

impl ProbeRectangle {
    pub fn new(x0: f64, y0: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !x0.is_finite() || !y0.is_finite() || !h.is_finite() {
            return Err(CurveSigError::InvalidQuery(format!(
                "bad probe cell ({x0}, {y0}, {h})"
            )));
        }
        Ok(Self { x0, y0, h })
    }

    fn at(&self, fx: f64, fy: f64) -> Point {
        Point::new(self.x0 + fx * self.h, self.y0 + fy * self.h)
    }

    pub fn a(&self) -> Point {
        self.at(1.0 / 3.0, 2.0 / 3.0)
    }
    pub fn b(&self) -> Point {
        self.at(2.0 / 3.0, 2.0 / 3.0)
    }
    pub fn c(&self) -> Point {
        self.at(1.0 / 3.0, 1.0 / 3.0)
    }
    pub fn d(&self) -> Point {
        self.at(2.0 / 3.0, 1.0 / 3.0)
    }
    /// Top-right corner.
    pub fn v(&self) -> Point {
        self.at(1.0, 1.0)
    }

    pub fn min(&self) -> Point {
        Point::new(self.x0, self.y0)
    }

    pub fn max(&self) -> Point {
        self.v()
    }

    pub fn center(&self) -> Point {
        self.at(0.5, 0.5)
    }

    /// The same square seen in the frame of `s ∘ f`.
    pub fn reflected(&self, s: Reflection) -> ProbeRectangle {
        let p = s.apply(self.min());
        let q = s.apply(self.max());
        ProbeRectangle {
            x0: p.x.min(q.x),
            y0: p.y.min(q.y),
            h: self.h,
        }
    }

    pub fn shifted(&self, dx: f64, dy: f64) -> ProbeRectangle {
        ProbeRectangle {
            x0: self.x0 + dx,
            y0: self.y0 + dy,
            h: self.h,
        }
    }
}

/// `rk(b,v) - rk(d,v) - rk(a,v) + rk(c,v)` for the curve seen through `s`.
pub fn alternating_sum(
    oracle: &dyn RankOracle,
    s: Reflection,
    rect: &ProbeRectangle,
) -> Result<i64> {
    let v = rect.v();
    let q = |p: Point| oracle.rank(s, p, v).map(|r| r as i64);
    Ok(q(rect.b())? - q(rect.d())? - q(rect.a())? + q(rect.c())?)
}

/// Whether some reflected frame sees a nonzero alternating sum on `rect`.
pub fn detect(oracle: &dyn RankOracle, rect: &ProbeRectangle) -> Result<bool> {
    for s in Reflection::ALL {
        if alternating_sum(oracle, s, &rect.reflected(s))? != 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundingBox {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl BoundingBox {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Self> {
        if !(xmin < xmax && ymin < ymax) {
            return Err(CurveSigError::InvalidQuery(format!(
                "empty bounding box [{xmin}, {xmax}] x [{ymin}, {ymax}]"
            )));
        }
        Ok(Self {
            xmin,
            ymin,
            xmax,
            ymax,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyGrid {
    pub bbox: BoundingBox,
    pub cell: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major from the bottom row: index `j * nx + i`.
    #[serde(skip)]
    pub cells: Vec<bool>,
    /// `(i, j)` of cells found only by the half-offset fallback.
    pub flagged_axis_cells: Vec<(usize, usize)>,
}

impl OccupancyGrid {
    pub fn occupied(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.nx + i]
    }

    pub fn rect(&self, i: usize, j: usize) -> ProbeRectangle {
        ProbeRectangle {
            x0: self.bbox.xmin + i as f64 * self.cell,
            y0: self.bbox.ymin + j as f64 * self.cell,
            h: self.cell,
        }
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        self.rect(i, j).center()
    }

    pub fn occupied_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny)
            .flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
            .filter(|&(i, j)| self.occupied(i, j))
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// Marks every cell of the raster whose probe square is detected in some frame.
///
/// Cells missed in all four frames are re-probed on the four squares offset by
/// half a cell diagonally; hits there are marked and listed as flagged, since
/// this is where axis-parallel tangents escape the detector.
pub fn reconstruct_image(
    oracle: &dyn RankOracle,
    bbox: BoundingBox,
    cell: f64,
) -> Result<OccupancyGrid> {
    if !(cell > 0.0) || !cell.is_finite() {
        return Err(CurveSigError::InvalidQuery(format!(
            "cell size must be positive, got {cell}"
        )));
    }
    let nx = ((bbox.xmax - bbox.xmin) / cell).ceil() as usize;
    let ny = ((bbox.ymax - bbox.ymin) / cell).ceil() as usize;
    let mut grid = OccupancyGrid {
        bbox,
        cell,
        nx,
        ny,
        cells: vec![false; nx * ny],
        flagged_axis_cells: Vec::new(),
    };

    let half = 0.5 * cell;
    let results: Vec<Result<(bool, bool)>> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let rect = grid.rect(k % nx, k / nx);
            if detect(oracle, &rect)? {
                return Ok((true, false));
            }
            for (dx, dy) in [(-half, 0.0), (half, 0.0), (0.0, -half), (0.0, half)] {
                if detect(oracle, &rect.shifted(dx, dy))? {
                    return Ok((true, true));
                }
            }
            Ok((false, false))
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        let (occupied, flagged) = r?;
        grid.cells[k] = occupied;
        if flagged {
            grid.flagged_axis_cells.push((k % nx, k / nx));
        }
    }
    Ok(grid)
}

/// Sampled circle map `h` with `g(h(θ_i)) ≈ f(θ_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reparameterization {
    /// For each vertex of `f`, a fractional vertex index of `g` in `[0, N_g)`.
    pub params: Vec<f64>,
    pub orientation: i64,
    /// `max_i |f(θ_i) - g(h(θ_i))|`.
    pub residual: f64,
}

impl Reparameterization {
    /// Returns `(shift, orientation)` with `g = reparameterize(f, shift, orientation)`
    /// when `h` maps vertices onto vertices.
    pub fn index_shift(&self) -> Option<(i64, Orientation)> {
        let n = self.params.len() as i64;
        let o = Orientation::from_sign(self.orientation)?;
        let idx: Vec<i64> = self
            .params
            .iter()
            .map(|&p| ((p.round() - p).abs() < 1e-9).then_some(p.round() as i64))
            .collect::<Option<_>>()?;
        let sign = o.sign();
        let shift = (-sign * idx[0]).rem_euclid(n);
        let consistent = idx
            .iter()
            .enumerate()
            .all(|(i, &j)| j.rem_euclid(n) == (sign * (i as i64 - shift)).rem_euclid(n));
        consistent.then_some((shift, o))
    }
}

/// Maps each vertex of `f` to the matching point of `g`'s polyline.
///
/// Where several branches of `g` pass within `tol`, the one whose tangent line
/// is closest to `f`'s wins. The assembled map must be a cyclic monotone
/// bijection of degree ±1.
pub fn build_reparameterization(
    f: &SampledCurve,
    g: &SampledCurve,
    tol: f64,
) -> Result<Reparameterization> {
    if !(tol > 0.0) {
        return Err(CurveSigError::InvalidQuery(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    f.check_edges()?;
    g.check_edges()?;
    let ng = g.len();
    let mut params = Vec::with_capacity(f.len());
    for (i, &p) in f.vertices().iter().enumerate() {
        let projections: Vec<(f64, f64)> = g
            .edges()
            .map(|(a, b)| project_onto_segment(p, a, b))
            .collect();
        let nearest = projections
            .iter()
            .map(|x| x.1)
            .fold(f64::INFINITY, f64::min);
        if nearest > tol {
            return Err(CurveSigError::NoCorrespondence {
                vertex: i,
                distance: nearest,
            });
        }
        // Group edges within tol into branches of consecutive edge indices.
        let close: Vec<usize> = (0..ng).filter(|&j| projections[j].1 <= tol).collect();
        let mut branches: Vec<Vec<usize>> = Vec::new();
        for &j in &close {
            match branches.last_mut() {
                Some(br) if *br.last().unwrap() + 1 == j => br.push(j),
                _ => branches.push(vec![j]),
            }
        }
        if branches.len() > 1 && close.contains(&0) && close.contains(&(ng - 1)) {
            let first = branches.remove(0);
            branches.last_mut().unwrap().extend(first);
        }
        let reps: Vec<f64> = branches
            .iter()
            .map(|br| {
                let &j = br
                    .iter()
                    .min_by(|&&a, &&b| projections[a].1.total_cmp(&projections[b].1))
                    .unwrap();
                (j as f64 + projections[j].0).rem_euclid(ng as f64)
            })
            .collect();
        let chosen = if reps.len() == 1 {
            reps[0]
        } else {
            let tf = f.vertex_tangent(i);
            *reps
                .iter()
                .min_by(|&&a, &&b| {
                    line_angle(tf, tangent_at(g, a)).total_cmp(&line_angle(tf, tangent_at(g, b)))
                })
                .unwrap()
        };
        params.push(chosen);
    }

    let n = ng as f64;
    let steps: Vec<f64> = (0..params.len())
        .map(|i| {
            let d = params[(i + 1) % params.len()] - params[i];
            d - n * (d / n).round()
        })
        .collect();
    let total: f64 = steps.iter().sum();
    let orientation = if (total - n).abs() < 1e-6 {
        1
    } else if (total + n).abs() < 1e-6 {
        -1
    } else {
        return Err(CurveSigError::NotMonotone(format!(
            "winding {:.3} turns",
            total / n
        )));
    };
    if let Some(k) = steps.iter().position(|&d| d * orientation as f64 <= 0.0) {
        return Err(CurveSigError::NotMonotone(format!(
            "map folds back at vertex {k}"
        )));
    }
    let residual = params
        .iter()
        .zip(f.vertices())
        .map(|(&q, &p)| p.dist(g.point_at(q)))
        .fold(0.0, f64::max);
    Ok(Reparameterization {
        params,
        orientation,
        residual,
    })
}

fn tangent_at(g: &SampledCurve, param: f64) -> Point {
    let r = param.round();
    if (param - r).abs() < 1e-12 {
        g.vertex_tangent(r as usize % g.len())
    } else {
        let (a, b) = g.edge(param.floor() as usize % g.len());
        b - a
    }
}
