//! Persistent Betti numbers in degree 0.
//!
//! [`rank_h0`] is the direct two-parameter oracle: it clips every edge of the
//! polyline against the closed quadrant below a point and counts arcs. The
//! one-parameter side ([`circle_diagram`], [`diagram_rank`]) is ordinary
//! sublevel persistence of a function sampled on the cycle graph.

use crate::curve::SampledCurve;
use crate::error::{CurveSigError, Result};
use crate::geometry::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct CornerPoint {
    pub birth: f64,
    pub death: f64,
}

impl CornerPoint {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

impl From<[f64; 2]> for CornerPoint {
    fn from(p: [f64; 2]) -> Self {
        CornerPoint {
            birth: p[0],
            death: p[1],
        }
    }
}

impl From<CornerPoint> for [f64; 2] {
    fn from(p: CornerPoint) -> Self {
        [p.birth, p.death]
    }
}

/// Degree-0 diagram: finite pairs plus births of classes that never die.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    #[serde(rename = "finite")]
    pub finite_pairs: Vec<CornerPoint>,
    pub essential: Vec<f64>,
}

impl PersistenceDiagram {
    /// Finite pairs sorted by (birth, death); useful for multiset comparison.
    pub fn sorted(&self) -> PersistenceDiagram {
        let mut d = self.clone();
        d.finite_pairs.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
        });
        d.essential.sort_by(f64::total_cmp);
        d
    }
}

/// Maximal closed arcs of the parameter circle. An arc may wrap past 2π, in
/// which case its end is smaller than its start.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ArcSet {
    pub arcs: Vec<(f64, f64)>,
    pub full_circle: bool,
}

impl ArcSet {
    pub fn is_empty(&self) -> bool {
        !self.full_circle && self.arcs.is_empty()
    }

    /// Number of connected components.
    pub fn count(&self) -> usize {
        if self.full_circle {
            1
        } else {
            self.arcs.len()
        }
    }
}

/// Feasible parameters `s ∈ [0,1]` with `a + s (b - a) <= c`.
fn coord_interval(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    match (a <= c, b <= c) {
        (true, true) => Some((0.0, 1.0)),
        (false, false) => None,
        (true, false) => Some((0.0, ((c - a) / (b - a)).clamp(0.0, 1.0))),
        (false, true) => Some((((c - a) / (b - a)).clamp(0.0, 1.0), 1.0)),
    }
}

/// Closed sub-interval of edge `a -> b` lying in the quadrant below `v`.
pub(crate) fn edge_interval(a: Point, b: Point, v: Point) -> Option<(f64, f64)> {
    let (xl, xh) = coord_interval(a.x, b.x, v.x)?;
    let (yl, yh) = coord_interval(a.y, b.y, v.y)?;
    let lo = xl.max(yl);
    let hi = xh.min(yh);
    (lo <= hi).then_some((lo, hi))
}

/// One maximal run of consecutive feasible edges, joined through feasible vertices.
#[derive(Debug, Clone, Copy)]
struct Run {
    first_edge: usize,
    start: f64,
    edges: usize,
    end: f64,
}

enum Sublevel {
    Full,
    Runs(Vec<Run>),
}

fn sublevel_runs(curve: &SampledCurve, v: Point) -> Sublevel {
    let n = curve.len();
    let vertex_in: Vec<bool> = curve.vertices().iter().map(|p| p.le(v)).collect();
    let Some(anchor) = vertex_in.iter().position(|&f| !f) else {
        return Sublevel::Full;
    };
    let mut runs = Vec::new();
    let mut open: Option<Run> = None;
    for k in 0..n {
        let e = (anchor + k) % n;
        let (a, b) = curve.edge(e);
        let Some((lo, hi)) = edge_interval(a, b, v) else {
            continue;
        };
        let run = match open.take() {
            // A feasible start vertex means the previous edge ended there.
            Some(mut r) if vertex_in[e] => {
                r.edges += 1;
                r.end = e as f64 + hi;
                r
            }
            prev => {
                if let Some(r) = prev {
                    runs.push(r);
                }
                Run {
                    first_edge: e,
                    start: e as f64 + lo,
                    edges: 1,
                    end: e as f64 + hi,
                }
            }
        };
        if vertex_in[(e + 1) % n] {
            open = Some(run);
        } else {
            runs.push(run);
        }
    }
    runs.extend(open);
    Sublevel::Runs(runs)
}

/// Exact preimage of the closed quadrant below `v` under the polyline.
pub fn sublevel_arcs(curve: &SampledCurve, v: Point) -> ArcSet {
    let step = curve.step();
    match sublevel_runs(curve, v) {
        Sublevel::Full => ArcSet {
            arcs: Vec::new(),
            full_circle: true,
        },
        Sublevel::Runs(runs) => {
            let mut arcs: Vec<(f64, f64)> = runs
                .iter()
                .map(|r| {
                    (
                        (r.start * step).rem_euclid(TAU),
                        (r.end * step).rem_euclid(TAU),
                    )
                })
                .collect();
            arcs.sort_by(|a, b| a.0.total_cmp(&b.0));
            ArcSet {
                arcs,
                full_circle: false,
            }
        }
    }
}

/// Number of components of the sublevel set at `v` that contain a point of
/// the sublevel set at `u`. Requires `u < v` in both coordinates.
pub fn rank_h0(curve: &SampledCurve, u: Point, v: Point) -> Result<usize> {
    if !(u.x < v.x && u.y < v.y) {
        return Err(CurveSigError::InvalidQuery(format!(
            "need u < v componentwise, got u = ({}, {}), v = ({}, {})",
            u.x, u.y, v.x, v.y
        )));
    }
    let n = curve.len();
    let meets_u = |e: usize| {
        let (a, b) = curve.edge(e);
        edge_interval(a, b, u).is_some()
    };
    Ok(match sublevel_runs(curve, v) {
        Sublevel::Full => usize::from((0..n).any(meets_u)),
        Sublevel::Runs(runs) => runs
            .iter()
            .filter(|r| (0..r.edges).any(|k| meets_u((r.first_edge + k) % n)))
            .count(),
    })
}

/// Degree-0 sublevel persistence of `values` on the cycle graph, lower-star
/// filtration, elder rule with ties broken by vertex index.
///
/// Pairs with zero persistence are dropped.
pub fn circle_diagram(values: &[f64]) -> Result<PersistenceDiagram> {
    let n = values.len();
    if n < 3 {
        return Err(CurveSigError::InvalidQuery(format!(
            "need at least 3 values, got {n}"
        )));
    }
    if let Some(i) = values.iter().position(|x| !x.is_finite()) {
        return Err(CurveSigError::InvalidQuery(format!(
            "value {i} is not finite"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    // Union-find keyed by vertex; each root remembers the oldest vertex of its component.
    let mut parent: Vec<usize> = (0..n).collect();
    let oldest: Vec<usize> = (0..n).collect();
    let mut present = vec![false; n];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let elder = |a: usize, b: usize| -> bool {
        // true when a was born before b
        (values[a], a) < (values[b], b)
    };

    let mut diagram = PersistenceDiagram::default();
    for &i in &order {
        present[i] = true;
        for j in [(i + n - 1) % n, (i + 1) % n] {
            if !present[j] {
                continue;
            }
            let ri = find(&mut parent, i);
            let rj = find(&mut parent, j);
            if ri == rj {
                continue;
            }
            let (keep, die) = if elder(oldest[ri], oldest[rj]) {
                (ri, rj)
            } else {
                (rj, ri)
            };
            let birth = values[oldest[die]];
            // i itself is a component of age zero when joining its first neighbor.
            if oldest[die] != i && birth < values[i] {
                diagram.finite_pairs.push(CornerPoint {
                    birth,
                    death: values[i],
                });
            }
            parent[die] = keep;
        }
    }
    let root = find(&mut parent, 0);
    diagram.essential.push(values[oldest[root]]);
    Ok(diagram)
}

/// Number of classes born at or before `s` and still alive after `t`.
pub fn diagram_rank(diagram: &PersistenceDiagram, s: f64, t: f64) -> Result<usize> {
    if s > t {
        return Err(CurveSigError::InvalidQuery(format!(
            "need s <= t, got s = {s}, t = {t}"
        )));
    }
    let finite = diagram
        .finite_pairs
        .iter()
        .filter(|p| p.birth <= s && p.death > t)
        .count();
    let essential = diagram.essential.iter().filter(|&&b| b <= s).count();
    Ok(finite + essential)
}
