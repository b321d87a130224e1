//! Distances between signatures and the equivalence decision built on them.

use crate::curve::{
    check_generic, reflect, GenericityReport, GenericityTolerances, Reflection, SampledCurve,
};
use crate::error::{CurveSigError, Result};
use crate::foliation::{line_diagram, AdmissibleLine, LineGrid};
use crate::persistence::{CornerPoint, PersistenceDiagram};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;

/// Bottleneck distance between two degree-0 diagrams of circle functions.
///
/// Finite points match each other at sup-norm cost or the diagonal at half
/// their persistence; essential births match each other in sorted order and
/// never the diagonal. The optimum is found exactly by binary search over the
/// finite set of candidate costs.
pub fn diagram_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    if d1.essential.len() != d2.essential.len() {
        return Err(CurveSigError::EssentialMismatch {
            left: d1.essential.len(),
            right: d2.essential.len(),
        });
    }
    let mut e1 = d1.essential.clone();
    let mut e2 = d2.essential.clone();
    e1.sort_by(f64::total_cmp);
    e2.sort_by(f64::total_cmp);
    let essential = e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(essential.max(finite_bottleneck(&d1.finite_pairs, &d2.finite_pairs)))
}

fn point_cost(p: &CornerPoint, q: &CornerPoint) -> f64 {
    (p.birth - q.birth).abs().max((p.death - q.death).abs())
}

fn diagonal_cost(p: &CornerPoint) -> f64 {
    0.5 * (p.death - p.birth)
}

fn finite_bottleneck(a: &[CornerPoint], b: &[CornerPoint]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = a.iter().chain(b).map(diagonal_cost).collect();
    for p in a {
        candidates.extend(b.iter().map(|q| point_cost(p, q)));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // Everything to the diagonal always works, so the largest diagonal cost
    // bounds the answer from above.
    let upper = a.iter().chain(b).map(diagonal_cost).fold(0.0, f64::max);
    let mut hi = candidates.partition_point(|&c| c < upper);
    let mut lo = 0;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_exists(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Left side: points of `a`, then diagonal copies of points of `b`.
/// Right side: points of `b`, then diagonal copies of points of `a`.
fn perfect_matching_exists(a: &[CornerPoint], b: &[CornerPoint], c: f64) -> bool {
    let (na, nb) = (a.len(), b.len());
    let size = na + nb;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (i, p) in a.iter().enumerate() {
        adj[i].extend(
            b.iter()
                .enumerate()
                .filter(|(_, q)| point_cost(p, q) <= c)
                .map(|(j, _)| j),
        );
        if diagonal_cost(p) <= c {
            adj[i].push(nb + i);
        }
    }
    for (j, q) in b.iter().enumerate() {
        let l = na + j;
        if diagonal_cost(q) <= c {
            adj[l].push(j);
        }
        adj[l].extend(nb..nb + na);
    }
    hopcroft_karp(&adj, size) == size
}

/// Maximum matching size of a bipartite graph with `n` vertices per side.
fn hopcroft_karp(adj: &[Vec<usize>], n: usize) -> usize {
    const NIL: usize = usize::MAX;
    let mut match_l = vec![NIL; adj.len()];
    let mut match_r = vec![NIL; n];
    let mut dist = vec![0usize; adj.len()];
    let mut matched = 0;
    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for (l, d) in dist.iter_mut().enumerate() {
            if match_l[l] == NIL {
                *d = 0;
                queue.push_back(l);
            } else {
                *d = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let m = match_r[r];
                if m == NIL {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            return matched;
        }
        fn augment(
            l: usize,
            adj: &[Vec<usize>],
            match_l: &mut [usize],
            match_r: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &r in &adj[l] {
                let m = match_r[r];
                if m == usize::MAX
                    || (dist[m] == dist[l] + 1 && augment(m, adj, match_l, match_r, dist))
                {
                    match_l[l] = r;
                    match_r[r] = l;
                    return true;
                }
            }
            dist[l] = usize::MAX;
            false
        }
        for l in 0..adj.len() {
            if match_l[l] == NIL && augment(l, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
}

/// Grid-sampled matching distance together with the line attaining it.
pub fn dmatch_with_witness(
    f: &SampledCurve,
    g: &SampledCurve,
    grid: &LineGrid,
) -> Result<(f64, AdmissibleLine)> {
    let lines = grid.lines();
    let values: Vec<Result<f64>> = lines
        .par_iter()
        .map(|line| diagram_distance(&line_diagram(f, line), &line_diagram(g, line)))
        .collect();
    let mut best = (f64::NEG_INFINITY, lines[0]);
    for (v, line) in values.into_iter().zip(&lines) {
        let v = v?;
        if v > best.0 {
            best = (v, *line);
        }
    }
    Ok(best)
}

/// Maximum over the grid's lines of the diagram distance between the slices of `f` and `g`.
/// A lower bound for the matching distance over all admissible lines.
pub fn dmatch(f: &SampledCurve, g: &SampledCurve, grid: &LineGrid) -> Result<f64> {
    dmatch_with_witness(f, g, grid).map(|(v, _)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionEntry {
    pub reflection: Reflection,
    pub distance: f64,
    pub line: AdmissibleLine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sigma2DistanceTable {
    pub per_reflection: [ReflectionEntry; 4],
    pub max_over_sigma2: f64,
    pub grid: LineGrid,
}

impl Sigma2DistanceTable {
    pub fn get(&self, s: Reflection) -> f64 {
        self.per_reflection
            .iter()
            .find(|e| e.reflection == s)
            .map(|e| e.distance)
            .unwrap()
    }

    pub fn argmax(&self) -> &ReflectionEntry {
        self.per_reflection
            .iter()
            .fold(&self.per_reflection[0], |best, e| {
                if e.distance > best.distance {
                    e
                } else {
                    best
                }
            })
    }

    pub fn report(&self) -> DistanceReport {
        DistanceReport {
            grid: self.grid,
            per_reflection: PerReflection {
                id: self.get(Reflection::Id),
                s1: self.get(Reflection::S1),
                s2: self.get(Reflection::S2),
                s1s2: self.get(Reflection::S1S2),
            },
            max: self.max_over_sigma2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerReflection {
    pub id: f64,
    pub s1: f64,
    pub s2: f64,
    pub s1s2: f64,
}

/// JSON shape of the distance report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub grid: LineGrid,
    pub per_reflection: PerReflection,
    pub max: f64,
}

pub fn sigma2_distance(
    f: &SampledCurve,
    g: &SampledCurve,
    grid: &LineGrid,
) -> Result<Sigma2DistanceTable> {
    let mut entries = Vec::with_capacity(4);
    for s in Reflection::ALL {
        let (distance, line) = dmatch_with_witness(&reflect(f, s), &reflect(g, s), grid)?;
        entries.push(ReflectionEntry {
            reflection: s,
            distance,
            line,
        });
    }
    let per_reflection: [ReflectionEntry; 4] = entries.try_into().expect("four reflections");
    let max_over_sigma2 = per_reflection
        .iter()
        .map(|e| e.distance)
        .fold(0.0, f64::max);
    Ok(Sigma2DistanceTable {
        per_reflection,
        max_over_sigma2,
        grid: *grid,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equivalent,
    Distinguished,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceVerdict {
    pub verdict: Verdict,
    pub witness: Option<ReflectionEntry>,
    pub delta: f64,
    pub max_over_sigma2: f64,
    pub genericity: (GenericityReport, GenericityReport),
}

/// `1e-3` times the bounding-box diagonal of both curves together.
pub fn default_delta(f: &SampledCurve, g: &SampledCurve) -> f64 {
    let (lo, hi) = crate::curve::bbox_of(f.vertices().iter().chain(g.vertices()).copied());
    1e-3 * lo.dist(hi)
}

/// Decides whether `g` reparameterizes `f` at the resolution of `grid`.
///
/// `Distinguished` carries a separating witness and is reliable; `Equivalent`
/// only means no grid line separated the curves by more than `delta`.
/// Non-generic inputs give `Inconclusive`.
pub fn decide_equivalence(
    f: &SampledCurve,
    g: &SampledCurve,
    delta: f64,
    grid: &LineGrid,
) -> Result<EquivalenceVerdict> {
    if !(delta >= 0.0) {
        return Err(CurveSigError::InvalidQuery(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    let generic = |c: &SampledCurve| {
        let tol = GenericityTolerances::default_for(c);
        check_generic(c, tol.tol_speed, tol.tol_angle)
    };
    let genericity = (generic(f)?, generic(g)?);
    let table = sigma2_distance(f, g, grid)?;
    let (verdict, witness) = if !(genericity.0.is_generic && genericity.1.is_generic) {
        (Verdict::Inconclusive, None)
    } else if table.max_over_sigma2 <= delta {
        (Verdict::Equivalent, None)
    } else {
        (Verdict::Distinguished, Some(*table.argmax()))
    };
    Ok(EquivalenceVerdict {
        verdict,
        witness,
        delta,
        max_over_sigma2: table.max_over_sigma2,
        genericity,
    })
}

/// Sup-norm bound on `g∘h - f` when generic stand-ins `f'`, `g'` share all signatures.
pub fn near_generic_bound(
    f: &SampledCurve,
    f_generic: &SampledCurve,
    g: &SampledCurve,
    g_generic: &SampledCurve,
) -> f64 {
    g.sup_distance(g_generic) + f_generic.sup_distance(f)
}
