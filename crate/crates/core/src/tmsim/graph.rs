use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::segment::SegmentedTrace;
use crate::error::{Error, Result};

/// Largest vertex count for predecessor computations (quadratic bitsets).
pub const MAX_PROFILE_VERTICES: usize = 1 << 14;

/// DAG on segments `0..vertices`. Edges `(i, j)` have `i < j` and are
/// sorted; every `(i, i + 1)` is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputationGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl ComputationGraph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= j || j >= vertices {
                return Err(Error::InvalidArgument(format!("edge ({i}, {j}) is not forward within {vertices} vertices")));
            }
            set.insert((i, j));
        }
        set.extend((1..vertices).map(|j| (j - 1, j)));
        Ok(Self {
            vertices,
            edges: set.into_iter().collect(),
        })
    }

    pub fn path(vertices: usize) -> Self {
        Self::new(vertices, []).expect("path edges are forward")
    }

    fn incoming(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices];
        for &(i, j) in &self.edges {
            inc[j].push(i);
        }
        inc
    }

    /// Edges that are not path edges.
    pub fn revisit_edges(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.edges.iter().filter(|(i, j)| j - i > 1)
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.vertices];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// Path edges plus an edge `(i, j)` whenever some tape visits a block in
/// segments `i` and `j` and in no segment strictly between. All tapes count,
/// including input, advice and output.
pub fn computation_graph(st: &SegmentedTrace) -> ComputationGraph {
    let mut last_visit: HashMap<(usize, i64), usize> = HashMap::new();
    let mut edges = Vec::new();
    for (j, per_tape) in st.visits.iter().enumerate() {
        for (tape, blocks) in per_tape.iter().enumerate() {
            for &block in blocks {
                if let Some(i) = last_visit.insert((tape, block), j) {
                    edges.push((i, j));
                }
            }
        }
    }
    ComputationGraph::new(st.a(), edges).expect("edges go forward")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredecessorProfile {
    pub max: usize,
    pub mean: f64,
    /// Predecessor count per vertex, `None` for removed vertices.
    pub per_vertex: Vec<Option<usize>>,
}

fn check_vertices(g: &ComputationGraph) -> Result<()> {
    if g.vertices > MAX_PROFILE_VERTICES {
        return Err(Error::budget("graph vertices", g.vertices, MAX_PROFILE_VERTICES));
    }
    Ok(())
}

/// Predecessors in the subgraph induced by `V \ removed`: the vertices with
/// a directed path to `v` avoiding `removed`.
pub fn predecessor_profile(g: &ComputationGraph, removed: &[usize]) -> Result<PredecessorProfile> {
    check_vertices(g)?;
    if let Some(&bad) = removed.iter().find(|&&v| v >= g.vertices) {
        return Err(Error::InvalidArgument(format!("vertex {bad} out of range for {} vertices", g.vertices)));
    }
    let mut gone = vec![false; g.vertices];
    for &v in removed {
        gone[v] = true;
    }
    let counts = predecessor_counts(g.vertices, &g.incoming(), &gone);
    Ok(profile_from(counts))
}

fn profile_from(counts: Vec<Option<usize>>) -> PredecessorProfile {
    let kept: Vec<usize> = counts.iter().flatten().copied().collect();
    let max = kept.iter().copied().max().unwrap_or(0);
    let mean = if kept.is_empty() {
        0.0
    } else {
        kept.iter().sum::<usize>() as f64 / kept.len() as f64
    };
    PredecessorProfile {
        max,
        mean,
        per_vertex: counts,
    }
}

fn predecessor_counts(n: usize, incoming: &[Vec<usize>], gone: &[bool]) -> Vec<Option<usize>> {
    let words = n.div_ceil(64);
    let mut reach: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut counts = Vec::with_capacity(n);
    for v in 0..n {
        let mut set = vec![0u64; words];
        if !gone[v] {
            for &u in &incoming[v] {
                if gone[u] {
                    continue;
                }
                for (a, b) in set.iter_mut().zip(&reach[u]) {
                    *a |= b;
                }
                set[u / 64] |= 1 << (u % 64);
            }
            counts.push(Some(set.iter().map(|w| w.count_ones() as usize).sum()));
        } else {
            counts.push(None);
        }
        reach.push(set);
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatorReport {
    /// Removed vertices in removal order.
    pub removed: Vec<usize>,
    pub profile: PredecessorProfile,
}

/// Greedily removes up to `budget` vertices, each time the one leaving the
/// smallest maximum predecessor count (lowest index on ties), stopping
/// early once no vertex has a predecessor.
pub fn greedy_separator(g: &ComputationGraph, budget: usize) -> Result<SeparatorReport> {
    check_vertices(g)?;
    if budget > g.vertices {
        return Err(Error::InvalidArgument(format!(
            "budget {budget} exceeds the {} vertices",
            g.vertices
        )));
    }
    let incoming = g.incoming();
    let mut gone = vec![false; g.vertices];
    let mut removed = Vec::new();
    let mut counts = predecessor_counts(g.vertices, &incoming, &gone);
    while removed.len() < budget && counts.iter().flatten().any(|&c| c > 0) {
        let (_, best) = (0..g.vertices)
            .into_par_iter()
            .filter(|&v| !gone[v])
            .map(|v| {
                let mut trial = gone.clone();
                trial[v] = true;
                let worst = predecessor_counts(g.vertices, &incoming, &trial)
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(0);
                (worst, v)
            })
            .min()
            .expect("some vertex remains while counts are positive");
        gone[best] = true;
        removed.push(best);
        counts = predecessor_counts(g.vertices, &incoming, &gone);
    }
    Ok(SeparatorReport {
        removed,
        profile: profile_from(counts),
    })
}
