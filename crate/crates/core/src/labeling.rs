//! Structural node labels for enclosing subgraphs: path labeling (PL) and
//! double-radius node labeling (DRNL), plus one-hot encoding of either.

use serde::{Deserialize, Serialize};

use crate::graph::EnclosingSubgraph;
use crate::paths::PathSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelScheme {
    Pl,
    Drnl,
}

/// Per-local-node discrete structural labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAssignment {
    pub labels: Vec<usize>,
    pub scheme: LabelScheme,
    /// Truncation constant; the one-hot width is `lambda + 1`.
    pub lambda: usize,
}

/// Path labeling. Targets get 0. A node on at least one enumerated path gets
/// the shortest containing path's edge length minus one (a common neighbor
/// sits on a length-2 path and gets 1). Fringe nodes, which lie on no path,
/// get `lambda`. The path set must have been enumerated with
/// `max_len = lambda`, so every produced value is already at most `lambda`.
pub fn path_label(sub: &EnclosingSubgraph, ps: &PathSet, lambda: usize) -> LabelAssignment {
    let n = sub.num_nodes();
    let fringe = lambda;
    let mut labels = vec![fringe; n];
    // Paths come in DFS order, not length order; keep the minimum per node.
    for path in &ps.paths {
        let edge_len = path.len() - 1;
        for &u in &path[1..path.len().saturating_sub(1)] {
            labels[u] = labels[u].min(edge_len - 1);
        }
    }
    labels[sub.target_a] = 0;
    labels[sub.target_b] = 0;
    LabelAssignment {
        labels,
        scheme: LabelScheme::Pl,
        lambda,
    }
}

/// Double-radius labeling on the subgraph. For each node the distances
/// (d_a, d_b) to the two targets are measured with the other target removed;
/// with d = d_a + d_b the label is
/// 1 + min(d_a, d_b) + (d/2)*((d/2) + (d mod 2) - 1).
/// Targets get 1, nodes unreachable from either target get 0. `cap` bounds
/// the emitted values so they stay one-hot encodable.
pub fn drnl_label(sub: &EnclosingSubgraph, cap: usize) -> LabelAssignment {
    let g = &sub.local_graph;
    let n = g.num_nodes();
    let (a, b) = (sub.target_a, sub.target_b);
    let dist_a = g.bfs_distances(a, None, Some(b));
    let dist_b = g.bfs_distances(b, None, Some(a));
    let mut labels = vec![0usize; n];
    for u in 0..n {
        if u == a || u == b {
            labels[u] = 1;
            continue;
        }
        let (da, db) = match (dist_a[u], dist_b[u]) {
            (Some(da), Some(db)) => (da, db),
            _ => {
                labels[u] = 0;
                continue;
            }
        };
        let d = da + db;
        let half = d / 2;
        let raw = 1 + da.min(db) + half * (half + d % 2 - 1);
        labels[u] = raw.min(cap);
    }
    LabelAssignment {
        labels,
        scheme: LabelScheme::Drnl,
        lambda: cap,
    }
}

/// One-hot rows of width `lambda + 1`; row u is hot at column
/// `min(label_u, lambda)`. Row-major.
pub fn one_hot_encode(la: &LabelAssignment, lambda: usize) -> Vec<f64> {
    let width = lambda + 1;
    let mut out = vec![0.0; la.labels.len() * width];
    for (u, &c) in la.labels.iter().enumerate() {
        out[u * width + c.min(lambda)] = 1.0;
    }
    out
}
