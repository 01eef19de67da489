//! Independent reference implementations the tests compare against. These
//! deliberately share no code with the library: brute-force enumeration,
//! dense matrix arithmetic, and hash-set arithmetic only.

// Shared by several test targets; each uses a different subset.
#![allow(dead_code)]

use std::collections::HashSet;

use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use seg_core::graph::Graph;

/// Erdos-Renyi style graph; every unordered pair becomes an edge with
/// probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_range(0.0..1.0) < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn random_distinct_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    loop {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            return (a, b);
        }
    }
}

/// Every simple path from `a` to `b` with at most `max_len` edges, found by
/// trying all ordered selections of intermediate vertices.
pub fn oracle_paths(g: &Graph, a: usize, b: usize, max_len: usize) -> Vec<Vec<usize>> {
    let n = g.num_nodes();
    let others: Vec<usize> = (0..n).filter(|&x| x != a && x != b).collect();
    let mut out = Vec::new();
    for edges in 1..=max_len {
        let inner = edges - 1;
        for combo in others.iter().copied().permutations(inner) {
            let mut seq = Vec::with_capacity(edges + 1);
            seq.push(a);
            seq.extend(combo);
            seq.push(b);
            if seq.windows(2).all(|w| g.has_edge(w[0], w[1])) {
                out.push(seq);
            }
        }
    }
    out.sort();
    out
}

fn neighbor_set(g: &Graph, u: usize) -> HashSet<usize> {
    g.neighbors(u).unwrap().iter().copied().collect()
}

pub fn oracle_cn(g: &Graph, i: usize, j: usize) -> f64 {
    neighbor_set(g, i).intersection(&neighbor_set(g, j)).count() as f64
}

pub fn oracle_jaccard(g: &Graph, i: usize, j: usize) -> f64 {
    let (a, b) = (neighbor_set(g, i), neighbor_set(g, j));
    let union = a.union(&b).count();
    if union == 0 {
        0.0
    } else {
        a.intersection(&b).count() as f64 / union as f64
    }
}

pub fn oracle_aa(g: &Graph, i: usize, j: usize) -> f64 {
    let (a, b) = (neighbor_set(g, i), neighbor_set(g, j));
    let mut common: Vec<usize> = a.intersection(&b).copied().collect();
    common.sort_unstable();
    common
        .into_iter()
        .map(|w| g.degree(w).unwrap())
        .filter(|&d| d > 1)
        .map(|d| 1.0 / (d as f64).ln())
        .sum()
}

/// Truncated Katz from dense adjacency powers: sum of alpha^l (A^l)_{ij}.
pub fn oracle_katz(g: &Graph, i: usize, j: usize, alpha: f64, max_len: usize) -> f64 {
    let n = g.num_nodes();
    let mut adj = vec![vec![0.0f64; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = 1.0;
        adj[v][u] = 1.0;
    }
    let mut power = adj.clone();
    let mut score = alpha * power[i][j];
    let mut weight = alpha;
    for _ in 2..=max_len {
        let mut next = vec![vec![0.0f64; n]; n];
        for r in 0..n {
            for k in 0..n {
                let x = power[r][k];
                if x == 0.0 {
                    continue;
                }
                for c in 0..n {
                    next[r][c] += x * adj[k][c];
                }
            }
        }
        power = next;
        weight *= alpha;
        score += weight * power[i][j];
    }
    score
}

/// Hits at K by literal sorting: a positive hits when it outranks the K-th
/// highest negative strictly.
pub fn oracle_hits_at_k(pos: &[f64], neg: &[f64], k: usize) -> f64 {
    if neg.len() < k {
        return 1.0;
    }
    let mut sorted = neg.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let threshold = sorted[k - 1];
    pos.iter().filter(|&&s| s > threshold).count() as f64 / pos.len() as f64
}

/// Reciprocal rank by literal counting; ties rank the positive below.
pub fn oracle_mrr(sets: &[(f64, Vec<f64>)]) -> f64 {
    let total: f64 = sets
        .iter()
        .map(|(p, negs)| {
            let above = negs.iter().filter(|&&s| s >= *p).count();
            1.0 / (1 + above) as f64
        })
        .sum();
    total / sets.len() as f64
}

/// Pairwise AUC: fraction of (positive, negative) pairs ranked correctly,
/// ties half-credited.
pub fn oracle_auc(pos: &[f64], neg: &[f64]) -> f64 {
    let mut total = 0.0;
    for &p in pos {
        for &n in neg {
            if p > n {
                total += 1.0;
            } else if p == n {
                total += 0.5;
            }
        }
    }
    total / (pos.len() * neg.len()) as f64
}
