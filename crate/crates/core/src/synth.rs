//! Triadic-closure benchmark: a power-law base graph where pairs with two
//! or more common neighbors close and evaluation negatives share none.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::train::{SplitDataset, SATURATION_LIMIT};

/// Edges each arriving node attaches in the preferential-attachment base.
const ATTACH: usize = 3;
/// Width of the attached noise features.
pub const SYNTH_FEATURE_DIM: usize = 8;

fn canon(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

fn common_neighbor_count(g: &Graph, u: usize, v: usize) -> usize {
    let (nu, nv) = (g.neighbors(u).unwrap(), g.neighbors(v).unwrap());
    let (mut a, mut b) = (nu.iter(), nv.iter());
    let (mut x, mut y) = (a.next(), b.next());
    let mut count = 0;
    while let (Some(&p), Some(&q)) = (x, y) {
        if p == q {
            count += 1;
            x = a.next();
            y = b.next();
        } else if p < q {
            x = a.next();
        } else {
            y = b.next();
        }
    }
    count
}

/// Preferential-attachment edge list: a seed clique, then each node joins
/// `ATTACH` distinct earlier nodes with probability proportional to degree.
fn power_law_edges<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let seed_nodes = ATTACH + 1;
    let mut edges = Vec::new();
    // Every edge endpoint lands in this list, so uniform draws from it are
    // degree-proportional.
    let mut endpoints = Vec::new();
    for u in 0..seed_nodes {
        for v in u + 1..seed_nodes {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    for v in seed_nodes..n {
        let mut picked: Vec<usize> = Vec::with_capacity(ATTACH);
        while picked.len() < ATTACH {
            let u = endpoints[rng.random_range(0..endpoints.len())];
            if !picked.contains(&u) {
                picked.push(u);
            }
        }
        for &u in &picked {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    edges
}

/// Non-edges of `g` with at least two common neighbors, in sorted order.
fn open_triangle_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let mut wedge_counts: HashMap<(usize, usize), usize> = HashMap::new();
    for w in 0..g.num_nodes() {
        let nbrs = g.neighbors(w).unwrap();
        for (ai, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[ai + 1..] {
                *wedge_counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    let mut out: Vec<(usize, usize)> = wedge_counts
        .into_iter()
        .filter(|&((a, b), c)| c >= 2 && !g.has_edge(a, b))
        .map(|(pair, _)| pair)
        .collect();
    out.sort_unstable();
    out
}

fn sample_zero_cn_pairs<R: Rng>(
    g: &Graph,
    count: usize,
    rng: &mut R,
    excluded: &HashSet<(usize, usize)>,
) -> Result<Vec<(usize, usize)>> {
    let n = g.num_nodes();
    let mut out = Vec::with_capacity(count);
    let mut chosen: HashSet<(usize, usize)> = HashSet::new();
    let mut rejections: u64 = 0;
    while out.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        let pair = canon(u, v);
        let ok = u != v
            && !g.has_edge(u, v)
            && !excluded.contains(&pair)
            && !chosen.contains(&pair)
            && common_neighbor_count(g, u, v) == 0;
        if ok {
            chosen.insert(pair);
            out.push(pair);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections > SATURATION_LIMIT {
                return Err(Error::Saturation(
                    "no pairs without common neighbors left to sample".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Build the benchmark: a preferential-attachment base graph, closure
/// pairs (non-edges with >= 2 common neighbors) split 60/20/20 into
/// train/valid/test positives with the training share closed into the
/// graph, zero-common-neighbor evaluation negatives, and noise features.
/// The returned graph is the training graph.
pub fn generate_synthetic_benchmark(n: usize, seed: u64) -> Result<(Graph, SplitDataset)> {
    if n < 100 {
        return Err(Error::InvalidInput(format!(
            "benchmark needs at least 100 nodes, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base_edges = power_law_edges(n, &mut rng);
    let base = Graph::from_edges(n, &base_edges);

    let mut candidates = open_triangle_pairs(&base);
    if candidates.len() < 10 {
        return Err(Error::InvalidInput(
            "base graph produced too few open triangles".into(),
        ));
    }
    candidates.shuffle(&mut rng);
    let t_end = (candidates.len() as f64 * 0.6).round() as usize;
    let v_end = t_end + (candidates.len() as f64 * 0.2).round() as usize;
    let train_pos: Vec<_> = candidates[..t_end].to_vec();
    let valid_pos: Vec<_> = candidates[t_end..v_end].to_vec();
    let test_pos: Vec<_> = candidates[v_end..].to_vec();

    let mut train_edges = base_edges;
    train_edges.extend_from_slice(&train_pos);
    let features: Vec<f64> = (0..n * SYNTH_FEATURE_DIM)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    let g = Graph::from_edges(n, &train_edges).with_features(SYNTH_FEATURE_DIM, features)?;

    let mut excluded: HashSet<(usize, usize)> = candidates.iter().copied().collect();
    let valid_neg = sample_zero_cn_pairs(&g, valid_pos.len(), &mut rng, &excluded)?;
    excluded.extend(valid_neg.iter().copied());
    let test_neg = sample_zero_cn_pairs(&g, test_pos.len(), &mut rng, &excluded)?;

    let splits = SplitDataset {
        train_pos,
        valid_pos,
        test_pos,
        valid_neg,
        test_neg,
        negative_ratio: 1,
        seed,
    };
    splits.validate(&g)?;
    Ok((g, splits))
}
