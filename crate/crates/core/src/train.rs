//! Negative sampling, the mini-batch training loop, and split evaluation.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::{build_report, CandidateSet, EvalReport};
use crate::exec;
use crate::graph::Graph;
use crate::model::{Model, SegConfig};
use crate::nn::optim::{adam_step, AdamParams};
use crate::nn::params::{Grads, ParamStore};

/// How many consecutive rejected samples before sampling gives up.
pub(crate) const SATURATION_LIMIT: u64 = 1_000_000;

fn canon(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Positive edges per split plus optional fixed negatives for evaluation.
#[derive(Debug, Clone, Default)]
pub struct SplitDataset {
    pub train_pos: Vec<(usize, usize)>,
    pub valid_pos: Vec<(usize, usize)>,
    pub test_pos: Vec<(usize, usize)>,
    pub valid_neg: Vec<(usize, usize)>,
    pub test_neg: Vec<(usize, usize)>,
    /// Negatives per positive when evaluation negatives must be sampled.
    pub negative_ratio: usize,
    pub seed: u64,
}

impl SplitDataset {
    /// Check the split invariants against the training graph: training
    /// positives are edges, held-out positives are not, all lists are
    /// duplicate-free and mutually disjoint, and no positive pair doubles
    /// as a negative.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.num_nodes();
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let lists: [(&str, &[(usize, usize)]); 5] = [
            ("train positives", &self.train_pos),
            ("valid positives", &self.valid_pos),
            ("test positives", &self.test_pos),
            ("valid negatives", &self.valid_neg),
            ("test negatives", &self.test_neg),
        ];
        for (name, list) in lists {
            for &(u, v) in list {
                if u == v {
                    return Err(Error::InvalidInput(format!(
                        "{name} contain the self-pair ({u}, {v})"
                    )));
                }
                if u >= n || v >= n {
                    return Err(Error::Bounds {
                        index: u.max(v),
                        len: n,
                    });
                }
                if !seen.insert(canon(u, v)) {
                    return Err(Error::InvalidInput(format!(
                        "pair ({u}, {v}) appears twice across the splits ({name})"
                    )));
                }
            }
        }
        for &(u, v) in &self.train_pos {
            if !g.has_edge(u, v) {
                return Err(Error::InvalidInput(format!(
                    "train positive ({u}, {v}) is not an edge of the training graph"
                )));
            }
        }
        for (name, list) in [
            ("valid positive", &self.valid_pos),
            ("test positive", &self.test_pos),
            ("valid negative", &self.valid_neg),
            ("test negative", &self.test_neg),
        ] {
            for &(u, v) in list {
                if g.has_edge(u, v) {
                    return Err(Error::InvalidInput(format!(
                        "{name} ({u}, {v}) is an edge of the training graph"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical set of every positive pair in any split.
    pub fn all_positives(&self) -> HashSet<(usize, usize)> {
        self.train_pos
            .iter()
            .chain(self.valid_pos.iter())
            .chain(self.test_pos.iter())
            .map(|&(u, v)| canon(u, v))
            .collect()
    }
}

/// Fold the validation positives into training: the edges join the graph
/// and the supervision set, and the validation split empties.
pub fn merge_valid_into_train(g: &Graph, splits: &SplitDataset) -> Result<(Graph, SplitDataset)> {
    let mut edges = g.edges();
    edges.extend_from_slice(&splits.valid_pos);
    let mut merged = Graph::from_edges(g.num_nodes(), &edges);
    if let Some(f) = g.features() {
        merged = merged.with_features(f.dim, f.data.clone())?;
    }
    let mut out = splits.clone();
    out.train_pos.extend_from_slice(&splits.valid_pos);
    out.valid_pos.clear();
    out.valid_neg.clear();
    Ok((merged, out))
}

/// Uniform non-edges avoiding `forbidden`, distinct from each other,
/// continuing an existing RNG stream.
pub fn sample_negatives_with_rng<R: Rng>(
    g: &Graph,
    count: usize,
    rng: &mut R,
    forbidden: &HashSet<(usize, usize)>,
) -> Result<Vec<(usize, usize)>> {
    let n = g.num_nodes();
    if n < 2 {
        return Err(Error::InvalidInput(
            "graph too small for negative sampling".into(),
        ));
    }
    let mut out = Vec::with_capacity(count);
    let mut chosen: HashSet<(usize, usize)> = HashSet::new();
    let mut rejections: u64 = 0;
    while out.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        let pair = canon(u, v);
        let ok = u != v
            && !g.has_edge(u, v)
            && !forbidden.contains(&pair)
            && !chosen.contains(&pair);
        if ok {
            chosen.insert(pair);
            out.push(pair);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections > SATURATION_LIMIT {
                return Err(Error::Saturation(format!(
                    "{} consecutive rejections while drawing negative {} of {}",
                    rejections,
                    out.len() + 1,
                    count
                )));
            }
        }
    }
    Ok(out)
}

/// Seeded negative sampling; see [`sample_negatives_with_rng`].
pub fn sample_negatives(
    g: &Graph,
    count: usize,
    seed: u64,
    forbidden: &HashSet<(usize, usize)>,
) -> Result<Vec<(usize, usize)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_negatives_with_rng(g, count, &mut rng, forbidden)
}

#[derive(Debug, Clone)]
pub struct TrainResult {
    /// Mean example loss per epoch, in order.
    pub loss_curve: Vec<f64>,
}

/// Mini-batch training. Each epoch subsamples the training positives at
/// `cfg.pos_fraction`, draws as many fresh negatives, shuffles, and steps
/// Adam once per batch on the mean gradient. Batch members are processed
/// in parallel; the gradient sum is folded in input order so runs with the
/// same seed are bitwise identical at any thread count.
pub fn train(
    model: &Model,
    store: &mut ParamStore,
    g: &Graph,
    splits: &SplitDataset,
    cfg: &SegConfig,
) -> Result<TrainResult> {
    cfg.validate()?;
    splits.validate(g)?;
    if splits.train_pos.is_empty() {
        return Err(Error::InvalidInput("no training positives".into()));
    }
    // Held-out pairs never appear as training negatives.
    let mut forbidden: HashSet<(usize, usize)> = HashSet::new();
    for list in [
        &splits.valid_pos,
        &splits.test_pos,
        &splits.valid_neg,
        &splits.test_neg,
    ] {
        forbidden.extend(list.iter().map(|&(u, v)| canon(u, v)));
    }

    let hp = AdamParams {
        lr: cfg.lr,
        beta1: cfg.beta1,
        beta2: cfg.beta2,
        eps: cfg.eps,
    };
    // Distinct stream from parameter initialization (which uses cfg.seed).
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7452_4149_4e5f_5347);
    let mut loss_curve = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let total = splits.train_pos.len();
        let take = ((total as f64 * cfg.pos_fraction).round() as usize).clamp(1, total);
        let chosen = rand::seq::index::sample(&mut rng, total, take);
        let negs = sample_negatives_with_rng(g, take, &mut rng, &forbidden)?;

        let mut examples: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * take);
        for idx in chosen.iter() {
            let (u, v) = splits.train_pos[idx];
            examples.push((u, v, 1.0));
        }
        for &(u, v) in &negs {
            examples.push((u, v, 0.0));
        }
        examples.shuffle(&mut rng);

        let mut loss_sum = 0.0;
        for batch in examples.chunks(cfg.batch_size) {
            let results = exec::map(batch, |&(u, v, y)| model.loss_and_grads(store, g, u, v, y));
            let mut mean_grads = Grads::zeros_like(store);
            for r in results {
                let (loss, grads) = r?;
                loss_sum += loss;
                mean_grads.add_assign(&grads);
            }
            mean_grads.scale(1.0 / batch.len() as f64);
            adam_step(store, &mean_grads, &hp);
        }
        let epoch_loss = loss_sum / examples.len() as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite mean loss at epoch {}",
                epoch + 1
            )));
        }
        loss_curve.push(epoch_loss);
    }
    Ok(TrainResult { loss_curve })
}

/// Which held-out split to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Valid,
    Test,
}

/// Evaluation settings: Hits@K cutoffs and the size of each per-source
/// candidate pool for the reciprocal-rank metric.
#[derive(Debug, Clone)]
pub struct EvalSpec {
    pub ks: Vec<usize>,
    pub mrr_negatives: usize,
    pub seed: u64,
}

impl Default for EvalSpec {
    fn default() -> EvalSpec {
        EvalSpec {
            ks: vec![1, 10, 50],
            mrr_negatives: 50,
            seed: 0,
        }
    }
}

/// Score a held-out split. Shared-pool negatives come from the dataset
/// when present and are sampled (seeded) otherwise. Reciprocal rank uses
/// per-source pools: for positive (u, v), candidates keep source u and
/// draw non-neighbors of u.
pub fn evaluate_split(
    model: &Model,
    store: &ParamStore,
    g: &Graph,
    splits: &SplitDataset,
    which: Split,
    spec: &EvalSpec,
) -> Result<EvalReport> {
    let (pos, fixed_neg) = match which {
        Split::Valid => (&splits.valid_pos, &splits.valid_neg),
        Split::Test => (&splits.test_pos, &splits.test_neg),
    };
    if pos.is_empty() {
        return Err(Error::InvalidInput("split has no positives".into()));
    }
    let all_pos = splits.all_positives();
    let neg: Vec<(usize, usize)> = if fixed_neg.is_empty() {
        let ratio = splits.negative_ratio.max(1);
        sample_negatives(g, pos.len() * ratio, spec.seed, &all_pos)?
    } else {
        fixed_neg.clone()
    };

    let scored_pos = score_pairs(model, store, g, pos)?;
    let scored_neg = score_pairs(model, store, g, &neg)?;

    // Per-source pools, sampled sequentially then scored in parallel.
    let n = g.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x4d52_525f_504f_4f4c);
    let mut pool_pairs: Vec<(usize, usize)> = Vec::with_capacity(pos.len() * spec.mrr_negatives);
    for &(u, _) in pos {
        let mut rejections: u64 = 0;
        let mut drawn: HashSet<usize> = HashSet::new();
        while drawn.len() < spec.mrr_negatives {
            let w = rng.random_range(0..n);
            let ok = w != u
                && !g.has_edge(u, w)
                && !all_pos.contains(&canon(u, w))
                && !drawn.contains(&w);
            if ok {
                drawn.insert(w);
                pool_pairs.push((u, w));
                rejections = 0;
            } else {
                rejections += 1;
                if rejections > SATURATION_LIMIT {
                    return Err(Error::Saturation(format!(
                        "no candidate negatives left for source node {u}"
                    )));
                }
            }
        }
    }
    let pool_scored = score_pairs(model, store, g, &pool_pairs)?;
    let sets: Vec<CandidateSet> = scored_pos
        .iter()
        .enumerate()
        .map(|(idx, &(_, _, positive))| CandidateSet {
            positive,
            negatives: pool_scored
                [idx * spec.mrr_negatives..(idx + 1) * spec.mrr_negatives]
                .iter()
                .map(|&(_, _, s)| s)
                .collect(),
        })
        .collect();

    build_report(&scored_pos, &scored_neg, &sets, &spec.ks)
}

fn score_pairs(
    model: &Model,
    store: &ParamStore,
    g: &Graph,
    pairs: &[(usize, usize)],
) -> Result<Vec<(usize, usize, f64)>> {
    exec::map(pairs, |&(u, v)| {
        model.score(store, g, u, v).map(|s| (u, v, s))
    })
    .into_iter()
    .collect()
}
