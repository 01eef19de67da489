use std::fs;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;

use seg_core::checkpoint::{checkpoint_from_json, checkpoint_to_json};
use seg_core::error::{Error, Result};
use seg_core::eval::EvalReport;
use seg_core::exec;
use seg_core::graph::{extract_enclosing_subgraph, load_edge_list, load_pairs, Graph};
use seg_core::heuristics::{score_pairs, HeuristicKind};
use seg_core::labeling::{drnl_label, path_label, LabelScheme};
use seg_core::model::{prepare_instance, BackboneKind, Model, ModelKind, SegConfig, SubgraphInstance};
use seg_core::nn::gradcheck::finite_diff_check;
use seg_core::nn::params::{Grads, ParamStore};
use seg_core::paths::enumerate_simple_paths_capped;
use seg_core::synth::generate_synthetic_benchmark;
use seg_core::train::{
    evaluate_split, merge_valid_into_train, train, EvalSpec, Split, SplitDataset,
};

#[derive(Copy, Clone, ValueEnum)]
pub enum LabelingArg {
    Pl,
    Drnl,
}

#[derive(Copy, Clone, ValueEnum)]
pub enum BackboneArg {
    Sage,
    Gcn,
}

#[derive(Copy, Clone, ValueEnum)]
pub enum MethodArg {
    Cn,
    Jaccard,
    Aa,
    Katz,
}

fn parse_model_kind(s: &str) -> Result<ModelKind> {
    ModelKind::parse(s)
}

/// Model hyperparameters as optional overrides. Values not given here fall
/// back to the config file, then to the built-in defaults; flags win.
#[derive(Args, Clone, Default)]
pub struct ModelFlags {
    /// JSON config file with flat keys named like these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Path-label truncation constant (max path length).
    #[arg(long)]
    lambda: Option<usize>,
    /// Enclosing-subgraph radius in hops.
    #[arg(long)]
    hops: Option<usize>,
    /// Structural labeling scheme.
    #[arg(long, value_enum)]
    labeling: Option<LabelingArg>,
    /// Distance-label truncation for the drnl scheme.
    #[arg(long)]
    drnl_cap: Option<usize>,
    /// Width of encoder and backbone hidden layers.
    #[arg(long)]
    hidden: Option<usize>,
    /// Width of the fused node representation.
    #[arg(long)]
    fusion_dim: Option<usize>,
    /// Backbone layer type.
    #[arg(long, value_enum)]
    backbone: Option<BackboneArg>,
    /// Number of backbone layers.
    #[arg(long)]
    layers: Option<usize>,
    /// Nodes kept by the sort pooling readout.
    #[arg(long)]
    sortpool_k: Option<usize>,
    /// Hidden width of the scoring heads.
    #[arg(long)]
    head_hidden: Option<usize>,
    /// Abort path enumeration beyond this many paths.
    #[arg(long)]
    max_paths: Option<usize>,
    /// Adam learning rate.
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Fraction of training positives sampled per epoch.
    #[arg(long)]
    pos_fraction: Option<f64>,
    /// Seed for initialization, sampling, and evaluation pools.
    #[arg(long)]
    seed: Option<u64>,
    /// Keep the target edge when extracting training subgraphs.
    #[arg(long)]
    keep_target_edge: bool,
}

impl ModelFlags {
    fn apply(&self, cfg: &mut SegConfig) {
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = self.hops {
            cfg.hops = v;
        }
        if let Some(v) = self.labeling {
            cfg.labeling = match v {
                LabelingArg::Pl => LabelScheme::Pl,
                LabelingArg::Drnl => LabelScheme::Drnl,
            };
        }
        if let Some(v) = self.drnl_cap {
            cfg.drnl_cap = v;
        }
        if let Some(v) = self.hidden {
            cfg.hidden = v;
        }
        if let Some(v) = self.fusion_dim {
            cfg.fusion_dim = v;
        }
        if let Some(v) = self.backbone {
            cfg.backbone = match v {
                BackboneArg::Sage => BackboneKind::Sage,
                BackboneArg::Gcn => BackboneKind::Gcn,
            };
        }
        if let Some(v) = self.layers {
            cfg.backbone_layers = v;
        }
        if let Some(v) = self.sortpool_k {
            cfg.sortpool_k = v;
        }
        if let Some(v) = self.head_hidden {
            cfg.head_hidden = v;
        }
        if let Some(v) = self.max_paths {
            cfg.max_paths = v;
        }
        if let Some(v) = self.lr {
            cfg.lr = v;
        }
        if let Some(v) = self.batch_size {
            cfg.batch_size = v;
        }
        if let Some(v) = self.epochs {
            cfg.epochs = v;
        }
        if let Some(v) = self.pos_fraction {
            cfg.pos_fraction = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.keep_target_edge {
            cfg.exclude_target_edge = false;
        }
    }
}

/// Config file keys mirror the flag names; unknown keys are rejected. A
/// "model" key picks the variant, overridden by --model.
fn merged_config(flags: &ModelFlags) -> Result<(SegConfig, Option<ModelKind>)> {
    let mut cfg = SegConfig::default();
    let mut kind = None;
    if let Some(p) = &flags.config {
        let text = read_text(p)?;
        let parsed: serde_json::Value = serde_json::from_str(&text)?;
        let mut obj = match parsed {
            serde_json::Value::Object(o) => o,
            _ => {
                return Err(Error::Format(
                    "config file must hold a JSON object".into(),
                ))
            }
        };
        if let Some(m) = obj.remove("model") {
            let s = m
                .as_str()
                .ok_or_else(|| Error::Format("config key model must be a string".into()))?;
            kind = Some(ModelKind::parse(s)?);
        }
        let mut base = serde_json::to_value(&cfg)?;
        let bmap = base.as_object_mut().unwrap();
        for (k, val) in obj {
            if !bmap.contains_key(&k) {
                return Err(Error::Format(format!("unknown config key {k}")));
            }
            bmap.insert(k, val);
        }
        cfg = serde_json::from_value(base)?;
    }
    flags.apply(&mut cfg);
    Ok((cfg, kind))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::InvalidInput(format!("cannot open {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn read_graph(graph: &Path, features: Option<&Path>) -> Result<Graph> {
    let f = match features {
        Some(p) => Some(open(p)?),
        None => None,
    };
    load_edge_list(open(graph)?, f)
}

fn read_pairs(path: &Path) -> Result<Vec<(usize, usize)>> {
    load_pairs(open(path)?)
}

fn read_pairs_opt(path: Option<&PathBuf>) -> Result<Vec<(usize, usize)>> {
    match path {
        Some(p) => read_pairs(p),
        None => Ok(Vec::new()),
    }
}

fn pairs_text(pairs: &[(usize, usize)]) -> String {
    let mut s = String::new();
    for &(u, v) in pairs {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

#[derive(Args)]
pub struct PathsArgs {
    /// Edge-list file ("u v" per line).
    #[arg(long)]
    graph: PathBuf,
    /// Target pair.
    #[arg(long, num_args = 2, value_names = ["U", "V"], required = true)]
    pair: Vec<usize>,
    /// Subgraph radius in hops.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Maximum path length in edges.
    #[arg(long, default_value_t = 4)]
    lambda: usize,
    /// Remove the target edge before enumerating, if present.
    #[arg(long)]
    exclude_target_edge: bool,
    /// Abort beyond this many paths.
    #[arg(long, default_value_t = 10_000)]
    max_paths: usize,
}

pub fn cmd_paths(args: PathsArgs) -> Result<()> {
    let g = read_graph(&args.graph, None)?;
    let (u, v) = (args.pair[0], args.pair[1]);
    let sub = extract_enclosing_subgraph(&g, u, v, args.k, args.exclude_target_edge)?;
    let ps = enumerate_simple_paths_capped(&sub, args.lambda, args.max_paths)?;
    let mut global: Vec<Vec<usize>> = ps
        .paths
        .iter()
        .map(|p| p.iter().map(|&x| sub.local_to_global[x]).collect())
        .collect();
    global.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    for p in &global {
        let words: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        println!("{}", words.join(" "));
    }
    Ok(())
}

#[derive(Args)]
pub struct LabelArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, num_args = 2, value_names = ["U", "V"], required = true)]
    pair: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "pl")]
    scheme: LabelingArg,
    /// Truncation constant for pl labels.
    #[arg(long, default_value_t = 4)]
    lambda: usize,
    /// Truncation constant for drnl labels.
    #[arg(long, default_value_t = 16)]
    drnl_cap: usize,
    #[arg(long)]
    exclude_target_edge: bool,
    #[arg(long, default_value_t = 10_000)]
    max_paths: usize,
}

pub fn cmd_label(args: LabelArgs) -> Result<()> {
    let g = read_graph(&args.graph, None)?;
    let (u, v) = (args.pair[0], args.pair[1]);
    let sub = extract_enclosing_subgraph(&g, u, v, args.k, args.exclude_target_edge)?;
    let la = match args.scheme {
        LabelingArg::Pl => {
            let ps = enumerate_simple_paths_capped(&sub, args.lambda, args.max_paths)?;
            path_label(&sub, &ps, args.lambda)
        }
        LabelingArg::Drnl => drnl_label(&sub, args.drnl_cap),
    };
    let mut rows: Vec<(usize, usize)> = la
        .labels
        .iter()
        .enumerate()
        .map(|(local, &c)| (sub.local_to_global[local], c))
        .collect();
    rows.sort_unstable();
    for (node, c) in rows {
        println!("{node} {c}");
    }
    Ok(())
}

#[derive(Args)]
pub struct ScoreArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Pair file ("u v" per line).
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Damping factor for katz.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Walk-length cutoff for katz.
    #[arg(long, default_value_t = 5)]
    katz_len: usize,
}

pub fn cmd_score(args: ScoreArgs) -> Result<()> {
    let g = read_graph(&args.graph, None)?;
    let pairs = read_pairs(&args.pairs)?;
    let kind = match args.method {
        MethodArg::Cn => HeuristicKind::Cn,
        MethodArg::Jaccard => HeuristicKind::Jaccard,
        MethodArg::Aa => HeuristicKind::Aa,
        MethodArg::Katz => HeuristicKind::Katz {
            alpha: args.alpha,
            max_len: args.katz_len,
        },
    };
    let scores = score_pairs(&g, &pairs, kind);
    for (&(u, v), s) in pairs.iter().zip(scores) {
        println!("{u} {v} {}", s?);
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalSettingsEcho<'a> {
    ks: &'a [usize],
    mrr_negatives: usize,
    seed: u64,
}

#[derive(Serialize)]
struct EvalRun<'a> {
    format: &'static str,
    version: u32,
    model: &'a str,
    config: &'a SegConfig,
    eval: EvalSettingsEcho<'a>,
    report: &'a EvalReport,
}

fn write_eval_run(
    path: &Path,
    kind: ModelKind,
    cfg: &SegConfig,
    spec: &EvalSpec,
    report: &EvalReport,
) -> Result<()> {
    let run = EvalRun {
        format: "eval-run",
        version: 1,
        model: kind.name(),
        config: cfg,
        eval: EvalSettingsEcho {
            ks: &spec.ks,
            mrr_negatives: spec.mrr_negatives,
            seed: spec.seed,
        },
        report,
    };
    write_text(path, &serde_json::to_string_pretty(&run)?)
}

#[derive(Args)]
pub struct TrainArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Feature file ("u f1 ... fD" per line).
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    train_pos: PathBuf,
    #[arg(long)]
    valid_pos: Option<PathBuf>,
    #[arg(long)]
    valid_neg: Option<PathBuf>,
    #[arg(long)]
    test_pos: Option<PathBuf>,
    #[arg(long)]
    test_neg: Option<PathBuf>,
    /// Model variant: seg, seg-se, seg-gnn, seg-drnl, seg-gcn, pair-mlp.
    #[arg(long, value_parser = parse_model_kind)]
    model: Option<ModelKind>,
    /// Fold validation positives into the training graph and supervision.
    #[arg(long)]
    train_on_valid: bool,
    /// Independent runs with consecutive seeds; artifacts come from the first.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Sampled evaluation negatives per positive when no file is given.
    #[arg(long, default_value_t = 1)]
    negative_ratio: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 10, 50])]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    mrr_negatives: usize,
    /// Checkpoint output path.
    #[arg(long, default_value = "checkpoint.json")]
    checkpoint: PathBuf,
    /// Loss curve output (CSV).
    #[arg(long)]
    loss_csv: Option<PathBuf>,
    #[command(flatten)]
    flags: ModelFlags,
}

pub fn cmd_train(args: TrainArgs) -> Result<()> {
    let (mut cfg, cfg_model) = merged_config(&args.flags)?;
    let mut g = read_graph(&args.graph, args.features.as_deref())?;
    cfg.feature_dim = g.feature_dim();
    let kind = args.model.or(cfg_model).unwrap_or(ModelKind::Seg);

    let mut splits = SplitDataset {
        train_pos: read_pairs(&args.train_pos)?,
        valid_pos: read_pairs_opt(args.valid_pos.as_ref())?,
        test_pos: read_pairs_opt(args.test_pos.as_ref())?,
        valid_neg: read_pairs_opt(args.valid_neg.as_ref())?,
        test_neg: read_pairs_opt(args.test_neg.as_ref())?,
        negative_ratio: args.negative_ratio,
        seed: cfg.seed,
    };
    if args.train_on_valid {
        let (g2, s2) = merge_valid_into_train(&g, &splits)?;
        g = g2;
        splits = s2;
    }

    let eval_on = if !splits.test_pos.is_empty() {
        Some(Split::Test)
    } else if !splits.valid_pos.is_empty() {
        Some(Split::Valid)
    } else {
        None
    };

    let mut aucs: Vec<f64> = Vec::new();
    for r in 0..args.repeats.max(1) {
        let mut cfg_r = cfg.clone();
        cfg_r.seed = cfg.seed.wrapping_add(r as u64);
        let (model, mut store) = Model::init(kind, &cfg_r)?;
        let result = train(&model, &mut store, &g, &splits, &cfg_r)?;
        for (i, l) in result.loss_curve.iter().enumerate() {
            println!("epoch {} loss {l}", i + 1);
        }
        if let Some(which) = eval_on {
            let spec = EvalSpec {
                ks: args.ks.clone(),
                mrr_negatives: args.mrr_negatives,
                seed: cfg_r.seed,
            };
            let report = evaluate_split(&model, &store, &g, &splits, which, &spec)?;
            println!(
                "repeat {} auc {} mrr {}",
                r + 1,
                report.auc,
                report.mrr
            );
            aucs.push(report.auc);
        }
        if r == 0 {
            write_text(&args.checkpoint, &checkpoint_to_json(kind, &cfg_r, &store)?)?;
            if let Some(csv) = &args.loss_csv {
                let mut out = String::new();
                out.push_str("# format: loss-curve/1\n");
                out.push_str(&format!("# model: {}\n", kind.name()));
                out.push_str(&format!("# config: {}\n", serde_json::to_string(&cfg_r)?));
                out.push_str("epoch,loss\n");
                for (i, l) in result.loss_curve.iter().enumerate() {
                    out.push_str(&format!("{},{l}\n", i + 1));
                }
                write_text(csv, &out)?;
            }
        }
    }
    if aucs.len() > 1 {
        let n = aucs.len() as f64;
        let mean = aucs.iter().sum::<f64>() / n;
        let var = aucs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1.0);
        println!("auc mean {mean} std {} over {} repeats", var.sqrt(), aucs.len());
    }
    Ok(())
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    checkpoint: PathBuf,
    /// Held-out positive pairs.
    #[arg(long)]
    pos: PathBuf,
    /// Fixed negative pairs; sampled when absent.
    #[arg(long)]
    neg: Option<PathBuf>,
    /// Further positive pairs excluded from sampled candidate pools.
    #[arg(long)]
    known_pos: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    negative_ratio: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 10, 50])]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    mrr_negatives: usize,
    /// Pool-sampling seed; defaults to the checkpoint's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report (JSON) here in addition to the stdout table.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn cmd_eval(args: EvalArgs) -> Result<()> {
    let g = read_graph(&args.graph, args.features.as_deref())?;
    let loaded = checkpoint_from_json(&read_text(&args.checkpoint)?)?;
    if loaded.config.feature_dim != g.feature_dim() {
        return Err(Error::Shape(format!(
            "checkpoint expects {}-dimensional features, graph has {}",
            loaded.config.feature_dim,
            g.feature_dim()
        )));
    }
    let mut splits = SplitDataset {
        test_pos: read_pairs(&args.pos)?,
        test_neg: read_pairs_opt(args.neg.as_ref())?,
        negative_ratio: args.negative_ratio,
        seed: loaded.config.seed,
        ..SplitDataset::default()
    };
    for p in &args.known_pos {
        splits.train_pos.extend(read_pairs(p)?);
    }
    let spec = EvalSpec {
        ks: args.ks.clone(),
        mrr_negatives: args.mrr_negatives,
        seed: args.seed.unwrap_or(loaded.config.seed),
    };
    let report = evaluate_split(&loaded.model, &loaded.store, &g, &splits, Split::Test, &spec)?;
    print!("{}", report.table());
    if let Some(out) = &args.out {
        write_eval_run(out, loaded.kind, &loaded.config, &spec, &report)?;
    }
    Ok(())
}

#[derive(Args)]
pub struct PredictArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
}

pub fn cmd_predict(args: PredictArgs) -> Result<()> {
    let g = read_graph(&args.graph, args.features.as_deref())?;
    let loaded = checkpoint_from_json(&read_text(&args.checkpoint)?)?;
    let pairs = read_pairs(&args.pairs)?;
    match &loaded.model {
        Model::Seg(m) => {
            let outs = exec::map(&pairs, |&(u, v)| m.predict(&loaded.store, &g, u, v));
            for (&(u, v), out) in pairs.iter().zip(outs) {
                let o = out?;
                println!("{u} {v} {} {} {}", o.s, o.s_semantic, o.s_structure);
            }
        }
        Model::PairMlp(m) => {
            let outs = exec::map(&pairs, |&(u, v)| m.predict(&loaded.store, &g, u, v));
            for (&(u, v), out) in pairs.iter().zip(outs) {
                println!("{u} {v} {}", out?);
            }
        }
    }
    Ok(())
}

#[derive(Args)]
pub struct GradcheckArgs {
    /// Graph to check on; a built-in 7-node fixture when absent.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    features: Option<PathBuf>,
    /// Pair to check; the fixture checks one positive and one negative.
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    pair: Option<Vec<usize>>,
    #[arg(long, value_parser = parse_model_kind)]
    model: Option<ModelKind>,
    /// Finite-difference step. Small enough that the probe stays on one
    /// side of activation kinks; double precision keeps roundoff below
    /// the tolerance at this size.
    #[arg(long, default_value_t = 1e-7)]
    step: f64,
    /// Maximum accepted relative error.
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[command(flatten)]
    flags: ModelFlags,
}

fn builtin_fixture() -> Graph {
    let g = Graph::from_edges(
        7,
        &[(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 3), (0, 6)],
    );
    let dim = 4;
    let data: Vec<f64> = (0..7 * dim).map(|i| (i as f64 * 0.37).sin()).collect();
    g.with_features(dim, data).unwrap()
}

pub fn cmd_gradcheck(args: GradcheckArgs) -> Result<()> {
    let (mut cfg, cfg_model) = merged_config(&args.flags)?;
    let kind = args.model.or(cfg_model).unwrap_or(ModelKind::Seg);
    let g = match &args.graph {
        Some(p) => read_graph(p, args.features.as_deref())?,
        None => builtin_fixture(),
    };
    cfg.feature_dim = g.feature_dim();
    let examples: Vec<(usize, usize, f64)> = match &args.pair {
        Some(p) => vec![(p[0], p[1], 1.0)],
        None => vec![(0, 1, 1.0), (2, 6, 0.0)],
    };

    let (model, store) = Model::init(kind, &cfg)?;
    let mut analytic = Grads::zeros_like(&store);
    for &(u, v, y) in &examples {
        let (_, grads) = model.loss_and_grads(&store, &g, u, v, y)?;
        analytic.add_assign(&grads);
    }
    analytic.scale(1.0 / examples.len() as f64);

    let report = match &model {
        Model::Seg(m) => {
            let cfg_applied = model.config().unwrap().clone();
            let insts: Vec<(SubgraphInstance, f64)> = examples
                .iter()
                .map(|&(u, v, y)| prepare_instance(&g, u, v, &cfg_applied).map(|i| (i, y)))
                .collect::<Result<_>>()?;
            finite_diff_check(
                &store,
                &analytic,
                |s: &ParamStore| {
                    let mut total = 0.0;
                    for (inst, y) in &insts {
                        total += m.loss_value(s, inst, *y)?;
                    }
                    Ok(total / insts.len() as f64)
                },
                args.step,
                args.tolerance,
            )?
        }
        Model::PairMlp(m) => finite_diff_check(
            &store,
            &analytic,
            |s: &ParamStore| {
                let mut total = 0.0;
                for &(u, v, y) in &examples {
                    total += m.loss_on_pair(s, &g, u, v, y)?.0;
                }
                Ok(total / examples.len() as f64)
            },
            args.step,
            args.tolerance,
        )?,
    };

    println!(
        "checked {} coordinates, max relative error {:e} at {}[{}] (analytic {:e}, numeric {:e})",
        report.checked,
        report.max_rel_err,
        report.worst_param,
        report.worst_index,
        report.worst_analytic,
        report.worst_numeric
    );
    if !report.pass {
        return Err(Error::Numeric(format!(
            "gradient check failed: {:e} exceeds tolerance {:e}",
            report.max_rel_err, report.tolerance
        )));
    }
    println!("gradient check passed (tolerance {:e})", report.tolerance);
    Ok(())
}

#[derive(Args)]
pub struct SynthArgs {
    /// Number of nodes (at least 100).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

pub fn cmd_synth(args: SynthArgs) -> Result<()> {
    let (g, splits) = generate_synthetic_benchmark(args.n, args.seed)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", args.out.display())))?;

    write_text(&args.out.join("graph.txt"), &g.to_edge_list_string())?;
    let f = g.features().unwrap();
    let mut feat = String::new();
    for u in 0..g.num_nodes() {
        feat.push_str(&u.to_string());
        for x in f.row(u) {
            feat.push_str(&format!(" {x}"));
        }
        feat.push('\n');
    }
    write_text(&args.out.join("features.txt"), &feat)?;
    write_text(&args.out.join("train_pos.txt"), &pairs_text(&splits.train_pos))?;
    write_text(&args.out.join("valid_pos.txt"), &pairs_text(&splits.valid_pos))?;
    write_text(&args.out.join("valid_neg.txt"), &pairs_text(&splits.valid_neg))?;
    write_text(&args.out.join("test_pos.txt"), &pairs_text(&splits.test_pos))?;
    write_text(&args.out.join("test_neg.txt"), &pairs_text(&splits.test_neg))?;

    let manifest = serde_json::json!({
        "format": "synth-benchmark",
        "version": 1,
        "n": args.n,
        "seed": args.seed,
        "feature_dim": g.feature_dim(),
        "num_edges": g.num_edges(),
        "counts": {
            "train_pos": splits.train_pos.len(),
            "valid_pos": splits.valid_pos.len(),
            "valid_neg": splits.valid_neg.len(),
            "test_pos": splits.test_pos.len(),
            "test_neg": splits.test_neg.len(),
        },
        "files": {
            "graph": "graph.txt",
            "features": "features.txt",
            "train_pos": "train_pos.txt",
            "valid_pos": "valid_pos.txt",
            "valid_neg": "valid_neg.txt",
            "test_pos": "test_pos.txt",
            "test_neg": "test_neg.txt",
        },
    });
    write_text(
        &args.out.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest)?,
    )?;
    println!(
        "wrote benchmark to {}: {} nodes, {} edges, {} train / {} valid / {} test positives",
        args.out.display(),
        g.num_nodes(),
        g.num_edges(),
        splits.train_pos.len(),
        splits.valid_pos.len(),
        splits.test_pos.len()
    );
    Ok(())
}
