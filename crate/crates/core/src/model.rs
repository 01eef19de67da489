//! The link predictor: a structure encoder over path labels, feature
//! fusion, a message-passing backbone, and two scoring heads whose logits
//! add before the final sigmoid.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{extract_enclosing_subgraph, EnclosingSubgraph, Graph};
use crate::labeling::{drnl_label, one_hot_encode, path_label, LabelAssignment, LabelScheme};
use crate::nn::layers::{gcn_layer, gcn_norm, mean_agg, sage_layer, Mlp};
use crate::nn::params::{Grads, Init, ParamId, ParamStore};
use crate::nn::tape::{SparseMatrix, Tape, Tensor};
use crate::paths::{enumerate_simple_paths_capped, DEFAULT_PATH_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackboneKind {
    Sage,
    Gcn,
}

/// Everything that determines the network shape and the training run.
/// Serialized into checkpoints so a saved model rebuilds its own skeleton.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SegConfig {
    /// Path-length budget; also the fringe label and one-hot clamp.
    pub lambda: usize,
    /// Enclosing subgraph radius.
    pub hops: usize,
    pub labeling: LabelScheme,
    /// One-hot clamp for distance-based labels.
    pub drnl_cap: usize,
    /// Raw node feature width; 0 means featureless graphs.
    pub feature_dim: usize,
    /// Encoder and backbone width.
    pub hidden: usize,
    /// Fused representation width; also the structural embedding width.
    pub fusion_dim: usize,
    pub backbone: BackboneKind,
    pub backbone_layers: usize,
    pub sortpool_k: usize,
    /// Hidden width of both scoring heads.
    pub head_hidden: usize,
    pub use_structure_head: bool,
    pub use_semantic_head: bool,
    /// Abort threshold for path enumeration.
    pub max_paths: usize,
    /// Drop the observed target edge from extracted subgraphs.
    pub exclude_target_edge: bool,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub batch_size: usize,
    pub epochs: usize,
    /// Fraction of training positives sampled each epoch.
    pub pos_fraction: f64,
    pub seed: u64,
}

impl Default for SegConfig {
    fn default() -> SegConfig {
        SegConfig {
            lambda: 4,
            hops: 1,
            labeling: LabelScheme::Pl,
            drnl_cap: 16,
            feature_dim: 0,
            hidden: 32,
            fusion_dim: 32,
            backbone: BackboneKind::Sage,
            backbone_layers: 3,
            sortpool_k: 10,
            head_hidden: 128,
            use_structure_head: true,
            use_semantic_head: true,
            max_paths: DEFAULT_PATH_CAP,
            exclude_target_edge: true,
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            batch_size: 32,
            epochs: 50,
            pos_fraction: 1.0,
            seed: 0,
        }
    }
}

impl SegConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambda < 2 {
            return Err(Error::InvalidInput(
                "lambda must be >= 2 so a common neighbor is expressible".into(),
            ));
        }
        if self.hops < 1 {
            return Err(Error::InvalidInput("hops must be >= 1".into()));
        }
        let widths = [
            ("hidden", self.hidden),
            ("fusion_dim", self.fusion_dim),
            ("head_hidden", self.head_hidden),
            ("backbone_layers", self.backbone_layers),
            ("sortpool_k", self.sortpool_k),
            ("batch_size", self.batch_size),
            ("max_paths", self.max_paths),
            ("drnl_cap", self.drnl_cap),
        ];
        for (name, v) in widths {
            if v < 1 {
                return Err(Error::InvalidInput(format!("{name} must be >= 1")));
            }
        }
        if !self.use_structure_head && !self.use_semantic_head {
            return Err(Error::InvalidInput(
                "at least one scoring head must be enabled".into(),
            ));
        }
        if !(self.pos_fraction > 0.0 && self.pos_fraction <= 1.0) {
            return Err(Error::InvalidInput(
                "pos_fraction must be in (0, 1]".into(),
            ));
        }
        if !(self.lr.is_finite() && self.lr >= 0.0) {
            return Err(Error::InvalidInput("lr must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Number of label classes after clamping, i.e. the one-hot width.
    pub fn label_classes(&self) -> usize {
        match self.labeling {
            LabelScheme::Pl => self.lambda + 1,
            LabelScheme::Drnl => self.drnl_cap + 1,
        }
    }

    fn label_clamp(&self) -> usize {
        self.label_classes() - 1
    }
}

/// Scores for one candidate pair. Head scores are reported as
/// probabilities even when a head is excluded from the combination.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegOutput {
    pub s: f64,
    pub s_semantic: f64,
    pub s_structure: f64,
    /// Structural embeddings, one row per local node; rows 0 and 1 are the
    /// targets in canonical (min, max) order.
    pub z: Vec<f64>,
    pub z_width: usize,
}

/// Static per-pair work shared by every forward pass: the extracted
/// subgraph, its labels, one-hot rows, aggregation matrices, and raw
/// features gathered into local order.
#[derive(Debug, Clone)]
pub struct SubgraphInstance {
    pub sub: EnclosingSubgraph,
    pub labels: LabelAssignment,
    onehot: Vec<f64>,
    gcn_adj: Arc<SparseMatrix>,
    agg_adj: Arc<SparseMatrix>,
    feats: Vec<f64>,
}

/// Extraction plus labeling for one candidate pair. The pair is treated as
/// unordered: (i, j) and (j, i) build the identical instance, which makes
/// every downstream score exactly symmetric.
pub fn prepare_instance(
    g: &Graph,
    i: usize,
    j: usize,
    cfg: &SegConfig,
) -> Result<SubgraphInstance> {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    let sub = extract_enclosing_subgraph(g, a, b, cfg.hops, cfg.exclude_target_edge)?;
    let labels = match cfg.labeling {
        LabelScheme::Pl => {
            let ps = enumerate_simple_paths_capped(&sub, cfg.lambda, cfg.max_paths)?;
            path_label(&sub, &ps, cfg.lambda)
        }
        LabelScheme::Drnl => drnl_label(&sub, cfg.drnl_cap),
    };
    let onehot = one_hot_encode(&labels, cfg.label_clamp());
    let gcn_adj = Arc::new(gcn_norm(&sub.local_graph));
    let agg_adj = match cfg.backbone {
        BackboneKind::Sage => Arc::new(mean_agg(&sub.local_graph)),
        BackboneKind::Gcn => Arc::clone(&gcn_adj),
    };
    let n = sub.num_nodes();
    let feats = if cfg.feature_dim == 0 {
        Vec::new()
    } else {
        match g.features() {
            Some(f) => {
                if f.dim != cfg.feature_dim {
                    return Err(Error::Shape(format!(
                        "graph features have width {}, config expects {}",
                        f.dim, cfg.feature_dim
                    )));
                }
                let mut rows = Vec::with_capacity(n * f.dim);
                for &gu in &sub.local_to_global {
                    rows.extend_from_slice(f.row(gu));
                }
                rows
            }
            None => vec![0.0; n * cfg.feature_dim],
        }
    };
    Ok(SubgraphInstance {
        sub,
        labels,
        onehot,
        gcn_adj,
        agg_adj,
        feats,
    })
}

#[derive(Debug, Clone)]
enum BackboneLayer {
    Sage { w_self: ParamId, w_neigh: ParamId },
    Gcn { w: ParamId },
}

/// Tape handles for one forward pass.
pub struct ForwardOut {
    pub s: Tensor,
    pub s_semantic: Tensor,
    pub s_structure: Tensor,
    pub z: Tensor,
}

#[derive(Debug, Clone)]
pub struct SegModel {
    pub cfg: SegConfig,
    enc_gcn_w: ParamId,
    enc_mlp: Mlp,
    proj_x: Option<ParamId>,
    proj_z: ParamId,
    fuse_mlp: Mlp,
    backbone: Vec<BackboneLayer>,
    head_sem: Mlp,
    head_str: Mlp,
}

impl SegModel {
    /// Register all parameters in a fixed order. The order and names are
    /// part of the checkpoint contract.
    pub fn new<R: Rng>(cfg: SegConfig, store: &mut ParamStore, rng: &mut R) -> Result<SegModel> {
        cfg.validate()?;
        let classes = cfg.label_classes();
        let enc_gcn_w = store.add(
            "enc.gcn.w",
            classes,
            cfg.hidden,
            Init::UniformFanIn { fan_in: classes },
            rng,
        );
        let enc_mlp = Mlp::new(
            store,
            "enc.mlp",
            cfg.hidden,
            &[cfg.hidden, cfg.hidden, cfg.fusion_dim],
            rng,
        );
        let proj_x = (cfg.feature_dim > 0).then(|| {
            store.add(
                "fuse.px.w",
                cfg.feature_dim,
                cfg.fusion_dim,
                Init::UniformFanIn {
                    fan_in: cfg.feature_dim,
                },
                rng,
            )
        });
        let proj_z = store.add(
            "fuse.pz.w",
            cfg.fusion_dim,
            cfg.fusion_dim,
            Init::UniformFanIn {
                fan_in: cfg.fusion_dim,
            },
            rng,
        );
        let fuse_mlp = Mlp::new(
            store,
            "fuse.mlp",
            cfg.fusion_dim,
            &[cfg.fusion_dim, cfg.fusion_dim],
            rng,
        );
        let mut backbone = Vec::with_capacity(cfg.backbone_layers);
        let mut in_dim = cfg.fusion_dim;
        for l in 0..cfg.backbone_layers {
            match cfg.backbone {
                BackboneKind::Sage => {
                    let w_self = store.add(
                        &format!("bb.{l}.self.w"),
                        in_dim,
                        cfg.hidden,
                        Init::UniformFanIn { fan_in: in_dim },
                        rng,
                    );
                    let w_neigh = store.add(
                        &format!("bb.{l}.neigh.w"),
                        in_dim,
                        cfg.hidden,
                        Init::UniformFanIn { fan_in: in_dim },
                        rng,
                    );
                    backbone.push(BackboneLayer::Sage { w_self, w_neigh });
                }
                BackboneKind::Gcn => {
                    let w = store.add(
                        &format!("bb.{l}.w"),
                        in_dim,
                        cfg.hidden,
                        Init::UniformFanIn { fan_in: in_dim },
                        rng,
                    );
                    backbone.push(BackboneLayer::Gcn { w });
                }
            }
            in_dim = cfg.hidden;
        }
        let sem_in = cfg.sortpool_k * cfg.backbone_layers * cfg.hidden;
        let head_sem = Mlp::new(store, "head_sem", sem_in, &[cfg.head_hidden, 1], rng);
        let head_str = Mlp::new(
            store,
            "head_str",
            cfg.fusion_dim,
            &[cfg.head_hidden, 1],
            rng,
        );
        Ok(SegModel {
            cfg,
            enc_gcn_w,
            enc_mlp,
            proj_x,
            proj_z,
            fuse_mlp,
            backbone,
            head_sem,
            head_str,
        })
    }

    /// Fresh model with parameters drawn from the config seed.
    pub fn init(cfg: SegConfig) -> Result<(SegModel, ParamStore)> {
        let mut store = ParamStore::new();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let model = SegModel::new(cfg, &mut store, &mut rng)?;
        Ok((model, store))
    }

    /// One GCN layer over the label one-hots followed by the encoder MLP.
    pub fn structure_encode(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        inst: &SubgraphInstance,
    ) -> Result<Tensor> {
        let n = inst.sub.num_nodes();
        let onehot = tape.leaf(n, self.cfg.label_classes(), inst.onehot.clone())?;
        let g1 = gcn_layer(tape, store, &inst.gcn_adj, onehot, self.enc_gcn_w)?;
        self.enc_mlp.apply(tape, store, g1)
    }

    /// Pairwise structural logit from the elementwise product of two
    /// embedding rows. Commutative in (a, b).
    pub fn structure_logit(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        z: Tensor,
        a: usize,
        b: usize,
    ) -> Result<Tensor> {
        let za = tape.gather_row(z, a)?;
        let zb = tape.gather_row(z, b)?;
        let had = tape.hadamard(za, zb)?;
        self.head_str.apply(tape, store, had)
    }

    /// Project raw features and structural embeddings to a shared width,
    /// add, and mix. A missing feature branch contributes nothing.
    pub fn fuse_features(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        inst: &SubgraphInstance,
        z: Tensor,
    ) -> Result<Tensor> {
        let pz = tape.param(store, self.proj_z);
        let zp = tape.matmul(z, pz)?;
        let pre = match self.proj_x {
            Some(px) => {
                let n = inst.sub.num_nodes();
                let x = tape.leaf(n, self.cfg.feature_dim, inst.feats.clone())?;
                let pxt = tape.param(store, px);
                let xp = tape.matmul(x, pxt)?;
                tape.add(xp, zp)?
            }
            None => zp,
        };
        self.fuse_mlp.apply(tape, store, pre)
    }

    /// Message passing from the fused features, concatenating every layer's
    /// output, pooling to a fixed size, and scoring.
    pub fn semantic_logit(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        inst: &SubgraphInstance,
        fused: Tensor,
    ) -> Result<Tensor> {
        let mut h = fused;
        let mut per_layer = Vec::with_capacity(self.backbone.len());
        for layer in &self.backbone {
            h = match layer {
                BackboneLayer::Sage { w_self, w_neigh } => {
                    sage_layer(tape, store, &inst.agg_adj, h, *w_self, *w_neigh)?
                }
                BackboneLayer::Gcn { w } => gcn_layer(tape, store, &inst.gcn_adj, h, *w)?,
            };
            per_layer.push(h);
        }
        let cat = tape.concat_cols(&per_layer)?;
        let pooled = tape.sort_pool(cat, self.cfg.sortpool_k)?;
        let flat = tape.flatten_row(pooled)?;
        self.head_sem.apply(tape, store, flat)
    }

    /// Full forward over a prepared instance.
    pub fn forward(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        inst: &SubgraphInstance,
    ) -> Result<ForwardOut> {
        let z = self.structure_encode(tape, store, inst)?;
        let logit_str = self.structure_logit(tape, store, z, 0, 1)?;
        let fused = self.fuse_features(tape, store, inst, z)?;
        let logit_sem = self.semantic_logit(tape, store, inst, fused)?;
        let combined = match (self.cfg.use_semantic_head, self.cfg.use_structure_head) {
            (true, true) => tape.add(logit_sem, logit_str)?,
            (true, false) => logit_sem,
            (false, true) => logit_str,
            (false, false) => unreachable!("rejected by validate"),
        };
        let s = tape.sigmoid(combined)?;
        let s_semantic = tape.sigmoid(logit_sem)?;
        let s_structure = tape.sigmoid(logit_str)?;
        Ok(ForwardOut {
            s,
            s_semantic,
            s_structure,
            z,
        })
    }

    /// Score one pair of the full graph. Symmetric in (i, j) by
    /// construction.
    pub fn predict(&self, store: &ParamStore, g: &Graph, i: usize, j: usize) -> Result<SegOutput> {
        let inst = prepare_instance(g, i, j, &self.cfg)?;
        let mut tape = Tape::new();
        let out = self.forward(&mut tape, store, &inst)?;
        Ok(SegOutput {
            s: tape.scalar(out.s),
            s_semantic: tape.scalar(out.s_semantic),
            s_structure: tape.scalar(out.s_structure),
            z: tape.value(out.z).to_vec(),
            z_width: out.z.cols,
        })
    }

    /// Loss and parameter gradients for a single labeled pair.
    pub fn loss_on_instance(
        &self,
        store: &ParamStore,
        inst: &SubgraphInstance,
        y: f64,
    ) -> Result<(f64, Grads)> {
        let mut tape = Tape::new();
        let out = self.forward(&mut tape, store, inst)?;
        let loss = tape.bce(out.s, &[y])?;
        let grads = tape.backward(loss)?;
        Ok((tape.scalar(loss), tape.param_grads(&grads, store)))
    }

    /// Forward-only loss for a single labeled pair.
    pub fn loss_value(&self, store: &ParamStore, inst: &SubgraphInstance, y: f64) -> Result<f64> {
        let mut tape = Tape::new();
        let out = self.forward(&mut tape, store, inst)?;
        let loss = tape.bce(out.s, &[y])?;
        Ok(tape.scalar(loss))
    }
}

/// Mean binary cross entropy of combined scores against 0/1 labels.
pub fn seg_loss(outputs: &[SegOutput], labels: &[f64]) -> Result<f64> {
    if outputs.is_empty() {
        return Err(Error::InvalidInput("loss over an empty batch".into()));
    }
    if outputs.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} outputs vs {} labels",
            outputs.len(),
            labels.len()
        )));
    }
    let mut total = 0.0;
    for (o, y) in outputs.iter().zip(labels.iter()) {
        let s = o.s.clamp(1e-12, 1.0 - 1e-12);
        total += -y * s.ln() - (1.0 - y) * (1.0 - s).ln();
    }
    Ok(total / outputs.len() as f64)
}

/// Feature-only baseline: concatenated endpoint features through an MLP.
/// No graph structure is consulted.
#[derive(Debug, Clone)]
pub struct PairMlpModel {
    pub feature_dim: usize,
    mlp: Mlp,
}

impl PairMlpModel {
    pub fn new<R: Rng>(
        store: &mut ParamStore,
        feature_dim: usize,
        head_hidden: usize,
        rng: &mut R,
    ) -> Result<PairMlpModel> {
        if feature_dim == 0 {
            return Err(Error::InvalidInput(
                "pair-mlp baseline needs node features".into(),
            ));
        }
        let mlp = Mlp::new(store, "pair", 2 * feature_dim, &[head_hidden, 1], rng);
        Ok(PairMlpModel { feature_dim, mlp })
    }

    fn pair_input(&self, g: &Graph, i: usize, j: usize) -> Result<Vec<f64>> {
        if i == j {
            return Err(Error::InvalidPair(format!("i = j = {i}")));
        }
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let f = g
            .features()
            .ok_or_else(|| Error::InvalidInput("graph has no node features".into()))?;
        if f.dim != self.feature_dim {
            return Err(Error::Shape(format!(
                "graph features have width {}, model expects {}",
                f.dim, self.feature_dim
            )));
        }
        if a.max(b) >= g.num_nodes() {
            return Err(Error::Bounds {
                index: a.max(b),
                len: g.num_nodes(),
            });
        }
        let mut x = Vec::with_capacity(2 * f.dim);
        x.extend_from_slice(f.row(a));
        x.extend_from_slice(f.row(b));
        Ok(x)
    }

    pub fn predict(&self, store: &ParamStore, g: &Graph, i: usize, j: usize) -> Result<f64> {
        let x = self.pair_input(g, i, j)?;
        let mut tape = Tape::new();
        let xt = tape.leaf(1, x.len(), x)?;
        let logit = self.mlp.apply(&mut tape, store, xt)?;
        let s = tape.sigmoid(logit)?;
        Ok(tape.scalar(s))
    }

    pub fn loss_on_pair(
        &self,
        store: &ParamStore,
        g: &Graph,
        i: usize,
        j: usize,
        y: f64,
    ) -> Result<(f64, Grads)> {
        let x = self.pair_input(g, i, j)?;
        let mut tape = Tape::new();
        let xt = tape.leaf(1, x.len(), x)?;
        let logit = self.mlp.apply(&mut tape, store, xt)?;
        let s = tape.sigmoid(logit)?;
        let loss = tape.bce(s, &[y])?;
        let grads = tape.backward(loss)?;
        Ok((tape.scalar(loss), tape.param_grads(&grads, store)))
    }
}

/// Named model variants. All but the feature-only baseline are the same
/// network under different config switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Both heads, path labels, mean-aggregator backbone.
    Seg,
    /// Structure head only.
    SegSe,
    /// Semantic head only; structural embeddings still feed fusion.
    SegGnn,
    /// Distance-based labels instead of path labels.
    SegDrnl,
    /// Graph-convolution backbone instead of the mean aggregator.
    SegGcn,
    /// Endpoint-feature MLP that ignores graph structure.
    PairMlp,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<ModelKind> {
        match name {
            "seg" => Ok(ModelKind::Seg),
            "seg-se" => Ok(ModelKind::SegSe),
            "seg-gnn" => Ok(ModelKind::SegGnn),
            "seg-drnl" => Ok(ModelKind::SegDrnl),
            "seg-gcn" => Ok(ModelKind::SegGcn),
            "pair-mlp" => Ok(ModelKind::PairMlp),
            other => Err(Error::InvalidInput(format!(
                "unknown model {other:?}; expected one of seg, seg-se, seg-gnn, seg-drnl, seg-gcn, pair-mlp"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Seg => "seg",
            ModelKind::SegSe => "seg-se",
            ModelKind::SegGnn => "seg-gnn",
            ModelKind::SegDrnl => "seg-drnl",
            ModelKind::SegGcn => "seg-gcn",
            ModelKind::PairMlp => "pair-mlp",
        }
    }

    /// Rewrite a base config with this variant's switches.
    pub fn apply(&self, mut cfg: SegConfig) -> SegConfig {
        match self {
            ModelKind::Seg | ModelKind::PairMlp => {}
            ModelKind::SegSe => {
                cfg.use_semantic_head = false;
                cfg.use_structure_head = true;
            }
            ModelKind::SegGnn => {
                cfg.use_semantic_head = true;
                cfg.use_structure_head = false;
            }
            ModelKind::SegDrnl => cfg.labeling = LabelScheme::Drnl,
            ModelKind::SegGcn => cfg.backbone = BackboneKind::Gcn,
        }
        cfg
    }
}

/// A scoring model behind one interface, so training and evaluation never
/// branch on the variant.
#[derive(Debug, Clone)]
pub enum Model {
    Seg(SegModel),
    PairMlp(PairMlpModel),
}

impl Model {
    /// Build the variant's network, registering parameters into `store`.
    pub fn build<R: Rng>(
        kind: ModelKind,
        cfg: &SegConfig,
        store: &mut ParamStore,
        rng: &mut R,
    ) -> Result<Model> {
        let cfg = kind.apply(cfg.clone());
        match kind {
            ModelKind::PairMlp => Ok(Model::PairMlp(PairMlpModel::new(
                store,
                cfg.feature_dim,
                cfg.head_hidden,
                rng,
            )?)),
            _ => Ok(Model::Seg(SegModel::new(cfg, store, rng)?)),
        }
    }

    /// Fresh model and parameter store from the config seed.
    pub fn init(kind: ModelKind, cfg: &SegConfig) -> Result<(Model, ParamStore)> {
        let mut store = ParamStore::new();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let model = Model::build(kind, cfg, &mut store, &mut rng)?;
        Ok((model, store))
    }

    pub fn score(&self, store: &ParamStore, g: &Graph, i: usize, j: usize) -> Result<f64> {
        match self {
            Model::Seg(m) => Ok(m.predict(store, g, i, j)?.s),
            Model::PairMlp(m) => m.predict(store, g, i, j),
        }
    }

    pub fn loss_and_grads(
        &self,
        store: &ParamStore,
        g: &Graph,
        i: usize,
        j: usize,
        y: f64,
    ) -> Result<(f64, Grads)> {
        match self {
            Model::Seg(m) => {
                let inst = prepare_instance(g, i, j, &m.cfg)?;
                m.loss_on_instance(store, &inst, y)
            }
            Model::PairMlp(m) => m.loss_on_pair(store, g, i, j, y),
        }
    }

    pub fn config(&self) -> Option<&SegConfig> {
        match self {
            Model::Seg(m) => Some(&m.cfg),
            Model::PairMlp(_) => None,
        }
    }
}
