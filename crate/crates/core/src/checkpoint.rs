//! Checkpoints: JSON carrying the config echo plus every parameter value.
//! Values survive the round trip bit for bit; optimizer moments do not
//! persist, so resumed training restarts Adam's state.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Model, ModelKind, SegConfig};
use crate::nn::params::ParamStore;

pub const CHECKPOINT_FORMAT: &str = "seg-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ParamRecord {
    name: String,
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointFile {
    format: String,
    version: u32,
    model: String,
    config: SegConfig,
    params: Vec<ParamRecord>,
}

/// Serialize a trained (or freshly initialized) model.
pub fn checkpoint_to_json(
    kind: ModelKind,
    cfg: &SegConfig,
    store: &ParamStore,
) -> Result<String> {
    let params = store
        .iter()
        .map(|(_, p)| ParamRecord {
            name: p.name.clone(),
            rows: p.rows,
            cols: p.cols,
            values: p.data.as_ref().clone(),
        })
        .collect();
    let file = CheckpointFile {
        format: CHECKPOINT_FORMAT.into(),
        version: CHECKPOINT_VERSION,
        model: kind.name().into(),
        config: kind.apply(cfg.clone()),
        params,
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

#[derive(Debug)]
pub struct LoadedCheckpoint {
    pub kind: ModelKind,
    pub config: SegConfig,
    pub model: Model,
    pub store: ParamStore,
}

/// Rebuild a model from checkpoint text. The network skeleton comes from
/// the embedded config; every stored tensor must match it by name and
/// shape, exactly once each.
pub fn checkpoint_from_json(text: &str) -> Result<LoadedCheckpoint> {
    let file: CheckpointFile = serde_json::from_str(text)?;
    if file.format != CHECKPOINT_FORMAT {
        return Err(Error::Format(format!(
            "expected format {CHECKPOINT_FORMAT}, found {}",
            file.format
        )));
    }
    if file.version != CHECKPOINT_VERSION {
        return Err(Error::Format(format!(
            "unsupported checkpoint version {}",
            file.version
        )));
    }
    let kind = ModelKind::parse(&file.model)?;
    let config = file.config;
    config.validate()?;
    let mut store = ParamStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let model = Model::build(kind, &config, &mut store, &mut rng)?;
    if file.params.len() != store.len() {
        return Err(Error::Format(format!(
            "checkpoint holds {} tensors, model defines {}",
            file.params.len(),
            store.len()
        )));
    }
    let mut seen: HashSet<String> = HashSet::new();
    for rec in file.params {
        if !seen.insert(rec.name.clone()) {
            return Err(Error::Format(format!("duplicate tensor {}", rec.name)));
        }
        let id = store
            .id_of(&rec.name)
            .ok_or_else(|| Error::Format(format!("unknown tensor {}", rec.name)))?;
        let p = store.get(id);
        if (p.rows, p.cols) != (rec.rows, rec.cols) {
            return Err(Error::Format(format!(
                "tensor {} is {}x{} in the checkpoint but {}x{} in the model",
                rec.name, rec.rows, rec.cols, p.rows, p.cols
            )));
        }
        if rec.values.len() != rec.rows * rec.cols {
            return Err(Error::Format(format!(
                "tensor {} declares {}x{} but carries {} values",
                rec.name,
                rec.rows,
                rec.cols,
                rec.values.len()
            )));
        }
        if rec.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format(format!(
                "tensor {} holds non-finite values",
                rec.name
            )));
        }
        store.set_values(id, rec.values);
    }
    Ok(LoadedCheckpoint {
        kind,
        config,
        model,
        store,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use rand::Rng;

    fn fixture() -> (Graph, SegConfig) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0), (1, 4)],
        );
        let data: Vec<f64> = (0..7 * 3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g = g.with_features(3, data).unwrap();
        let cfg = SegConfig {
            hidden: 4,
            fusion_dim: 4,
            head_hidden: 8,
            sortpool_k: 4,
            feature_dim: 3,
            seed: 21,
            ..SegConfig::default()
        };
        (g, cfg)
    }

    #[test]
    fn round_trip_is_bitwise_exact() {
        let (g, cfg) = fixture();
        let (model, store) = Model::init(ModelKind::Seg, &cfg).unwrap();
        let json = checkpoint_to_json(ModelKind::Seg, &cfg, &store).unwrap();
        let loaded = checkpoint_from_json(&json).unwrap();
        assert_eq!(loaded.kind, ModelKind::Seg);
        assert_eq!(store.len(), loaded.store.len());
        for ((_, a), (_, b)) in store.iter().zip(loaded.store.iter()) {
            assert_eq!(a.name, b.name);
            let bits = |p: &crate::nn::params::Param| -> Vec<u64> {
                p.data.iter().map(|v| v.to_bits()).collect()
            };
            assert_eq!(bits(a), bits(b), "{}", a.name);
        }
        let before = model.score(&store, &g, 2, 5).unwrap();
        let after = loaded.model.score(&loaded.store, &g, 2, 5).unwrap();
        assert_eq!(before.to_bits(), after.to_bits());
    }

    #[test]
    fn pair_mlp_round_trips() {
        let (g, mut cfg) = fixture();
        cfg.use_structure_head = true;
        let (model, store) = Model::init(ModelKind::PairMlp, &cfg).unwrap();
        let json = checkpoint_to_json(ModelKind::PairMlp, &cfg, &store).unwrap();
        let loaded = checkpoint_from_json(&json).unwrap();
        let before = model.score(&store, &g, 1, 6).unwrap();
        let after = loaded.model.score(&loaded.store, &g, 1, 6).unwrap();
        assert_eq!(before.to_bits(), after.to_bits());
    }

    #[test]
    fn corrupted_checkpoints_are_rejected() {
        let (_, cfg) = fixture();
        let (_, store) = Model::init(ModelKind::Seg, &cfg).unwrap();
        let json = checkpoint_to_json(ModelKind::Seg, &cfg, &store).unwrap();

        let wrong_format = json.replacen("seg-checkpoint", "other", 1);
        assert!(matches!(
            checkpoint_from_json(&wrong_format),
            Err(Error::Format(_))
        ));

        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        v["params"][0]["rows"] = serde_json::json!(999);
        let bad_shape = serde_json::to_string(&v).unwrap();
        assert!(matches!(
            checkpoint_from_json(&bad_shape),
            Err(Error::Format(_))
        ));

        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        v["params"][0]["name"] = serde_json::json!("nope.w");
        let bad_name = serde_json::to_string(&v).unwrap();
        assert!(matches!(
            checkpoint_from_json(&bad_name),
            Err(Error::Format(_))
        ));

        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let arr = v["params"].as_array_mut().unwrap();
        arr.pop();
        let missing = serde_json::to_string(&v).unwrap();
        assert!(matches!(
            checkpoint_from_json(&missing),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn ablation_kind_survives_round_trip() {
        let (g, cfg) = fixture();
        let (model, store) = Model::init(ModelKind::SegSe, &cfg).unwrap();
        let json = checkpoint_to_json(ModelKind::SegSe, &cfg, &store).unwrap();
        let loaded = checkpoint_from_json(&json).unwrap();
        assert_eq!(loaded.kind, ModelKind::SegSe);
        assert!(!loaded.config.use_semantic_head);
        let before = model.score(&store, &g, 0, 3).unwrap();
        let after = loaded.model.score(&loaded.store, &g, 0, 3).unwrap();
        assert_eq!(before.to_bits(), after.to_bits());
    }
}
