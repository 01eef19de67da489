//! Layer builders over the tape: affine maps, MLP stacks, and the two
//! message-passing layers used by the link predictor.

use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::graph::Graph;
use crate::nn::params::{Init, ParamId, ParamStore};
use crate::nn::tape::{SparseMatrix, Tape, Tensor};

/// Affine map x * W (+ b). Weights are [in, out]; bias is a broadcast row.
#[derive(Debug, Clone)]
pub struct Linear {
    pub w: ParamId,
    pub b: Option<ParamId>,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl Linear {
    pub fn new<R: Rng>(
        store: &mut ParamStore,
        name: &str,
        in_dim: usize,
        out_dim: usize,
        bias: bool,
        rng: &mut R,
    ) -> Linear {
        let w = store.add(
            &format!("{name}.w"),
            in_dim,
            out_dim,
            Init::UniformFanIn { fan_in: in_dim },
            rng,
        );
        let b = bias.then(|| store.add(&format!("{name}.b"), 1, out_dim, Init::Zeros, rng));
        Linear {
            w,
            b,
            in_dim,
            out_dim,
        }
    }

    pub fn apply(&self, tape: &mut Tape, store: &ParamStore, x: Tensor) -> Result<Tensor> {
        let w = tape.param(store, self.w);
        let y = tape.matmul(x, w)?;
        match self.b {
            Some(b) => {
                let bt = tape.param(store, b);
                tape.add_row(y, bt)
            }
            None => Ok(y),
        }
    }
}

/// Affine stack with ReLU between layers and a linear final layer.
/// `widths` lists every output width including the last.
#[derive(Debug, Clone)]
pub struct Mlp {
    pub layers: Vec<Linear>,
}

impl Mlp {
    pub fn new<R: Rng>(
        store: &mut ParamStore,
        name: &str,
        in_dim: usize,
        widths: &[usize],
        rng: &mut R,
    ) -> Mlp {
        assert!(!widths.is_empty(), "mlp needs at least one layer");
        let mut layers = Vec::with_capacity(widths.len());
        let mut prev = in_dim;
        for (i, &w) in widths.iter().enumerate() {
            layers.push(Linear::new(store, &format!("{name}.{i}"), prev, w, true, rng));
            prev = w;
        }
        Mlp { layers }
    }

    pub fn apply(&self, tape: &mut Tape, store: &ParamStore, x: Tensor) -> Result<Tensor> {
        let mut h = x;
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            h = layer.apply(tape, store, h)?;
            if i < last {
                h = tape.relu(h)?;
            }
        }
        Ok(h)
    }

    pub fn out_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim
    }
}

/// Symmetrically normalized adjacency with self loops:
/// D^{-1/2} (A + I) D^{-1/2} where D counts the self loop.
pub fn gcn_norm(g: &Graph) -> SparseMatrix {
    let n = g.num_nodes();
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|u| 1.0 / ((g.degree(u).unwrap() + 1) as f64).sqrt())
        .collect();
    let mut rows = Vec::with_capacity(n);
    for u in 0..n {
        let neigh = g.neighbors(u).unwrap();
        let mut row = Vec::with_capacity(neigh.len() + 1);
        let mut self_added = false;
        for &v in neigh {
            if !self_added && v > u {
                row.push((u, inv_sqrt[u] * inv_sqrt[u]));
                self_added = true;
            }
            row.push((v, inv_sqrt[u] * inv_sqrt[v]));
        }
        if !self_added {
            row.push((u, inv_sqrt[u] * inv_sqrt[u]));
        }
        rows.push(row);
    }
    SparseMatrix::from_rows(n, &rows)
}

/// Row-normalized adjacency (mean over neighbors). Isolated nodes get an
/// empty row, so their aggregated message is the zero vector.
pub fn mean_agg(g: &Graph) -> SparseMatrix {
    let n = g.num_nodes();
    let mut rows = Vec::with_capacity(n);
    for u in 0..n {
        let neigh = g.neighbors(u).unwrap();
        let inv = if neigh.is_empty() {
            0.0
        } else {
            1.0 / neigh.len() as f64
        };
        rows.push(neigh.iter().map(|&v| (v, inv)).collect());
    }
    SparseMatrix::from_rows(n, &rows)
}

/// Graph convolution: ReLU(norm_adj * H * W). No bias.
pub fn gcn_layer(
    tape: &mut Tape,
    store: &ParamStore,
    norm_adj: &Arc<SparseMatrix>,
    h: Tensor,
    w: ParamId,
) -> Result<Tensor> {
    let agg = tape.spmm(Arc::clone(norm_adj), h)?;
    let wt = tape.param(store, w);
    let hw = tape.matmul(agg, wt)?;
    tape.relu(hw)
}

/// Mean-aggregator convolution:
/// ReLU(H * W_self + (mean_adj * H) * W_neigh). No bias.
pub fn sage_layer(
    tape: &mut Tape,
    store: &ParamStore,
    mean_adj: &Arc<SparseMatrix>,
    h: Tensor,
    w_self: ParamId,
    w_neigh: ParamId,
) -> Result<Tensor> {
    let ws = tape.param(store, w_self);
    let own = tape.matmul(h, ws)?;
    let agg = tape.spmm(Arc::clone(mean_adj), h)?;
    let wn = tape.param(store, w_neigh);
    let msg = tape.matmul(agg, wn)?;
    let sum = tape.add(own, msg)?;
    tape.relu(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dense(sm: &SparseMatrix, n: usize) -> Vec<f64> {
        // Apply to identity columns to recover the dense matrix.
        let mut tape = Tape::new();
        let mut eye = vec![0.0; n * n];
        for i in 0..n {
            eye[i * n + i] = 1.0;
        }
        let h = tape.leaf(n, n, eye).unwrap();
        let out = tape.spmm(Arc::new(sm.clone()), h).unwrap();
        tape.value(out).to_vec()
    }

    #[test]
    fn gcn_norm_matches_dense_oracle() {
        // Path graph 0-1-2.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let got = dense(&gcn_norm(&g), 3);
        let deg = [2.0f64, 3.0, 2.0];
        let mut want = vec![0.0; 9];
        let adj = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 0), (1, 1), (2, 2)];
        for (i, j) in adj {
            want[i * 3 + j] = 1.0 / (deg[i] * deg[j]).sqrt();
        }
        for (a, b) in got.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-10, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn gcn_norm_rows_of_regular_graph_sum_to_one() {
        // Triangle: every degree 2, normalized rows sum to exactly 1.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let d = dense(&gcn_norm(&g), 3);
        for i in 0..3 {
            let s: f64 = d[i * 3..(i + 1) * 3].iter().sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn mean_agg_isolated_node_gets_zero_row() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let d = dense(&mean_agg(&g), 3);
        assert_eq!(&d[6..9], &[0.0, 0.0, 0.0]);
        assert_eq!(&d[0..3], &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn sage_layer_zero_neighbors_uses_self_only() {
        let g = Graph::from_edges(2, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut store = ParamStore::new();
        let ws = store.add("ws", 2, 2, Init::UniformFanIn { fan_in: 2 }, &mut rng);
        let wn = store.add("wn", 2, 2, Init::UniformFanIn { fan_in: 2 }, &mut rng);
        let adj = Arc::new(mean_agg(&g));
        let mut tape = Tape::new();
        let h = tape.leaf(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let out = sage_layer(&mut tape, &store, &adj, h, ws, wn).unwrap();
        // With no edges the neighbor term vanishes: out = relu(h * ws).
        let mut tape2 = Tape::new();
        let h2 = tape2.leaf(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let wst = tape2.param(&store, ws);
        let own = tape2.matmul(h2, wst).unwrap();
        let want = tape2.relu(own).unwrap();
        assert_eq!(tape.value(out), tape2.value(want));
    }

    #[test]
    fn mlp_final_layer_is_linear() {
        // A final ReLU would clamp at zero; negative outputs prove linearity.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut store = ParamStore::new();
        let mlp = Mlp::new(&mut store, "m", 3, &[4, 1], &mut rng);
        let mut saw_negative = false;
        for seed in 0..32 {
            let mut tape = Tape::new();
            let mut xr = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..3).map(|_| xr.random_range(-2.0..2.0)).collect();
            let xt = tape.leaf(1, 3, x).unwrap();
            let y = mlp.apply(&mut tape, &store, xt).unwrap();
            if tape.scalar(y) < 0.0 {
                saw_negative = true;
            }
        }
        assert!(saw_negative);
    }

    #[test]
    fn linear_bias_is_applied_per_row() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut store = ParamStore::new();
        let lin = Linear::new(&mut store, "l", 2, 2, true, &mut rng);
        store.set_values(lin.w, vec![0.0; 4]);
        store.set_values(lin.b.unwrap(), vec![1.0, -1.0]);
        let mut tape = Tape::new();
        let x = tape.leaf(3, 2, vec![0.5; 6]).unwrap();
        let y = lin.apply(&mut tape, &store, x).unwrap();
        assert_eq!(tape.value(y), &[1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
    }
}
