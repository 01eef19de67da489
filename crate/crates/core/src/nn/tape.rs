//! Recorded computation tape for reverse-mode differentiation over dense
//! matrices. Every op evaluates eagerly, records itself, and validates that
//! its output is finite; `backward` walks the record once in reverse.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nn::params::{Grads, ParamId, ParamStore};

/// Handle to a value on the tape. Shapes are two-dimensional; scalars are
/// 1x1 and row vectors 1xN.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tensor {
    pub(crate) id: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Tensor {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sparse row matrix with explicit coefficients, used for neighborhood
/// aggregation. Column indices are sorted within each row.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    /// Build from per-row (col, value) entries, each row sorted by column.
    pub fn from_rows(n_cols: usize, rows: &[Vec<(usize, f64)>]) -> SparseMatrix {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            for &(c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            offsets.push(cols.len());
        }
        SparseMatrix {
            n_rows: rows.len(),
            n_cols,
            offsets,
            cols,
            vals,
        }
    }

    fn mul_dense(&self, h: &[f64], h_cols: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows * h_cols];
        for u in 0..self.n_rows {
            let orow = &mut out[u * h_cols..(u + 1) * h_cols];
            for e in self.offsets[u]..self.offsets[u + 1] {
                let (c, w) = (self.cols[e], self.vals[e]);
                let hrow = &h[c * h_cols..(c + 1) * h_cols];
                for k in 0..h_cols {
                    orow[k] += w * hrow[k];
                }
            }
        }
        out
    }

    /// Transpose application: out = self^T * d.
    fn tr_mul_dense(&self, d: &[f64], d_cols: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n_cols * d_cols];
        for u in 0..self.n_rows {
            let drow = &d[u * d_cols..(u + 1) * d_cols];
            for e in self.offsets[u]..self.offsets[u + 1] {
                let (c, w) = (self.cols[e], self.vals[e]);
                let orow = &mut out[c * d_cols..(c + 1) * d_cols];
                for k in 0..d_cols {
                    orow[k] += w * drow[k];
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
enum OpKind {
    Leaf,
    Param(ParamId),
    Matmul(Tensor, Tensor),
    Add(Tensor, Tensor),
    AddRow(Tensor, Tensor),
    Hadamard(Tensor, Tensor),
    Relu(Tensor),
    Sigmoid(Tensor),
    Spmm(Arc<SparseMatrix>, Tensor),
    ConcatCols(Vec<Tensor>),
    SortPool { input: Tensor, kept: Vec<usize> },
    GatherRow(Tensor, usize),
    FlattenRow(Tensor),
    Sum(Tensor),
    Bce { scores: Tensor, labels: Arc<Vec<f64>> },
}

impl OpKind {
    fn name(&self) -> &'static str {
        match self {
            OpKind::Leaf => "leaf",
            OpKind::Param(_) => "param",
            OpKind::Matmul(..) => "matmul",
            OpKind::Add(..) => "add",
            OpKind::AddRow(..) => "add_row",
            OpKind::Hadamard(..) => "hadamard",
            OpKind::Relu(_) => "relu",
            OpKind::Sigmoid(_) => "sigmoid",
            OpKind::Spmm(..) => "spmm",
            OpKind::ConcatCols(_) => "concat_cols",
            OpKind::SortPool { .. } => "sort_pool",
            OpKind::GatherRow(..) => "gather_row",
            OpKind::FlattenRow(_) => "flatten_row",
            OpKind::Sum(_) => "sum",
            OpKind::Bce { .. } => "bce",
        }
    }
}

struct Node {
    rows: usize,
    cols: usize,
    data: Arc<Vec<f64>>,
    op: OpKind,
}

/// Gradients with respect to every tape node touched by backward.
pub struct Gradients {
    by_node: Vec<Option<Vec<f64>>>,
}

impl Gradients {
    pub fn wrt(&self, t: Tensor) -> Option<&[f64]> {
        self.by_node[t.id].as_deref()
    }
}

const BCE_CLAMP: f64 = 1e-12;

#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

impl Tape {
    pub fn new() -> Tape {
        Tape { nodes: Vec::new() }
    }

    pub fn value(&self, t: Tensor) -> &[f64] {
        &self.nodes[t.id].data
    }

    pub fn scalar(&self, t: Tensor) -> f64 {
        self.nodes[t.id].data[0]
    }

    fn push(&mut self, rows: usize, cols: usize, data: Vec<f64>, op: OpKind) -> Result<Tensor> {
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite values produced by op {}",
                op.name()
            )));
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            rows,
            cols,
            data: Arc::new(data),
            op,
        });
        Ok(Tensor { id, rows, cols })
    }

    pub fn leaf(&mut self, rows: usize, cols: usize, data: Vec<f64>) -> Result<Tensor> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "leaf data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        self.push(rows, cols, data, OpKind::Leaf)
    }

    /// Insert a parameter as a leaf; shares the store's buffer.
    pub fn param(&mut self, store: &ParamStore, id: ParamId) -> Tensor {
        let p = store.get(id);
        let t = Tensor {
            id: self.nodes.len(),
            rows: p.rows,
            cols: p.cols,
        };
        self.nodes.push(Node {
            rows: p.rows,
            cols: p.cols,
            data: Arc::clone(&p.data),
            op: OpKind::Param(id),
        });
        t
    }

    pub fn matmul(&mut self, a: Tensor, b: Tensor) -> Result<Tensor> {
        if a.cols != b.rows {
            return Err(Error::Shape(format!(
                "matmul {}x{} by {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let out = matmul_nn(
            &self.nodes[a.id].data,
            a.rows,
            a.cols,
            &self.nodes[b.id].data,
            b.cols,
        );
        self.push(a.rows, b.cols, out, OpKind::Matmul(a, b))
    }

    pub fn add(&mut self, a: Tensor, b: Tensor) -> Result<Tensor> {
        if (a.rows, a.cols) != (b.rows, b.cols) {
            return Err(Error::Shape(format!(
                "add {}x{} vs {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let da = &self.nodes[a.id].data;
        let db = &self.nodes[b.id].data;
        let out: Vec<f64> = da.iter().zip(db.iter()).map(|(x, y)| x + y).collect();
        self.push(a.rows, a.cols, out, OpKind::Add(a, b))
    }

    /// Broadcast a 1xC row over every row of `a`.
    pub fn add_row(&mut self, a: Tensor, row: Tensor) -> Result<Tensor> {
        if row.rows != 1 || row.cols != a.cols {
            return Err(Error::Shape(format!(
                "add_row {}x{} with row {}x{}",
                a.rows, a.cols, row.rows, row.cols
            )));
        }
        let da = &self.nodes[a.id].data;
        let dr = &self.nodes[row.id].data;
        let mut out = Vec::with_capacity(da.len());
        for r in 0..a.rows {
            for c in 0..a.cols {
                out.push(da[r * a.cols + c] + dr[c]);
            }
        }
        self.push(a.rows, a.cols, out, OpKind::AddRow(a, row))
    }

    pub fn hadamard(&mut self, a: Tensor, b: Tensor) -> Result<Tensor> {
        if (a.rows, a.cols) != (b.rows, b.cols) {
            return Err(Error::Shape(format!(
                "hadamard {}x{} vs {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let da = &self.nodes[a.id].data;
        let db = &self.nodes[b.id].data;
        let out: Vec<f64> = da.iter().zip(db.iter()).map(|(x, y)| x * y).collect();
        self.push(a.rows, a.cols, out, OpKind::Hadamard(a, b))
    }

    pub fn relu(&mut self, a: Tensor) -> Result<Tensor> {
        let out: Vec<f64> = self.nodes[a.id].data.iter().map(|&x| x.max(0.0)).collect();
        self.push(a.rows, a.cols, out, OpKind::Relu(a))
    }

    pub fn sigmoid(&mut self, a: Tensor) -> Result<Tensor> {
        let out: Vec<f64> = self.nodes[a.id].data.iter().map(|&x| stable_sigmoid(x)).collect();
        self.push(a.rows, a.cols, out, OpKind::Sigmoid(a))
    }

    /// Sparse-dense product: adj [R x C] times h [C x F].
    pub fn spmm(&mut self, adj: Arc<SparseMatrix>, h: Tensor) -> Result<Tensor> {
        if adj.n_cols != h.rows {
            return Err(Error::Shape(format!(
                "spmm {}x{} by {}x{}",
                adj.n_rows, adj.n_cols, h.rows, h.cols
            )));
        }
        let out = adj.mul_dense(&self.nodes[h.id].data, h.cols);
        let rows = adj.n_rows;
        self.push(rows, h.cols, out, OpKind::Spmm(adj, h))
    }

    pub fn concat_cols(&mut self, parts: &[Tensor]) -> Result<Tensor> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("concat_cols of zero tensors".into()));
        }
        let rows = parts[0].rows;
        if parts.iter().any(|p| p.rows != rows) {
            return Err(Error::Shape("concat_cols row mismatch".into()));
        }
        let total_cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Vec::with_capacity(rows * total_cols);
        for r in 0..rows {
            for p in parts {
                let d = &self.nodes[p.id].data;
                out.extend_from_slice(&d[r * p.cols..(r + 1) * p.cols]);
            }
        }
        self.push(rows, total_cols, out, OpKind::ConcatCols(parts.to_vec()))
    }

    /// Sort rows descending by last channel, breaking ties by the
    /// next-to-last channel and then by row index; keep the top `k` rows and
    /// zero-pad when fewer exist. Output is always k x cols.
    pub fn sort_pool(&mut self, h: Tensor, k: usize) -> Result<Tensor> {
        if k < 1 {
            return Err(Error::InvalidInput("sort_pool k must be >= 1".into()));
        }
        let (n, c) = (h.rows, h.cols);
        let data = Arc::clone(&self.nodes[h.id].data);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| {
            let key = |r: usize, off: usize| data[r * c + (c - 1 - off)];
            key(y, 0)
                .partial_cmp(&key(x, 0))
                .unwrap()
                .then_with(|| {
                    if c >= 2 {
                        key(y, 1).partial_cmp(&key(x, 1)).unwrap()
                    } else {
                        std::cmp::Ordering::Equal
                    }
                })
                .then_with(|| x.cmp(&y))
        });
        let kept: Vec<usize> = order.into_iter().take(k).collect();
        let mut out = vec![0.0; k * c];
        for (p, &r) in kept.iter().enumerate() {
            out[p * c..(p + 1) * c].copy_from_slice(&data[r * c..(r + 1) * c]);
        }
        self.push(k, c, out, OpKind::SortPool { input: h, kept })
    }

    pub fn gather_row(&mut self, h: Tensor, row: usize) -> Result<Tensor> {
        if row >= h.rows {
            return Err(Error::Shape(format!(
                "gather_row {} from {}x{}",
                row, h.rows, h.cols
            )));
        }
        let d = &self.nodes[h.id].data;
        let out = d[row * h.cols..(row + 1) * h.cols].to_vec();
        self.push(1, h.cols, out, OpKind::GatherRow(h, row))
    }

    /// Reshape to a single row, row-major order.
    pub fn flatten_row(&mut self, h: Tensor) -> Result<Tensor> {
        let out = self.nodes[h.id].data.as_ref().clone();
        self.push(1, h.len(), out, OpKind::FlattenRow(h))
    }

    pub fn sum(&mut self, a: Tensor) -> Result<Tensor> {
        let s: f64 = self.nodes[a.id].data.iter().sum();
        self.push(1, 1, vec![s], OpKind::Sum(a))
    }

    /// Mean binary cross entropy of probability scores against 0/1 labels.
    /// Scores are clamped away from 0 and 1 by 1e-12 before the logs.
    pub fn bce(&mut self, scores: Tensor, labels: &[f64]) -> Result<Tensor> {
        let n = scores.len();
        if n == 0 || labels.is_empty() {
            return Err(Error::InvalidInput("bce over an empty batch".into()));
        }
        if labels.len() != n {
            return Err(Error::Shape(format!(
                "bce: {} scores vs {} labels",
                n,
                labels.len()
            )));
        }
        let d = &self.nodes[scores.id].data;
        let mut total = 0.0;
        for (s, y) in d.iter().zip(labels.iter()) {
            let s = s.clamp(BCE_CLAMP, 1.0 - BCE_CLAMP);
            total += -y * s.ln() - (1.0 - y) * (1.0 - s).ln();
        }
        let loss = total / n as f64;
        self.push(
            1,
            1,
            vec![loss],
            OpKind::Bce {
                scores,
                labels: Arc::new(labels.to_vec()),
            },
        )
    }

    /// Reverse-mode gradients of a scalar loss with respect to every node.
    pub fn backward(&self, loss: Tensor) -> Result<Gradients> {
        if loss.rows != 1 || loss.cols != 1 {
            return Err(Error::Shape(format!(
                "backward needs a scalar loss, got {}x{}",
                loss.rows, loss.cols
            )));
        }
        let mut grads: Vec<Option<Vec<f64>>> = vec![None; self.nodes.len()];
        grads[loss.id] = Some(vec![1.0]);

        for id in (0..=loss.id).rev() {
            let Some(grad) = grads[id].take() else {
                continue;
            };
            let node = &self.nodes[id];
            match &node.op {
                OpKind::Leaf | OpKind::Param(_) => {
                    grads[id] = Some(grad);
                    continue;
                }
                OpKind::Matmul(a, b) => {
                    let (da, db) = {
                        let av = &self.nodes[a.id].data;
                        let bv = &self.nodes[b.id].data;
                        (
                            matmul_nt(&grad, a.rows, b.cols, bv, b.rows),
                            matmul_tn(av, a.rows, a.cols, &grad, b.cols),
                        )
                    };
                    accumulate(&mut grads, a.id, &da);
                    accumulate(&mut grads, b.id, &db);
                }
                OpKind::Add(a, b) => {
                    accumulate(&mut grads, a.id, &grad);
                    accumulate(&mut grads, b.id, &grad);
                }
                OpKind::AddRow(a, row) => {
                    accumulate(&mut grads, a.id, &grad);
                    let mut drow = vec![0.0; row.cols];
                    for r in 0..a.rows {
                        for c in 0..a.cols {
                            drow[c] += grad[r * a.cols + c];
                        }
                    }
                    accumulate(&mut grads, row.id, &drow);
                }
                OpKind::Hadamard(a, b) => {
                    let da: Vec<f64> = grad
                        .iter()
                        .zip(self.nodes[b.id].data.iter())
                        .map(|(g, y)| g * y)
                        .collect();
                    let db: Vec<f64> = grad
                        .iter()
                        .zip(self.nodes[a.id].data.iter())
                        .map(|(g, x)| g * x)
                        .collect();
                    accumulate(&mut grads, a.id, &da);
                    accumulate(&mut grads, b.id, &db);
                }
                OpKind::Relu(a) => {
                    let da: Vec<f64> = grad
                        .iter()
                        .zip(node.data.iter())
                        .map(|(g, out)| if *out > 0.0 { *g } else { 0.0 })
                        .collect();
                    accumulate(&mut grads, a.id, &da);
                }
                OpKind::Sigmoid(a) => {
                    let da: Vec<f64> = grad
                        .iter()
                        .zip(node.data.iter())
                        .map(|(g, s)| g * s * (1.0 - s))
                        .collect();
                    accumulate(&mut grads, a.id, &da);
                }
                OpKind::Spmm(adj, h) => {
                    let dh = adj.tr_mul_dense(&grad, h.cols);
                    accumulate(&mut grads, h.id, &dh);
                }
                OpKind::ConcatCols(parts) => {
                    let rows = node.rows;
                    let total = node.cols;
                    let mut off = 0;
                    for p in parts {
                        let mut dp = vec![0.0; p.rows * p.cols];
                        for r in 0..rows {
                            for c in 0..p.cols {
                                dp[r * p.cols + c] = grad[r * total + off + c];
                            }
                        }
                        accumulate(&mut grads, p.id, &dp);
                        off += p.cols;
                    }
                }
                OpKind::SortPool { input, kept } => {
                    let c = input.cols;
                    let mut din = vec![0.0; input.rows * c];
                    for (p, &r) in kept.iter().enumerate() {
                        for k in 0..c {
                            din[r * c + k] += grad[p * c + k];
                        }
                    }
                    accumulate(&mut grads, input.id, &din);
                }
                OpKind::GatherRow(h, row) => {
                    let mut dh = vec![0.0; h.rows * h.cols];
                    dh[row * h.cols..(row + 1) * h.cols].copy_from_slice(&grad);
                    accumulate(&mut grads, h.id, &dh);
                }
                OpKind::FlattenRow(h) => {
                    accumulate(&mut grads, h.id, &grad);
                }
                OpKind::Sum(a) => {
                    let da = vec![grad[0]; a.len()];
                    accumulate(&mut grads, a.id, &da);
                }
                OpKind::Bce { scores, labels } => {
                    let n = scores.len() as f64;
                    let d = &self.nodes[scores.id].data;
                    let ds: Vec<f64> = d
                        .iter()
                        .zip(labels.iter())
                        .map(|(s, y)| {
                            let s = s.clamp(BCE_CLAMP, 1.0 - BCE_CLAMP);
                            grad[0] * (-y / s + (1.0 - y) / (1.0 - s)) / n
                        })
                        .collect();
                    accumulate(&mut grads, scores.id, &ds);
                }
            }
            grads[id] = Some(grad);
        }
        Ok(Gradients { by_node: grads })
    }

    /// Collect gradients of every parameter leaf, summing duplicates.
    pub fn param_grads(&self, grads: &Gradients, store: &ParamStore) -> Grads {
        let mut out = Grads::zeros_like(store);
        for (id, node) in self.nodes.iter().enumerate() {
            if let OpKind::Param(pid) = node.op {
                if let Some(g) = &grads.by_node[id] {
                    out.add_to(pid, g);
                }
            }
        }
        out
    }
}

fn accumulate(grads: &mut [Option<Vec<f64>>], id: usize, delta: &[f64]) {
    match &mut grads[id] {
        Some(g) => {
            for (a, b) in g.iter_mut().zip(delta.iter()) {
                *a += b;
            }
        }
        None => grads[id] = Some(delta.to_vec()),
    }
}

fn stable_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// a [m x k] times b [k x n].
fn matmul_nn(a: &[f64], m: usize, k: usize, b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        let orow = &mut out[i * n..(i + 1) * n];
        for kk in 0..k {
            let av = a[i * k + kk];
            if av == 0.0 {
                continue;
            }
            let brow = &b[kk * n..(kk + 1) * n];
            for j in 0..n {
                orow[j] += av * brow[j];
            }
        }
    }
    out
}

/// a [m x n] times b^T where b is [k x n]; result m x k.
fn matmul_nt(a: &[f64], m: usize, n: usize, b: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * k];
    for i in 0..m {
        let arow = &a[i * n..(i + 1) * n];
        for kk in 0..k {
            let brow = &b[kk * n..(kk + 1) * n];
            let mut acc = 0.0;
            for j in 0..n {
                acc += arow[j] * brow[j];
            }
            out[i * k + kk] = acc;
        }
    }
    out
}

/// a^T times b where a is [m x k] and b is [m x n]; result k x n.
fn matmul_tn(a: &[f64], m: usize, k: usize, b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; k * n];
    for i in 0..m {
        let brow = &b[i * n..(i + 1) * n];
        for kk in 0..k {
            let av = a[i * k + kk];
            if av == 0.0 {
                continue;
            }
            let orow = &mut out[kk * n..(kk + 1) * n];
            for j in 0..n {
                orow[j] += av * brow[j];
            }
        }
    }
    out
}
