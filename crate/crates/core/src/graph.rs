//! Undirected sparse graphs in CSR form, edge-list IO, and k-hop enclosing
//! subgraph extraction around target node pairs.

use std::collections::VecDeque;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Immutable undirected graph. Neighbor lists are sorted ascending with no
/// duplicates and no self-loops; adjacency is symmetric by construction.
/// Optionally carries one dense feature row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_nodes: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    features: Option<Features>,
}

/// Dense node feature matrix, row-major, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Features {
    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.dim..(u + 1) * self.dim]
    }
}

impl Graph {
    /// Build from raw endpoint pairs. Edges are symmetrized and deduplicated,
    /// self-loops dropped. `min_nodes` raises the node count beyond what the
    /// endpoints imply (isolated trailing nodes).
    pub fn from_edges(min_nodes: usize, edges: &[(usize, usize)]) -> Graph {
        let num_nodes = edges
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
            .max(min_nodes);

        let mut degree = vec![0usize; num_nodes];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; num_nodes + 1];
        for u in 0..num_nodes {
            offsets[u + 1] = offsets[u] + degree[u];
        }
        let mut neighbors = vec![0usize; offsets[num_nodes]];
        let mut cursor = offsets.clone();
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        // Sort and dedup each list in place, then re-pack.
        let mut packed = Vec::with_capacity(neighbors.len());
        let mut new_offsets = vec![0usize; num_nodes + 1];
        for u in 0..num_nodes {
            let list = &mut neighbors[offsets[u]..offsets[u + 1]];
            list.sort_unstable();
            let start = packed.len();
            for &v in list.iter() {
                if packed.len() == start || *packed.last().unwrap() != v {
                    packed.push(v);
                }
            }
            new_offsets[u + 1] = packed.len();
        }
        Graph {
            num_nodes,
            offsets: new_offsets,
            neighbors: packed,
            features: None,
        }
    }

    /// Attach a feature matrix; row count must equal `num_nodes`.
    pub fn with_features(mut self, dim: usize, data: Vec<f64>) -> Result<Graph> {
        if dim == 0 || data.len() != self.num_nodes * dim {
            return Err(Error::Format(format!(
                "feature matrix has {} values, expected {} nodes x {} dims",
                data.len(),
                self.num_nodes,
                dim
            )));
        }
        self.features = Some(Features { dim, data });
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn features(&self) -> Option<&Features> {
        self.features.as_ref()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.as_ref().map_or(0, |f| f.dim)
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: usize) -> Result<&[usize]> {
        if u >= self.num_nodes {
            return Err(Error::Bounds {
                index: u,
                len: self.num_nodes,
            });
        }
        Ok(&self.neighbors[self.offsets[u]..self.offsets[u + 1]])
    }

    pub fn degree(&self, u: usize) -> Result<usize> {
        Ok(self.neighbors(u)?.len())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match self.neighbors(u) {
            Ok(list) => list.binary_search(&v).is_ok(),
            Err(_) => false,
        }
    }

    /// All undirected edges with u < v, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for u in 0..self.num_nodes {
            for &v in &self.neighbors[self.offsets[u]..self.offsets[u + 1]] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// BFS distances from `src`, capped at `max_dist` hops; unreached nodes
    /// are None. `skip` removes one node from the graph for the traversal.
    pub fn bfs_distances(
        &self,
        src: usize,
        max_dist: Option<usize>,
        skip: Option<usize>,
    ) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_nodes];
        if Some(src) == skip || src >= self.num_nodes {
            return dist;
        }
        dist[src] = Some(0);
        let mut queue = VecDeque::new();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            if let Some(cap) = max_dist {
                if d >= cap {
                    continue;
                }
            }
            for &v in &self.neighbors[self.offsets[u]..self.offsets[u + 1]] {
                if Some(v) == skip || dist[v].is_some() {
                    continue;
                }
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
        dist
    }

    /// Serialize as edge-list text, one "u v" per line with u < v.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u, v));
        }
        out
    }
}

/// Local re-indexed k-hop neighborhood of a target pair. Local index 0 is the
/// first target, 1 the second; remaining nodes are ordered by ascending
/// global id. `local_to_global` maps back to ids in the original graph.
#[derive(Debug, Clone)]
pub struct EnclosingSubgraph {
    pub local_graph: Graph,
    pub local_to_global: Vec<usize>,
    pub target_a: usize,
    pub target_b: usize,
    pub hops: usize,
}

impl EnclosingSubgraph {
    pub fn num_nodes(&self) -> usize {
        self.local_graph.num_nodes()
    }
}

/// Induced subgraph on all nodes within `k` hops of either target. When
/// `exclude_target_edge` is set and the pair is connected, that one edge is
/// left out of the local graph; the node set is unaffected.
pub fn extract_enclosing_subgraph(
    g: &Graph,
    i: usize,
    j: usize,
    k: usize,
    exclude_target_edge: bool,
) -> Result<EnclosingSubgraph> {
    if i == j {
        return Err(Error::InvalidPair(format!("i = j = {}", i)));
    }
    let n = g.num_nodes();
    if i >= n {
        return Err(Error::Bounds { index: i, len: n });
    }
    if j >= n {
        return Err(Error::Bounds { index: j, len: n });
    }
    let di = g.bfs_distances(i, Some(k), None);
    let dj = g.bfs_distances(j, Some(k), None);

    let mut locals = vec![i, j];
    for u in 0..n {
        if u == i || u == j {
            continue;
        }
        if di[u].is_some() || dj[u].is_some() {
            locals.push(u);
        }
    }
    let mut global_to_local = vec![usize::MAX; n];
    for (idx, &u) in locals.iter().enumerate() {
        global_to_local[u] = idx;
    }

    let mut edges = Vec::new();
    for (lu, &gu) in locals.iter().enumerate() {
        for &gv in g.neighbors(gu)? {
            let lv = global_to_local[gv];
            if lv == usize::MAX || lv <= lu {
                continue;
            }
            if exclude_target_edge && ((gu == i && gv == j) || (gu == j && gv == i)) {
                continue;
            }
            edges.push((lu, lv));
        }
    }
    let local_graph = Graph::from_edges(locals.len(), &edges);
    Ok(EnclosingSubgraph {
        local_graph,
        local_to_global: locals,
        target_a: 0,
        target_b: 1,
        hops: k,
    })
}

fn parse_node_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected non-negative integer node id, got {:?}", tok),
    })
}

/// Parse edge-list text: one "u v" per line, '#' lines are comments, blank
/// lines skipped. Returns the raw pairs plus the max id seen.
fn parse_edge_lines<R: BufRead>(source: R) -> Result<(Vec<(usize, usize)>, usize)> {
    let mut edges = Vec::new();
    let mut max_id = 0usize;
    let mut seen_any = false;
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let u = parse_node_id(toks.next().unwrap(), lineno + 1)?;
        let v = match toks.next() {
            Some(t) => parse_node_id(t, lineno + 1)?,
            None => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "expected two node ids".into(),
                })
            }
        };
        if toks.next().is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "expected exactly two node ids".into(),
            });
        }
        max_id = max_id.max(u).max(v);
        seen_any = true;
        edges.push((u, v));
    }
    Ok((edges, if seen_any { max_id } else { 0 }))
}

/// Load a graph from edge-list text, optionally joined with a feature file of
/// "u f_1 ... f_D" lines. Node count is 1 + the largest id seen in either
/// source. Nodes without a feature line get a zero row.
pub fn load_edge_list<R: BufRead, F: BufRead>(
    source: R,
    feature_source: Option<F>,
) -> Result<Graph> {
    let (edges, edge_max) = parse_edge_lines(source)?;
    let mut num_nodes = if edges.is_empty() { 0 } else { edge_max + 1 };

    let mut feat_rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut dim = 0usize;
    if let Some(fs) = feature_source {
        for (lineno, line) in fs.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let u = parse_node_id(toks.next().unwrap(), lineno + 1)?;
            let vals: Vec<f64> = toks
                .map(|t| {
                    t.parse::<f64>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected float feature value, got {:?}", t),
                    })
                })
                .collect::<Result<_>>()?;
            if vals.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "feature line has no values".into(),
                });
            }
            if dim == 0 {
                dim = vals.len();
            } else if vals.len() != dim {
                return Err(Error::Format(format!(
                    "feature dimension mismatch at line {}: got {}, expected {}",
                    lineno + 1,
                    vals.len(),
                    dim
                )));
            }
            num_nodes = num_nodes.max(u + 1);
            feat_rows.push((u, vals));
        }
    }

    let g = Graph::from_edges(num_nodes, &edges);
    if dim > 0 {
        let mut data = vec![0.0; g.num_nodes() * dim];
        for (u, vals) in feat_rows {
            data[u * dim..(u + 1) * dim].copy_from_slice(&vals);
        }
        g.with_features(dim, data)
    } else {
        Ok(g)
    }
}

/// Load an edge list whose ids may be sparse, compacting them to dense
/// 0-based ids. Returns the graph plus the mapping dense id -> original id.
pub fn load_edge_list_remapped<R: BufRead>(source: R) -> Result<(Graph, Vec<usize>)> {
    let (edges, _) = parse_edge_lines(source)?;
    let mut ids: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let lookup = |x: usize| ids.binary_search(&x).unwrap();
    let remapped: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (lookup(u), lookup(v))).collect();
    Ok((Graph::from_edges(ids.len(), &remapped), ids))
}

/// Parse a pairs file: one "i j" per line, '#' comments.
pub fn load_pairs<R: BufRead>(source: R) -> Result<Vec<(usize, usize)>> {
    let (pairs, _) = parse_edge_lines(source)?;
    Ok(pairs)
}
