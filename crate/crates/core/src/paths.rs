//! Simple-path enumeration between the two targets of an enclosing subgraph.

use crate::error::{Error, Result};
use crate::graph::EnclosingSubgraph;

/// Default cap on enumerated paths; dense subgraphs past this point are
/// pathological for the method anyway.
pub const DEFAULT_PATH_CAP: usize = 10_000;

/// All simple paths from target_a to target_b, as local node index
/// sequences. Path length is counted in edges and capped at `max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<Vec<usize>>,
    pub max_len: usize,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Depth-first enumeration with visited-set backtracking and depth pruning.
/// Disconnected targets yield an empty set. Neighbor lists are sorted, so
/// the output order is deterministic.
pub fn enumerate_simple_paths(sub: &EnclosingSubgraph, max_len: usize) -> Result<PathSet> {
    enumerate_simple_paths_capped(sub, max_len, DEFAULT_PATH_CAP)
}

pub fn enumerate_simple_paths_capped(
    sub: &EnclosingSubgraph,
    max_len: usize,
    cap: usize,
) -> Result<PathSet> {
    if max_len < 1 {
        return Err(Error::InvalidInput("max_len must be at least 1".into()));
    }
    let g = &sub.local_graph;
    let n = g.num_nodes();
    let (src, dst) = (sub.target_a, sub.target_b);
    let mut paths = Vec::new();
    let mut stack = vec![src];
    let mut visited = vec![false; n];
    visited[src] = true;
    dfs(g, dst, max_len, cap, &mut stack, &mut visited, &mut paths)?;
    Ok(PathSet { paths, max_len })
}

fn dfs(
    g: &crate::graph::Graph,
    dst: usize,
    max_len: usize,
    cap: usize,
    stack: &mut Vec<usize>,
    visited: &mut Vec<bool>,
    paths: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let cur = *stack.last().unwrap();
    if cur == dst {
        if paths.len() >= cap {
            return Err(Error::PathExplosion { cap });
        }
        paths.push(stack.clone());
        return Ok(());
    }
    if stack.len() > max_len {
        // stack holds vertices; edges used = len - 1
        return Ok(());
    }
    for &next in g.neighbors(cur)? {
        if visited[next] {
            continue;
        }
        visited[next] = true;
        stack.push(next);
        dfs(g, dst, max_len, cap, stack, visited, paths)?;
        stack.pop();
        visited[next] = false;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{extract_enclosing_subgraph, Graph};

    fn three_route_graph() -> Graph {
        // a=0 b=1 c=2 d=3 e=4 f=5 g=6
        Graph::from_edges(
            7,
            &[(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 3), (0, 6)],
        )
    }

    #[test]
    fn three_route_graph_has_three_paths() {
        let g = three_route_graph();
        let sub = extract_enclosing_subgraph(&g, 0, 1, 1, true).unwrap();
        let ps = enumerate_simple_paths(&sub, 4).unwrap();
        let mut lens: Vec<usize> = ps.paths.iter().map(|p| p.len() - 1).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 3, 4]);
        // Map back to globals to pin the exact paths.
        let globals: Vec<Vec<usize>> = ps
            .paths
            .iter()
            .map(|p| p.iter().map(|&u| sub.local_to_global[u]).collect())
            .collect();
        assert!(globals.contains(&vec![0, 2, 1]));
        assert!(globals.contains(&vec![0, 3, 4, 1]));
        assert!(globals.contains(&vec![0, 5, 3, 4, 1]));
    }

    #[test]
    fn single_edge_yields_direct_path() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let sub = extract_enclosing_subgraph(&g, 0, 1, 1, false).unwrap();
        let ps = enumerate_simple_paths(&sub, 4).unwrap();
        assert_eq!(ps.paths, vec![vec![0, 1]]);
    }

    #[test]
    fn disconnected_targets_yield_empty_set() {
        let g = Graph::from_edges(4, &[(0, 2), (1, 3)]);
        let sub = extract_enclosing_subgraph(&g, 0, 1, 1, true).unwrap();
        let ps = enumerate_simple_paths(&sub, 4).unwrap();
        assert!(ps.is_empty());
    }

    #[test]
    fn cap_aborts_dense_enumeration() {
        // Complete graph on 9 nodes has far more than 20 simple paths.
        let mut edges = Vec::new();
        for u in 0..9 {
            for v in (u + 1)..9 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(9, &edges);
        let sub = extract_enclosing_subgraph(&g, 0, 1, 1, true).unwrap();
        let err = enumerate_simple_paths_capped(&sub, 4, 20).unwrap_err();
        assert!(matches!(err, Error::PathExplosion { cap: 20 }));
    }

    #[test]
    fn zero_max_len_is_invalid() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let sub = extract_enclosing_subgraph(&g, 0, 1, 1, false).unwrap();
        assert!(enumerate_simple_paths(&sub, 0).is_err());
    }
}
