use serde::{Deserialize, Serialize};

use super::polytope::{HRep, VRep};
use crate::error::{Error, Result};

/// Undirected vertex graph; edges stored once as `(i, j)` with `i < j`,
/// sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    #[serde(skip)]
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn from_edges(vertex_count: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Self { vertex_count, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == i, b == i) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == i || b == i).count()
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&key).is_ok()
    }
}

/// Vertices `i` and `j` are adjacent iff the constraints active at both cut
/// out a one-dimensional face.
pub fn vertex_adjacency(v: &VRep, h: &HRep) -> Result<Graph> {
    if v.ambient_dim() != h.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: h.ambient_dim(), got: v.ambient_dim() });
    }
    let d = h.ambient_dim();
    let mut active = Vec::with_capacity(v.len());
    for (i, x) in v.vertices().iter().enumerate() {
        if !h.contains(x) {
            return Err(Error::Input(format!("vertex {i} violates the H-representation")));
        }
        let set = h.active_set(x);
        if h.active_rank(&set) != d {
            return Err(Error::Input(format!("point {i} is not a vertex of the H-representation")));
        }
        active.push(set);
    }
    let mut edges = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let common: Vec<usize> =
                active[i].iter().copied().filter(|k| active[j].binary_search(k).is_ok()).collect();
            if h.active_rank(&common) + 1 == d {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(v.len(), edges))
}
