//! Simple undirected graph with degree-proportional sampling.
//!
//! Every edge contributes both of its endpoints to a flat `endpoints` list, so a
//! vertex `w` appears there exactly `degree(w)` times. A uniform index into that
//! list picks `w` with probability `degree(w) / 2e`, which is the preferential
//! attachment kernel, in O(1) and without any rebuild when edges are added.

use rand::Rng;

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    degrees: Vec<usize>,
    endpoints: Vec<VertexId>,
    birth_time: Vec<u64>,
    num_edges: usize,
    non_isolated: usize,
    max_degree: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` isolated vertices, all born at time 0.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex(0);
        }
        g
    }

    /// Builds a graph from an edge list, rejecting self-loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::config(format!(
                    "edge ({u}, {v}) is a self-loop or a duplicate"
                )));
            }
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.degrees.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Number of vertices with at least one incident edge.
    pub fn num_non_isolated(&self) -> usize {
        self.non_isolated
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Neighbors of `v` in insertion order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn endpoints(&self) -> &[VertexId] {
        &self.endpoints
    }

    pub fn birth_time(&self, v: VertexId) -> u64 {
        self.birth_time[v]
    }

    pub fn set_birth_time(&mut self, v: VertexId, t: u64) -> Result<()> {
        self.check(v)?;
        self.birth_time[v] = t;
        Ok(())
    }

    pub fn add_vertex(&mut self, t: u64) -> VertexId {
        let id = self.degrees.len();
        self.adjacency.push(Vec::new());
        self.degrees.push(0);
        self.birth_time.push(t);
        id
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if u >= self.num_vertices() || v >= self.num_vertices() {
            return false;
        }
        // scan the shorter list
        let (a, b) = if self.degrees[u] <= self.degrees[v] {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].contains(&b)
    }

    /// Inserts `{u, v}`. Returns `Ok(false)` without touching the graph for
    /// self-loops and edges that already exist.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == v || self.has_edge(u, v) {
            return Ok(false);
        }
        for (a, b) in [(u, v), (v, u)] {
            self.adjacency[a].push(b);
            if self.degrees[a] == 0 {
                self.non_isolated += 1;
            }
            self.degrees[a] += 1;
            self.max_degree = self.max_degree.max(self.degrees[a]);
        }
        self.endpoints.push(u);
        self.endpoints.push(v);
        self.num_edges += 1;
        Ok(true)
    }

    /// Picks `w` with probability `degree(w) / (2 * num_edges)`.
    pub fn sample_vertex_by_degree<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<VertexId> {
        if self.endpoints.is_empty() {
            return Err(Error::NoEdges);
        }
        Ok(self.endpoints[rng.random_range(0..self.endpoints.len())])
    }

    /// Draws an unordered pair of distinct neighbors of `w`, every pair equally
    /// likely. `None` when `w` has fewer than two neighbors.
    pub fn sample_neighbor_pair<R: Rng + ?Sized>(
        &self,
        w: VertexId,
        rng: &mut R,
    ) -> Result<Option<(VertexId, VertexId)>> {
        self.check(w)?;
        let nbrs = &self.adjacency[w];
        let d = nbrs.len();
        if d < 2 {
            return Ok(None);
        }
        let i = rng.random_range(0..d);
        let mut j = rng.random_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        Ok(Some((nbrs[i], nbrs[j])))
    }

    /// All edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                num_vertices: self.num_vertices(),
            })
        }
    }
}
