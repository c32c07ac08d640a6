//! Finite simple graphs on vertex set {0, .., n-1}.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A simple loopless graph; edges are stored as sorted unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u} is not allowed")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: vec![] }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = vec![];
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Self { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n).map(|u| (u.min((u + 1) % n), u.max((u + 1) % n)));
        Self::new(n, edges).expect("cycle is simple")
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        u != v && self.edges.binary_search(&key).is_ok()
    }

    pub fn complement(&self) -> Graph {
        let mut edges = vec![];
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.adjacent(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph { n: self.n, edges }
    }

    pub fn neighbours(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.adjacent(u, v)).collect()
    }

    /// Ordered edge pairs (u, v) and (v, u) for every edge.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for &(u, v) in &self.edges {
            out.push((u, v));
            out.push((v, u));
        }
        out
    }

    /// Checks that `f` maps edges to edges.
    pub fn is_homomorphism_to(&self, h: &Graph, f: &[usize]) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::dims(self.n, f.len()));
        }
        for &(u, v) in &self.edges {
            if f[u] >= h.n || f[v] >= h.n {
                return Err(Error::invalid("vertex map image out of range"));
            }
            if !h.adjacent(f[u], f[v]) {
                return Err(Error::NotGraphHomomorphism { u, v });
            }
        }
        Ok(())
    }

    /// Exhaustively enumerates all vertex maps self → h, tagging each with
    /// whether it is a homomorphism. Intended for tiny graphs only.
    pub fn enumerate_vertex_maps(&self, h: &Graph) -> Vec<(Vec<usize>, bool)> {
        let total = (h.n as u64)
            .checked_pow(self.n as u32)
            .expect("map space too big");
        let mut out = Vec::new();
        for code in 0..total {
            let mut f = Vec::with_capacity(self.n);
            let mut rem = code;
            for _ in 0..self.n {
                f.push((rem % h.n as u64) as usize);
                rem /= h.n as u64;
            }
            let ok = self.is_homomorphism_to(h, &f).is_ok();
            out.push((f, ok));
        }
        out
    }
}
