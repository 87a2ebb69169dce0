//! Network topologies, shortest-path routing and the routing matrix `A`.
//!
//! Links are undirected and carry a stable index `0..L`; flows are ordered
//! `(source, destination)` pairs indexed `0..J`. Entry `(l, j)` of the routing
//! matrix is 1 iff the route of flow `j` crosses link `l`.

mod generate;
mod io;
mod routing;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

pub use generate::{generate_inet_like, generate_preferential_attachment, sample_flows};
pub use io::{
    load_flows, load_routing_matrix, load_topology, parse_edge_list, parse_flow_list,
    parse_routing_matrix, render_edge_list, render_flow_list, render_routing_matrix,
};
pub use routing::{build_routing_matrix, routing_matrix_for, shortest_path_routes, Route};

/// Node/edge graph plus the flows routed over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    flows: Vec<(usize, usize)>,
}

impl Topology {
    /// Validates and builds a topology without flows.
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::input("topology needs at least one node"));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (l, &(u, v)) in edges.iter().enumerate() {
            if u >= node_count || v >= node_count {
                return Err(Error::input(format!(
                    "link {l} ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if u == v {
                return Err(Error::input(format!("link {l} is a self-loop on node {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::input(format!(
                    "link {l} ({u}, {v}) duplicates an earlier link"
                )));
            }
        }
        Ok(Topology {
            node_count,
            edges,
            flows: Vec::new(),
        })
    }

    /// Replaces the flow list after validating every pair.
    pub fn with_flows(mut self, flows: Vec<(usize, usize)>) -> Result<Self> {
        for (j, &(s, d)) in flows.iter().enumerate() {
            if s >= self.node_count || d >= self.node_count {
                return Err(Error::input(format!(
                    "flow {j} ({s}, {d}) references a node outside 0..{}",
                    self.node_count
                )));
            }
            if s == d {
                return Err(Error::input(format!(
                    "flow {j} has identical endpoints {s}"
                )));
            }
        }
        self.flows = flows;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn flows(&self) -> &[(usize, usize)] {
        &self.flows
    }

    pub fn link_count(&self) -> usize {
        self.edges.len()
    }

    pub fn flow_count(&self) -> usize {
        self.flows.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Neighbour lists `(neighbour, link index)`, sorted by neighbour.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (l, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, l));
            adj[v].push((u, l));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.node_count
    }
}

/// `L x J` nonnegative matrix mapping flow loads to link loads (`y = A x`).
#[derive(Clone, Debug, PartialEq)]
pub struct RoutingMatrix(DenseMatrix);

impl RoutingMatrix {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        if let Some(pos) = matrix.as_slice().iter().position(|&v| v < 0.0) {
            let cols = matrix.cols().max(1);
            return Err(Error::input(format!(
                "routing matrix entry ({}, {}) is negative",
                pos / cols,
                pos % cols
            )));
        }
        Ok(RoutingMatrix(matrix))
    }

    pub fn link_count(&self) -> usize {
        self.0.rows()
    }

    pub fn flow_count(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.0
    }
}

impl AsRef<DenseMatrix> for RoutingMatrix {
    fn as_ref(&self) -> &DenseMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_graphs() {
        assert!(Topology::new(3, vec![(0, 0)]).is_err());
        assert!(Topology::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Topology::new(3, vec![(0, 3)]).is_err());
        assert!(Topology::new(0, vec![]).is_err());
        let t = Topology::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(t.clone().with_flows(vec![(1, 1)]).is_err());
        assert!(t.clone().with_flows(vec![(0, 5)]).is_err());
        assert_eq!(t.with_flows(vec![(0, 2)]).unwrap().flow_count(), 1);
    }

    #[test]
    fn routing_matrix_rejects_negative_entries() {
        let m = DenseMatrix::from_rows(&[[1.0, -1.0]]).unwrap();
        assert!(RoutingMatrix::new(m).is_err());
    }
}
