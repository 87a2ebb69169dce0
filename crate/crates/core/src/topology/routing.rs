use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

use super::{RoutingMatrix, Topology};

/// Link indices traversed by one flow, ordered from source to destination.
pub type Route = Vec<usize>;

/// BFS tree as `parent[node] = (previous node, link)`.
type Parents = Vec<Option<(usize, usize)>>;

/// Minimum-hop route for every flow.
///
/// Breadth-first search from each source, visiting neighbours in ascending
/// node order; the first discovery of a node fixes its parent, which makes the
/// tie-breaking (and therefore `A`) reproducible.
pub fn shortest_path_routes(topology: &Topology) -> Result<Vec<Route>> {
    let adj = topology.adjacency();
    let n = topology.node_count();
    let mut routes = Vec::with_capacity(topology.flow_count());
    // flows are usually grouped by source, so cache the last BFS tree
    let mut cached: Option<(usize, Parents)> = None;
    for (j, &(s, d)) in topology.flows().iter().enumerate() {
        if cached.as_ref().is_none_or(|(src, _)| *src != s) {
            cached = Some((s, bfs_parents(&adj, n, s)));
        }
        let parents = &cached.as_ref().expect("just filled").1;
        let mut route = Vec::new();
        let mut at = d;
        while at != s {
            match parents[at] {
                Some((prev, link)) => {
                    route.push(link);
                    at = prev;
                }
                None => {
                    return Err(Error::Route {
                        flow: j,
                        source_node: s,
                        dest_node: d,
                    })
                }
            }
        }
        route.reverse();
        routes.push(route);
    }
    Ok(routes)
}

fn bfs_parents(adj: &[Vec<(usize, usize)>], n: usize, source: usize) -> Parents {
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &(v, link) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, link));
                queue.push_back(v);
            }
        }
    }
    parent
}

/// `L x J` 0/1 incidence matrix of the given routes (one route per flow).
pub fn build_routing_matrix(topology: &Topology, routes: &[Route]) -> Result<RoutingMatrix> {
    if routes.len() != topology.flow_count() {
        return Err(Error::input(format!(
            "{} routes supplied for {} flows",
            routes.len(),
            topology.flow_count()
        )));
    }
    let l = topology.link_count();
    let mut a = DenseMatrix::zeros(l, routes.len());
    for (j, route) in routes.iter().enumerate() {
        if route.is_empty() {
            return Err(Error::input(format!("route for flow {j} is empty")));
        }
        for &link in route {
            if link >= l {
                return Err(Error::input(format!(
                    "route for flow {j} references unknown link {link} (L = {l})"
                )));
            }
            a[(link, j)] = 1.0;
        }
    }
    RoutingMatrix::new(a)
}

/// Shortest-path routes followed by [`build_routing_matrix`].
pub fn routing_matrix_for(topology: &Topology) -> Result<RoutingMatrix> {
    let routes = shortest_path_routes(topology)?;
    build_routing_matrix(topology, &routes)
}
