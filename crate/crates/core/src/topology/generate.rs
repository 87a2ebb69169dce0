use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::Topology;

/// Barabási–Albert preferential attachment.
///
/// Starts from the complete graph on `edges_per_new_node + 1` nodes; every
/// later node attaches `edges_per_new_node` distinct links to existing nodes
/// chosen with probability proportional to their current degree.
pub fn generate_preferential_attachment(
    n_nodes: usize,
    edges_per_new_node: usize,
    seed: u64,
) -> Result<Topology> {
    let m = edges_per_new_node;
    if m == 0 {
        return Err(Error::input("edges_per_new_node must be at least 1"));
    }
    if n_nodes < m + 1 {
        return Err(Error::input(format!(
            "preferential attachment with {m} links per node needs at least {} nodes, got {n_nodes}",
            m + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + m * (n_nodes - m - 1));
    // one entry per link endpoint; uniform draws from it are degree-proportional
    let mut endpoints = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for new in m + 1..n_nodes {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            endpoints.extend([t, new]);
        }
    }
    Topology::new(n_nodes, edges)
}

/// Connected heavy-tailed graph with an exact link count.
///
/// A preferential-attachment tree is grown first; the remaining
/// `n_links - (n_nodes - 1)` links join endpoint pairs that are both drawn
/// proportionally to degree. Used as a stand-in for Inet-style topologies,
/// whose average degree sits between one and two links per new node.
pub fn generate_inet_like(n_nodes: usize, n_links: usize, seed: u64) -> Result<Topology> {
    if n_nodes < 2 {
        return Err(Error::input("an Inet-like graph needs at least 2 nodes"));
    }
    let max_links = n_nodes * (n_nodes - 1) / 2;
    if n_links < n_nodes - 1 || n_links > max_links {
        return Err(Error::input(format!(
            "{n_links} links cannot form a simple connected graph on {n_nodes} nodes \
             (need {}..={max_links})",
            n_nodes - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![(0, 1)];
    let mut endpoints = vec![0, 1];
    let mut present: HashSet<(usize, usize)> = HashSet::from([(0, 1)]);
    for new in 2..n_nodes {
        let t = endpoints[rng.random_range(0..endpoints.len())];
        edges.push((t, new));
        present.insert((t, new));
        endpoints.extend([t, new]);
    }
    let mut attempts = 0usize;
    while edges.len() < n_links {
        attempts += 1;
        let (u, v) = if attempts < 100 * n_links {
            (
                endpoints[rng.random_range(0..endpoints.len())],
                endpoints[rng.random_range(0..endpoints.len())],
            )
        } else {
            // dense targets: fall back to uniform pairs
            (rng.random_range(0..n_nodes), rng.random_range(0..n_nodes))
        };
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if present.insert(key) {
            edges.push(key);
            endpoints.extend([u, v]);
        }
    }
    Topology::new(n_nodes, edges)
}

/// Samples `j_flows` distinct ordered `(s, d)` pairs uniformly without
/// replacement. Flows are returned in lexicographic order, so
/// `j_flows = N(N-1)` yields the full mesh.
pub fn sample_flows(topology: Topology, j_flows: usize, seed: u64) -> Result<Topology> {
    let n = topology.node_count();
    let pairs = n * (n - 1);
    if j_flows > pairs {
        return Err(Error::input(format!(
            "cannot sample {j_flows} distinct flows from {pairs} ordered pairs"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, pairs, j_flows).into_vec();
    picks.sort_unstable();
    let flows = picks
        .into_iter()
        .map(|p| {
            let s = p / (n - 1);
            let r = p % (n - 1);
            (s, if r < s { r } else { r + 1 })
        })
        .collect();
    topology.with_flows(flows)
}
