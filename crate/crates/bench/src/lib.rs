//! Instance builders shared by the benchmarks.

use netkrig_core::linalg::DenseMatrix;
use netkrig_core::topology::{
    generate_inet_like, generate_preferential_attachment, parse_edge_list, parse_flow_list,
    routing_matrix_for, sample_flows, RoutingMatrix,
};
use netkrig_core::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const INTERNET2_EDGES: &str = include_str!("../../../data/internet2_like.edges");
const INTERNET2_FLOWS: &str = include_str!("../../../data/internet2_like.flows");

/// Dense `L x J` matrix with independent standard normal entries.
pub fn gaussian_matrix(l: usize, j: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(l, j, |_, _| StandardNormal.sample(&mut rng))
}

/// The 9-node, 26-link, 72-flow instance shipped in `data/`.
pub fn internet2_like() -> Result<RoutingMatrix> {
    let topo = parse_edge_list(INTERNET2_EDGES, "internet2_like.edges")?
        .with_flows(parse_flow_list(INTERNET2_FLOWS, "internet2_like.flows")?)?;
    routing_matrix_for(&topo)
}

/// 305 nodes, 480 links and 100 sampled flows: a desk-scale Inet-like instance.
pub fn inet_like(seed: u64) -> Result<RoutingMatrix> {
    let topo = sample_flows(generate_inet_like(305, 480, seed)?, 100, seed)?;
    routing_matrix_for(&topo)
}

/// Preferential-attachment graph with `flows` sampled flows.
pub fn preferential_attachment(
    nodes: usize,
    attach: usize,
    flows: usize,
    seed: u64,
) -> Result<RoutingMatrix> {
    let topo = sample_flows(
        generate_preferential_attachment(nodes, attach, seed)?,
        flows,
        seed,
    )?;
    routing_matrix_for(&topo)
}
