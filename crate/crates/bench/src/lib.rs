//! Fixture graphs shared by the benchmarks.

use std::collections::BTreeMap;

use slcsurf_core::graph::GraphBuilder;
use slcsurf_core::ExceptionalGraph;

/// A chain of `n` curves of self-intersection `s`.
pub fn chain(n: usize, s: i64) -> ExceptionalGraph {
    ExceptionalGraph::chain(&vec![s; n]).expect("chains are valid")
}

/// A central `-arms - 1` curve with `arms` chains of `len` `(-2)`-curves,
/// the last curve of each arm carrying one mark.
pub fn marked_star(arms: usize, len: usize) -> ExceptionalGraph {
    let mut b = GraphBuilder::default().vertex("O", -(arms as i64) - 1);
    for a in 0..arms {
        for i in 0..len {
            let id = format!("A{a}_{i}");
            b = b.vertex(id.clone(), -2);
            let prev = if i == 0 { "O".to_string() } else { format!("A{a}_{}", i - 1) };
            b = b.edge(prev, id);
        }
        b = b.marks(format!("A{a}_{}", len - 1), 1);
    }
    b.build().expect("stars are valid")
}

/// Unit incidence at the first vertex, scaled by `weight`.
pub fn end_incidence(g: &ExceptionalGraph, weight: u64) -> BTreeMap<String, u64> {
    g.ids().enumerate().map(|(i, v)| (v.to_string(), if i == 0 { weight } else { 0 })).collect()
}
