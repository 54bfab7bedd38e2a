#![allow(dead_code)]

use proptest::prelude::*;
use proptest::sample::Index;
use slcsurf_core::graph::GraphBuilder;
use slcsurf_core::ExceptionalGraph;
use slcsurf_oracle::{negative_definite_by_sturm, PlainGraph};

pub fn vertex_id(i: usize) -> String {
    format!("E{}", i + 1)
}

/// The same graph with vertices inserted in the order given by `perm`.
pub fn to_graph_ordered(p: &PlainGraph, perm: &[usize]) -> ExceptionalGraph {
    let mut b = GraphBuilder::default();
    for &i in perm {
        b = b.vertex(vertex_id(i), p.self_intersections[i]).marks(vertex_id(i), p.marks[i]);
    }
    for &(x, y) in &p.edges {
        b = b.edge(vertex_id(x), vertex_id(y));
    }
    b.build().expect("generated graphs are valid")
}

pub fn to_graph(p: &PlainGraph) -> ExceptionalGraph {
    let order: Vec<usize> = (0..p.self_intersections.len()).collect();
    to_graph_ordered(p, &order)
}

/// Connected graphs: a random tree plus at most one extra edge.
pub fn plain_graph(max_n: usize, lo: i64, max_marks: u32) -> impl Strategy<Value = PlainGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(lo..=-1i64, n),
            prop::collection::vec(any::<Index>(), n - 1),
            prop::option::weighted(0.2, (any::<Index>(), any::<Index>())),
            prop::collection::vec(prop_oneof![3 => Just(0u32), 1 => 0..=max_marks], n),
        )
            .prop_map(move |(self_intersections, parents, extra, marks)| {
                let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
                if let Some((a, b)) = extra {
                    let (a, b) = (a.index(n), b.index(n));
                    if a != b && !edges.contains(&(a.min(b), a.max(b))) {
                        edges.push((a.min(b), a.max(b)));
                    }
                }
                PlainGraph { self_intersections, edges, marks }
            })
    })
}

pub fn definite_graph(max_n: usize, lo: i64, max_marks: u32) -> impl Strategy<Value = PlainGraph> {
    plain_graph(max_n, lo, max_marks).prop_filter("negative definite", |g| negative_definite_by_sturm(&g.matrix()))
}

pub fn unmarked(mut g: PlainGraph) -> PlainGraph {
    g.marks.iter_mut().for_each(|m| *m = 0);
    g
}
