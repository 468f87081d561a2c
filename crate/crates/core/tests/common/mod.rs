#![allow(dead_code)]

use rand::Rng;

use sn_gts::frontend::{parse_model, Model};
use sn_gts::gts::{assemble, builtin_rule, Graph, GtsModel};

pub const G0: &str = include_str!("../../models/r1r3_g0.sn");

pub fn g0_model() -> Model {
    parse_model(G0).unwrap()
}

pub fn g0() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (3, 0)])
}

pub fn system(rules: &[&str], size: u32, g: &Graph) -> Model {
    let gts = GtsModel {
        rules: rules.iter().map(|r| builtin_rule(r).unwrap()).collect(),
        class_size: size,
        initial: g.clone(),
    };
    assemble(&gts).unwrap().model
}

/// Paths of length at least one.
pub fn closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut r = vec![vec![false; n]; n];
    for (a, b) in g.edges() {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn closure_graph(g: &Graph) -> Graph {
    let r = closure(g);
    let n = g.node_count();
    Graph::from_edges(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| r[*i][*j]))
}

/// Every graph on `n` nodes, self-loops included.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        Graph::from_edges(n, pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, e)| *e))
    })
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, loops: bool) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if (i != j || loops) && rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Edges only from earlier to later nodes of a random order.
pub fn random_dag(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((order[a], order[b]));
            }
        }
    }
    Graph::from_edges(n, edges)
}
