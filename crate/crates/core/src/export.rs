//! Graphviz and JSON-lines renderings of reachability graphs.
//!
//! DOT nodes show the encoded graph when the state is a graph encoding with
//! at most 8 nodes, the state id otherwise. JSON lines carry one object per
//! state and per edge, keys in lexicographic order.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::engine::ReachabilityGraph;
use crate::gts::{decode, Graph};
use crate::model::{Marking, Net};
use crate::symbolic::SymbolicGraph;

/// Largest decoded graph drawn inside a state.
pub const INLINE_NODES: usize = 8;

/// Common view of ordinary and symbolic graphs.
struct View<'a> {
    states: &'a [Marking],
    dead: &'a [bool],
    truncated: bool,
    /// `(source, label, target, fold)`
    edges: Vec<(usize, String, usize, Option<usize>)>,
}

impl<'a> View<'a> {
    fn rg(net: &Net, rg: &'a ReachabilityGraph) -> Self {
        View {
            states: &rg.states,
            dead: &rg.dead,
            truncated: rg.truncated,
            edges: rg.edges.iter().map(|e| (e.source, e.instance.label(net), e.target, None)).collect(),
        }
    }

    fn srg(net: &Net, srg: &'a SymbolicGraph) -> Self {
        View {
            states: &srg.states,
            dead: &srg.dead,
            truncated: srg.truncated,
            edges: srg.edges.iter().map(|e| (e.source, e.instance.label(net), e.target, Some(e.fold))).collect(),
        }
    }
}

fn graph_text(g: &Graph) -> String {
    let mut lines = Vec::new();
    let mut touched = vec![false; g.node_count()];
    for (a, b) in g.edges() {
        touched[a] = true;
        touched[b] = true;
        lines.push(format!("{} -> {}", g.names()[a], g.names()[b]));
    }
    for (i, t) in touched.iter().enumerate() {
        if !t {
            lines.push(g.names()[i].clone());
        }
    }
    lines.join("\\n")
}

fn escape(s: &str) -> String {
    s.replace('"', "\\\"")
}

fn dot(net: &Net, v: &View, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", name).unwrap();
    writeln!(out, "  node [shape=box, fontname=monospace];").unwrap();
    if v.truncated {
        writeln!(out, "  label=\"truncated\";").unwrap();
    }
    for (s, m) in v.states.iter().enumerate() {
        let label = match decode(net, m) {
            Ok(g) if g.node_count() <= INLINE_NODES => {
                let body = graph_text(&g);
                if body.is_empty() {
                    format!("s{}", s)
                } else {
                    format!("s{}\\n{}", s, body)
                }
            }
            _ => format!("s{}", s),
        };
        let mut attrs = format!("label=\"{}\"", escape(&label));
        if v.dead[s] {
            attrs.push_str(", peripheries=2");
        }
        if s == 0 {
            attrs.push_str(", style=bold");
        }
        writeln!(out, "  s{} [{}];", s, attrs).unwrap();
    }
    for (a, label, b, fold) in &v.edges {
        let label = match fold {
            Some(k) if *k > 1 => format!("{} x{}", label, k),
            _ => label.clone(),
        };
        writeln!(out, "  s{} -> s{} [label=\"{}\"];", a, b, escape(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

fn json_lines(net: &Net, v: &View) -> String {
    let mut out = String::new();
    for (s, m) in v.states.iter().enumerate() {
        let mut obj = json!({
            "type": "state",
            "id": s,
            "initial": s == 0,
            "dead": v.dead[s],
            "marking": m.display(net),
        });
        if let Ok(g) = decode(net, m) {
            let edges: Vec<Value> =
                g.edges().map(|(a, b)| json!([g.names()[a].clone(), g.names()[b].clone()])).collect();
            obj["graph"] = json!({ "nodes": g.names(), "edges": edges });
        }
        writeln!(out, "{}", obj).unwrap();
    }
    for (a, label, b, fold) in &v.edges {
        let mut obj = json!({ "type": "edge", "source": a, "target": b, "instance": label });
        if let Some(k) = fold {
            obj["fold"] = json!(k);
        }
        writeln!(out, "{}", obj).unwrap();
    }
    if v.truncated {
        writeln!(out, "{}", json!({ "type": "truncated" })).unwrap();
    }
    out
}

pub fn rg_dot(net: &Net, rg: &ReachabilityGraph) -> String {
    dot(net, &View::rg(net, rg), "RG")
}

pub fn srg_dot(net: &Net, srg: &SymbolicGraph) -> String {
    dot(net, &View::srg(net, srg), "SRG")
}

pub fn rg_json(net: &Net, rg: &ReachabilityGraph) -> String {
    json_lines(net, &View::rg(net, rg))
}

pub fn srg_json(net: &Net, srg: &SymbolicGraph) -> String {
    json_lines(net, &View::srg(net, srg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{build_rg, RgOptions};
    use crate::frontend::parse_model;
    use crate::symbolic::build_srg;

    fn model() -> crate::frontend::Model {
        parse_model("rule R1; rule R3; graph { node 1; node 2; node 3; node 4; edge 1 2; edge 1 3; edge 4 1; }").unwrap()
    }

    #[test]
    fn dot_shapes() {
        let m = model();
        let rg = build_rg(&m.net, &m.initial, &RgOptions::default()).unwrap();
        let d = rg_dot(&m.net, &rg);
        assert_eq!(d.matches(" [label=\"s").count(), 16);
        assert_eq!(d.matches("peripheries=2").count(), 1);
        assert!(d.contains("  s0 [label=\"s0\\nnd1 -> nd2\\nnd1 -> nd3\\nnd4 -> nd1\", style=bold];"), "{}", d);
        assert!(d.contains("[label=\"R1(nd4,nd1,nd2)\"]"));
        let srg = build_srg(&m.net, &m.initial, &RgOptions::default()).unwrap();
        let d = srg_dot(&m.net, &srg);
        assert_eq!(d.matches(" [label=\"s").count(), 10);
        assert!(d.contains(" x2\"]"));
    }

    #[test]
    fn large_states_show_ids() {
        let m = parse_model("class N = 10; rule R3; graph { node a; node b; node c; node d; node e; node f; node g; node h; node i; }").unwrap();
        let rg = build_rg(&m.net, &m.initial, &RgOptions::default()).unwrap();
        assert!(rg_dot(&m.net, &rg).contains("s0 [label=\"s0\", style=bold];"));
    }

    #[test]
    fn json_is_sorted_and_parses() {
        let m = model();
        let rg = build_rg(&m.net, &m.initial, &RgOptions::default()).unwrap();
        let text = rg_json(&m.net, &rg);
        let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), rg.state_count() + rg.edge_count());
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("{\"dead\":false,\"graph\":"), "{}", first);
        assert_eq!(lines.iter().filter(|v| v["dead"] == json!(true)).count(), 1);
        assert_eq!(text, rg_json(&m.net, &build_rg(&m.net, &m.initial, &RgOptions::default()).unwrap()));
    }
}
