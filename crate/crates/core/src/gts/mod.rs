//! Graph transformation systems on top of the net layer: graphs are encoded
//! in places `Node : N` and `Edge : N*N`, rules are transitions.

mod assemble;
mod graph;
pub mod rules;

pub use assemble::{assemble, builtin_rule, check_rules, encoding_invariant, lint, rg_options, Assembled, GtsError, GtsModel,
    Rule};
pub use graph::{Graph, GraphError};
pub use rules::{rule_source, RULE_NAMES};

use crate::bag::{Bag, ClassId, Colour, ColourNames, Domain};
use crate::model::{Marking, Net, PlaceId};

/// The two places of a graph encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphPlaces {
    pub class: ClassId,
    pub node: PlaceId,
    pub edge: PlaceId,
}

impl GraphPlaces {
    pub fn of(net: &Net) -> Result<Self, GraphError> {
        let (node, edge) = match (net.place_id("Node"), net.place_id("Edge")) {
            (Some(n), Some(e)) => (n, e),
            _ => return Err(GraphError::MissingPlaces),
        };
        let nd = &net.place(node).domain.0;
        if nd.len() != 1 || net.place(edge).domain.0 != vec![nd[0], nd[0]] {
            return Err(GraphError::MissingPlaces);
        }
        Ok(GraphPlaces { class: nd[0], node, edge })
    }
}

/// Encodes `g`, labelling its i-th node with the i-th colour of `N`.
pub fn encode(net: &Net, g: &Graph) -> Result<Marking, GraphError> {
    let labels: Vec<u32> = (0..g.node_count() as u32).collect();
    encode_with(net, g, &labels)
}

/// Encodes `g` under the injective labelling `labels[i]` (0-based colour
/// index) of node `i`.
pub fn encode_with(net: &Net, g: &Graph, labels: &[u32]) -> Result<Marking, GraphError> {
    let gp = GraphPlaces::of(net)?;
    let size = net.class(gp.class).size;
    if g.node_count() > size as usize {
        return Err(GraphError::TooManyNodes { nodes: g.node_count(), size });
    }
    assert_eq!(labels.len(), g.node_count(), "one label per node");
    let nd = |i: usize| Colour::new(gp.class, labels[i]);
    let mut nodes = Bag::empty(Domain(vec![gp.class]));
    for i in 0..g.node_count() {
        assert!(labels[i] < size && nodes.get(&[nd(i)]) == 0, "labelling must be injective and in range");
        nodes.insert(vec![nd(i)], 1).expect("domain");
    }
    let mut edges = Bag::empty(Domain(vec![gp.class, gp.class]));
    for (a, b) in g.edges() {
        edges.insert(vec![nd(a), nd(b)], 1).expect("domain");
    }
    let mut m = net.empty_marking();
    m.set(gp.node, nodes);
    m.set(gp.edge, edges);
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodingViolation {
    #[error("{place} holds {tuple} with multiplicity {multiplicity}")]
    Multiplicity { place: String, tuple: String, multiplicity: u64 },
    #[error("dangling edge {edge}: {colour} is not in Node")]
    Dangling { edge: String, colour: String },
    #[error(transparent)]
    Places(#[from] GraphError),
}

/// Checks that `m` encodes a simple graph: Node and Edge are sets and every
/// edge endpoint is a node. Other places are ignored.
pub fn check_encoding(net: &Net, m: &Marking) -> Result<(), EncodingViolation> {
    let gp = GraphPlaces::of(net)?;
    for p in [gp.node, gp.edge] {
        for (t, k) in m.get(p).iter() {
            if k > 1 {
                return Err(EncodingViolation::Multiplicity {
                    place: net.place(p).name.clone(),
                    tuple: tuple_text(net, t),
                    multiplicity: k,
                });
            }
        }
    }
    let nodes = m.get(gp.node);
    for (t, _) in m.get(gp.edge).iter() {
        for c in t {
            if nodes.get(&[*c]) == 0 {
                return Err(EncodingViolation::Dangling { edge: tuple_text(net, t), colour: net.colour_name(*c) });
            }
        }
    }
    Ok(())
}

pub fn is_graph_encoding(net: &Net, m: &Marking) -> bool {
    check_encoding(net, m).is_ok()
}

/// The encoded graph; nodes are named after their colours, in colour order.
pub fn decode(net: &Net, m: &Marking) -> Result<Graph, EncodingViolation> {
    check_encoding(net, m)?;
    let gp = GraphPlaces::of(net)?;
    let mut g = Graph::new();
    for (t, _) in m.get(gp.node).iter() {
        g.add_node(&net.colour_name(t[0])).expect("distinct colours");
    }
    for (t, _) in m.get(gp.edge).iter() {
        g.add_edge(&net.colour_name(t[0]), &net.colour_name(t[1])).expect("checked encoding");
    }
    Ok(g)
}

fn tuple_text(net: &Net, t: &[Colour]) -> String {
    let parts: Vec<String> = t.iter().map(|c| net.colour_name(*c)).collect();
    format!("<{}>", parts.join(","))
}

#[cfg(test)]
mod tests;
