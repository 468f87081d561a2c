use super::*;
use crate::frontend::parse_model;

fn g0() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (3, 0)])
}

fn net() -> Net {
    parse_model("rule R1; rule R3;").unwrap().net
}

#[test]
fn encode_g0() {
    let net = net();
    let m = encode(&net, &g0()).unwrap();
    assert_eq!(m.display(&net), "Node = <nd1> + <nd2> + <nd3> + <nd4>; Edge = <nd1,nd2> + <nd1,nd3> + <nd4,nd1>");
    assert!(is_graph_encoding(&net, &m));
    assert_eq!(decode(&net, &m).unwrap().unnamed(), g0());
}

#[test]
fn empty_graph_is_empty_marking() {
    let net = net();
    assert!(encode(&net, &Graph::new()).unwrap().is_empty());
}

#[test]
fn violations() {
    let net = net();
    let gp = GraphPlaces::of(&net).unwrap();
    let nd = |i| Colour::new(gp.class, i);
    let mut m = encode(&net, &Graph::with_nodes(2)).unwrap();
    m.set(gp.edge, Bag::from_entries(Domain(vec![gp.class, gp.class]), [(vec![nd(0), nd(1)], 2)]).unwrap());
    assert!(matches!(check_encoding(&net, &m), Err(EncodingViolation::Multiplicity { .. })));
    let mut m = encode(&net, &Graph::with_nodes(1)).unwrap();
    m.set(gp.edge, Bag::from_entries(Domain(vec![gp.class, gp.class]), [(vec![nd(0), nd(1)], 1)]).unwrap());
    assert!(matches!(check_encoding(&net, &m), Err(EncodingViolation::Dangling { .. })));
    assert!(decode(&net, &m).is_err());
}

#[test]
fn class_too_small() {
    let net = parse_model("class N = 3; rule R2;").unwrap().net;
    assert_eq!(encode(&net, &Graph::with_nodes(4)), Err(GraphError::TooManyNodes { nodes: 4, size: 3 }));
}

#[test]
fn labelling_is_respected() {
    let net = net();
    let m = encode_with(&net, &Graph::from_edges(2, [(0, 1)]), &[5, 2]).unwrap();
    assert_eq!(m.display(&net), "Node = <nd3> + <nd6>; Edge = <nd6,nd3>");
}

fn gts(rules: &[&str], size: u32, g: Graph) -> GtsModel {
    GtsModel { rules: rules.iter().map(|r| builtin_rule(r).unwrap()).collect(), class_size: size, initial: g }
}

#[test]
fn assemble_r1_r3() {
    let a = assemble(&gts(&["R1", "R3"], 8, g0())).unwrap();
    assert_eq!(a.model.net.transitions().len(), 2);
    assert_eq!(a.model.net.places().len(), 2);
    assert!(a.reports.iter().all(|r| r.passes()));
    assert!(a.warnings.is_empty());
    assert_eq!(a.model.initial, encode(&a.model.net, &g0()).unwrap());
    assert_eq!(a.model, parse_model("rule R1; rule R3; graph { node 1; node 2; node 3; node 4; edge 1 2; edge 1 3; edge 4 1; }").unwrap());
}

#[test]
fn assemble_without_rules() {
    let a = assemble(&gts(&[], 8, g0())).unwrap();
    assert!(a.model.net.transitions().is_empty());
    let rg = crate::engine::build_rg(&a.model.net, &a.model.initial, &rg_options()).unwrap();
    assert_eq!(rg.state_count(), 1);
}

#[test]
fn assemble_rejects_ill_defined() {
    let mut m = gts(&["R3"], 8, g0());
    m.rules.push(Rule::custom("Bad", "trans Bad(n1, n2, n3);\narc in Edge -> Bad : <n1,n2> + <n2,n3>;\narc out Bad -> Edge : <n1,n2> + <n2,n3> + <n1,n3>;"));
    match assemble(&m) {
        Err(GtsError::IllDefined(reports)) => {
            assert!(reports[0].passes());
            assert_eq!(reports[1].failed(), vec![5]);
            let text = GtsError::IllDefined(reports).to_string();
            assert!(text.contains("Bad condition 5"), "{}", text);
        }
        other => panic!("{:?}", other),
    }
}

#[test]
fn assemble_rejects_null_rule() {
    let m = GtsModel { rules: vec![Rule::custom("Idle", "trans Idle(n1);\narc inh Node -o Idle : <n1>;")], class_size: 4, initial: Graph::new() };
    assert_eq!(assemble(&m), Err(GtsError::NullRule("Idle".into())));
    let m = GtsModel { rules: vec![Rule::custom("Loop", "trans Loop(n1);\narc in Node -> Loop : <n1>;\narc out Loop -> Node : <n1>;")], class_size: 4, initial: Graph::new() };
    assert_eq!(assemble(&m), Err(GtsError::NullRule("Loop".into())));
}

#[test]
fn growth_warning() {
    let a = assemble(&gts(&["R3", "R4"], 5, g0())).unwrap();
    assert_eq!(a.warnings.len(), 1);
    assert!(a.warnings[0].contains("R4"), "{:?}", a.warnings);
    assert!(assemble(&gts(&["R3", "R4"], 8, g0())).unwrap().warnings.is_empty());
    assert!(assemble(&gts(&["R1", "R3"], 4, g0())).unwrap().warnings.is_empty());
}

#[test]
fn multiplicity_warning() {
    let m = GtsModel {
        rules: vec![Rule::custom("Twice", "trans Twice(n1, n2);\narc in Edge -> Twice : <n1,n2> + <n2,n1>;")],
        class_size: 4,
        initial: Graph::new(),
    };
    let a = assemble(&m).unwrap();
    assert_eq!(a.warnings.len(), 1, "{:?}", a.warnings);
    assert!(a.warnings[0].contains("multiplicity 2"));
}

#[test]
fn debug_invariant_flags_broken_states() {
    let m = parse_model("rule R1; marking Edge = <nd1,nd2>;").unwrap();
    let inv = encoding_invariant();
    assert!(inv(&m.net, &m.initial).unwrap_err().contains("dangling"));
    assert_eq!(rg_options().invariant.is_some(), cfg!(debug_assertions));
}
