use super::*;
use crate::bag::{Bag, ClassId};
use crate::frontend::{parse_bag, parse_model, Model};
use crate::model::PlaceId;

const G0: &str = "graph { node 1; node 2; node 3; node 4; edge 1 2; edge 1 3; edge 4 1; }";

fn model(rules: &str) -> Model {
    parse_model(&format!("{} {}", rules, G0)).unwrap()
}

fn r1(net: &Net, a: u32, b: u32, c: u32) -> Instance {
    let nd = |i: u32| Colour::new(ClassId(0), i - 1);
    Instance::new(net.transition_id("R1").unwrap(), vec![nd(a), nd(b), nd(c)])
}

fn edge_bag(net: &Net, text: &str) -> Bag {
    parse_bag(text, net, &net.place(PlaceId(1)).domain).unwrap()
}

#[test]
fn enabling_on_g0() {
    let m = model("rule R1; rule R3;");
    assert!(enabled(&m.net, &m.initial, &r1(&m.net, 4, 1, 2)).unwrap());
    assert!(!enabled(&m.net, &m.initial, &r1(&m.net, 1, 4, 2)).unwrap());
}

#[test]
fn empty_inhibitor_is_vacuous() {
    let m = parse_model("class N = 2; place P : N; trans T(n1); arc in P -> T : <n1>; marking P = <nd1>;").unwrap();
    let t = m.net.transition_id("T").unwrap();
    assert!(enabled(&m.net, &m.initial, &Instance::new(t, vec![Colour::new(ClassId(0), 0)])).unwrap());
}

#[test]
fn firing_markings_i_and_ii() {
    let m = model("rule R1; rule R3;");
    let net = &m.net;
    let i = fire(net, &m.initial, &r1(net, 4, 1, 2)).unwrap();
    assert_eq!(*i.get(PlaceId(1)), edge_bag(net, "<nd1,nd2> + <nd1,nd3> + <nd4,nd1> + <nd4,nd2>"));
    let ii = fire(net, &m.initial, &r1(net, 4, 1, 3)).unwrap();
    assert_eq!(*ii.get(PlaceId(1)), edge_bag(net, "<nd1,nd2> + <nd1,nd3> + <nd4,nd1> + <nd4,nd3>"));
    assert!(!enabled(net, &i, &r1(net, 4, 1, 2)).unwrap());
    assert!(matches!(fire(net, &i, &r1(net, 4, 1, 2)), Err(EngineError::Disabled(_))));
}

#[test]
fn enumeration_modes_agree_on_g0() {
    let m = model("rule R1; rule R2; rule R3; rule R4; rule R5; rule R6;");
    let a = enabled_instances(&m.net, &m.initial, Enumeration::Matching).unwrap();
    let b = enabled_instances(&m.net, &m.initial, Enumeration::Exhaustive).unwrap();
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn rg_of_rules_one_and_three() {
    let m = model("rule R1; rule R3;");
    let rg = build_rg(&m.net, &m.initial, &RgOptions::default()).unwrap();
    assert_eq!(rg.state_count(), 16);
    assert_eq!(rg.dead_states().len(), 1);
    let dead = &rg.states[rg.dead_states()[0]];
    let expected = "<nd1,nd2> + <nd1,nd3> + <nd4,nd1> + <nd4,nd2> + <nd4,nd3> + <nd2,nd2> + <nd3,nd3>";
    assert_eq!(*dead.get(PlaceId(1)), edge_bag(&m.net, expected));
    assert!(rg.states.iter().all(|s| s.get(PlaceId(0)) == m.initial.get(PlaceId(0))));
}

#[test]
fn rg_is_deterministic_across_workers() {
    let m = model("rule R1; rule R3;");
    let one = build_rg(&m.net, &m.initial, &RgOptions { workers: 1, ..Default::default() }).unwrap();
    let four = build_rg(&m.net, &m.initial, &RgOptions { workers: 4, ..Default::default() }).unwrap();
    assert_eq!(one, four);
}

#[test]
fn cap_truncates() {
    let m = model("rule R1; rule R3;");
    let rg = build_rg(&m.net, &m.initial, &RgOptions { cap: 5, ..Default::default() }).unwrap();
    assert!(rg.truncated);
    assert_eq!(rg.state_count(), 5);
}

#[test]
fn invariant_hook_aborts() {
    let m = model("rule R1;");
    let hook: Invariant = std::sync::Arc::new(|_, s: &Marking| {
        if s.get(PlaceId(1)).support_len() > 4 {
            Err("too many edges".into())
        } else {
            Ok(())
        }
    });
    let err = build_rg(&m.net, &m.initial, &RgOptions { invariant: Some(hook), ..Default::default() }).unwrap_err();
    assert!(matches!(err, EngineError::Invariant { .. }));
}

#[test]
fn no_rules_single_state() {
    let m = parse_model(&format!("class N = 8; place Node : N; place Edge : N*N; {}", G0)).unwrap();
    let rg = build_rg(&m.net, &m.initial, &RgOptions::default()).unwrap();
    assert_eq!((rg.state_count(), rg.edge_count(), rg.dead_states()), (1, 0, vec![0]));
}
