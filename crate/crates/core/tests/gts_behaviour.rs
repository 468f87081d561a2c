mod common;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use sn_gts::bag::Colour;
use sn_gts::calculus::Calculus;
use sn_gts::engine::{enabled, enabled_instances, fire, Enumeration, Instance};
use sn_gts::frontend::{parse_instance, parse_model};
use sn_gts::gts::{check_encoding, decode, encode, EncodingViolation, Graph, GraphPlaces};

fn node_count(m: &sn_gts::frontend::Model, s: &sn_gts::model::Marking) -> usize {
    s.get(GraphPlaces::of(&m.net).unwrap().node).support_len()
}

#[test]
fn r2_fires_exactly_on_isolated_nodes() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let p = rng.gen_range(0.0..0.4);
        let g = random_graph(&mut rng, n, p, true);
        let m = system(&["R2"], 6, &g);
        let r2 = m.net.transition_id("R2").unwrap();
        let class = GraphPlaces::of(&m.net).unwrap().class;
        for i in 0..n {
            let isolated = g.in_degree(i) == 0 && g.out_degree(i) == 0;
            let inst = Instance::new(r2, vec![Colour::new(class, i as u32)]);
            assert_eq!(enabled(&m.net, &m.initial, &inst).unwrap(), isolated, "{} node {}", g, i);
        }
    }
}

#[test]
fn r3_fires_exactly_on_sinks() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let p = rng.gen_range(0.0..0.5);
        let g = random_graph(&mut rng, n, p, true);
        let m = system(&["R3"], 6, &g);
        let r3 = m.net.transition_id("R3").unwrap();
        let class = GraphPlaces::of(&m.net).unwrap().class;
        for i in 0..n {
            let inst = Instance::new(r3, vec![Colour::new(class, i as u32)]);
            assert_eq!(enabled(&m.net, &m.initial, &inst).unwrap(), g.out_degree(i) == 0, "{} node {}", g, i);
        }
    }
}

#[test]
fn node_counts_change_as_declared() {
    let delta = [("R1", 0i64), ("R2", -1), ("R3", 0), ("R4", 1), ("R5", -1), ("R6", 1)];
    let mut rng = StdRng::seed_from_u64(4);
    let mut fired = [0usize; 6];
    for _ in 0..400 {
        let n = rng.gen_range(1..=5);
        let p = rng.gen_range(0.1..0.6);
        let g = random_graph(&mut rng, n, p, true);
        let m = system(&["R1", "R2", "R3", "R4", "R5", "R6"], 7, &g);
        let before = node_count(&m, &m.initial);
        for i in enabled_instances(&m.net, &m.initial, Enumeration::Matching).unwrap() {
            let name = &m.net.transition(i.transition).name;
            let k = delta.iter().position(|(r, _)| r == name).unwrap();
            let after = node_count(&m, &fire(&m.net, &m.initial, &i).unwrap());
            assert_eq!(after as i64 - before as i64, delta[k].1, "{} on {}", i.label(&m.net), g);
            fired[k] += 1;
        }
    }
    assert!(fired.iter().all(|f| *f > 0), "{:?}", fired);
}

#[test]
fn closure_of_g0() {
    let m = system(&["R1"], 4, &g0());
    let rg = sn_gts::engine::build_rg(&m.net, &m.initial, &Default::default()).unwrap();
    let dead = rg.dead_states();
    assert_eq!(dead.len(), 1);
    assert_eq!(decode(&m.net, &rg.states[dead[0]]).unwrap().unnamed(), closure_graph(&g0()).unnamed());
}

#[test]
fn mutated_r1_duplicates_an_edge() {
    let m = parse_model(include_str!("../models/r1_no_inhibitor.sn")).unwrap();
    let i = parse_instance("R1(nd1,nd2,nd3)", &m.net).unwrap();
    let next = fire(&m.net, &m.initial, &i).unwrap();
    match check_encoding(&m.net, &next) {
        Err(EncodingViolation::Multiplicity { tuple, multiplicity, .. }) => {
            assert_eq!((tuple.as_str(), multiplicity), ("<nd1,nd3>", 2));
        }
        other => panic!("{:?}", other),
    }
}

/// In `1->2->4, 1->3->4` both closure steps towards `1->4` are enabled and
/// each one disables the other, though neither inhibits the other's inputs.
#[test]
fn r1_auto_conflict_is_real() {
    let g = Graph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]);
    let m = system(&["R1"], 4, &g);
    let net = &m.net;
    let a = parse_instance("R1(nd1,nd2,nd4)", net).unwrap();
    let b = parse_instance("R1(nd1,nd3,nd4)", net).unwrap();
    assert!(enabled(net, &m.initial, &a).unwrap() && enabled(net, &m.initial, &b).unwrap());
    assert!(!enabled(net, &fire(net, &m.initial, &a).unwrap(), &b).unwrap());
    assert!(!enabled(net, &fire(net, &m.initial, &b).unwrap(), &a).unwrap());

    let calc = Calculus::new(net).unwrap();
    let r1 = net.transition_id("R1").unwrap();
    let (sc, sme) = (calc.sc(r1, r1).unwrap(), calc.sme(r1, r1).unwrap());
    let (x, y) = ([0, 2, 3], [0, 1, 3]);
    assert_eq!(sc.term.eval(&y, &x, 4), 1);
    assert_eq!(sme.term.eval(&y, &x, 4), 0);
    assert!(!calc.subset(&sc, &sme).unwrap());
}

#[test]
fn encodings_round_trip() {
    let mut rng = StdRng::seed_from_u64(5);
    let m = system(&[], 6, &Graph::new());
    for _ in 0..200 {
        let n = rng.gen_range(0..=6);
        let g = random_graph(&mut rng, n, 0.3, true);
        assert_eq!(decode(&m.net, &encode(&m.net, &g).unwrap()).unwrap().unnamed(), g.unnamed());
    }
}
