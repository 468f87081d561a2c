//! Symbolic markings and the symmetry-reduced graph.

use sn_gts::engine::RgOptions;
use sn_gts::frontend::parse_model;
use sn_gts::symbolic::{build_srg, canonicalize, to_symbolic};

fn main() {
    let m = parse_model(include_str!("../models/r1r3_g0.sn")).unwrap();
    let net = &m.net;
    let sm = to_symbolic(net, &m.initial).unwrap();
    println!("{}", sm.display(net));
    println!("stands for {} markings at |N| = {}", sm.expand(&[net.classes()[0].size]), net.classes()[0].size);
    println!("automorphisms: {}", canonicalize(net, &m.initial).unwrap().automorphisms);

    let srg = build_srg(net, &m.initial, &RgOptions::default()).unwrap();
    println!("{} symbolic states, {} dead", srg.state_count(), srg.dead_states().len());
    for e in srg.edges.iter().filter(|e| e.fold > 1) {
        println!("s{} -> s{} by {} folds {}", e.source, e.target, e.instance.label(net), e.fold);
    }
}
