//! Ordinary reachability graph of {R1, R3} from G0.

use sn_gts::engine::build_rg;
use sn_gts::frontend::parse_model;
use sn_gts::gts::rg_options;

fn main() {
    let m = parse_model(include_str!("../models/r1r3_g0.sn")).unwrap();
    let rg = build_rg(&m.net, &m.initial, &rg_options()).unwrap();
    println!("{} states, {} edges", rg.state_count(), rg.edge_count());
    for s in rg.dead_states() {
        println!("dead s{}: {}", s, rg.states[s].display(&m.net));
    }
}
