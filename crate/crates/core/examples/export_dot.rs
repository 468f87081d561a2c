//! DOT and JSON-lines output of both graphs.

use sn_gts::engine::{build_rg, RgOptions};
use sn_gts::export::{rg_dot, srg_json};
use sn_gts::frontend::parse_model;
use sn_gts::symbolic::build_srg;

fn main() {
    let m = parse_model(include_str!("../models/r1r3_g0.sn")).unwrap();
    let rg = build_rg(&m.net, &m.initial, &RgOptions::default()).unwrap();
    print!("{}", rg_dot(&m.net, &rg));
    let srg = build_srg(&m.net, &m.initial, &RgOptions::default()).unwrap();
    for line in srg_json(&m.net, &srg).lines().take(3) {
        println!("{}", line);
    }
}
