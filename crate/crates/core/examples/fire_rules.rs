//! Enabled instances and firing on the encoded graph.

use sn_gts::engine::{enabled_instances, fire, Enumeration};
use sn_gts::frontend::{parse_instance, parse_model};
use sn_gts::gts::decode;

fn main() {
    let m = parse_model(include_str!("../models/r1r3_g0.sn")).unwrap();
    let net = &m.net;
    for i in enabled_instances(net, &m.initial, Enumeration::Matching).unwrap() {
        println!("enabled {}", i.label(net));
    }
    let i = parse_instance("R1(nd4,nd1,nd3)", net).unwrap();
    let next = fire(net, &m.initial, &i).unwrap();
    println!("after {}:", i.label(net));
    print!("{}", decode(net, &next).unwrap());
}
