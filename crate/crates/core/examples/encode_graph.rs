//! Graph <-> marking encoding and the graph-encoding predicate.

use sn_gts::frontend::{parse_bag, parse_graph, parse_model};
use sn_gts::gts::{check_encoding, decode, encode};

fn main() {
    let net = parse_model("class N = 6; rule R1;").unwrap().net;
    let g = parse_graph("node a; node b; node c; node d; edge a b; edge a c; edge d a;").unwrap();
    let m = encode(&net, &g).unwrap();
    println!("{}", m.display(&net));
    print!("{}", decode(&net, &m).unwrap());

    let edge = net.place_id("Edge").unwrap();
    let mut broken = m.clone();
    broken.set(edge, parse_bag("<nd1,nd2> + <nd1,nd6>", &net, &net.place(edge).domain).unwrap());
    println!("{}", check_encoding(&net, &broken).unwrap_err());
}
