//! Structural conflict, causal connection and mutual exclusion.

use sn_gts::calculus::{Calculus, RelationKind};
use sn_gts::frontend::parse_model;

fn main() {
    let net = parse_model("rule R1; rule R3;").unwrap().net;
    let calc = Calculus::new(&net).unwrap();
    let ts: Vec<_> = net.transition_ids().collect();
    for kind in [RelationKind::Sc, RelationKind::Scc, RelationKind::Sme] {
        for &a in &ts {
            for &b in &ts {
                println!("{}", calc.relation(kind, a, b).unwrap().display(&calc));
            }
        }
    }
    let (r1, r3) = (ts[0], ts[1]);
    let inside = calc.subset(&calc.sc(r1, r3).unwrap(), &calc.sme(r1, r3).unwrap()).unwrap();
    println!("SC(R1,R3) within SME(R1,R3): {}", inside);
}
