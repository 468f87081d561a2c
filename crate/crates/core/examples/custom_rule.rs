//! Assembling a system from bundled and inline rules.

use sn_gts::engine::build_rg;
use sn_gts::frontend::parse_graph;
use sn_gts::gts::{assemble, builtin_rule, rg_options, GtsError, GtsModel, Rule};

fn main() {
    // reverses an edge that has no partner
    let flip = Rule::custom(
        "Flip",
        "trans Flip(n1, n2) [n1 != n2];
         arc in Edge -> Flip : <n1,n2>;
         arc out Flip -> Edge : <n2,n1>;
         arc inh Edge -o Flip : <n2,n1>;",
    );
    let g = parse_graph("node a; node b; node c; edge a b; edge b c;").unwrap();
    let gts = GtsModel { rules: vec![flip, builtin_rule("R3").unwrap()], class_size: 3, initial: g };
    let a = assemble(&gts).unwrap();
    let rg = build_rg(&a.model.net, &a.model.initial, &rg_options()).unwrap();
    println!("{} states, {} dead", rg.state_count(), rg.dead_states().len());

    let bad = Rule::custom("Grow", "trans Grow(n1, n2);\narc out Grow -> Edge : <n1,n2>;");
    match assemble(&GtsModel { rules: vec![bad], ..gts }) {
        Err(e @ GtsError::IllDefined(_)) => print!("{}", e),
        other => println!("{:?}", other.map(|_| ())),
    }
}
