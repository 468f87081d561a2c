//! Conditions 1-6 on the bundled rules and on a broken one.

use sn_gts::calculus::check_well_defined;
use sn_gts::frontend::parse_model;

fn main() {
    for text in ["rule R1; rule R2; rule R3; rule R4; rule R5; rule R6;", include_str!("../models/r1_no_inhibitor.sn")] {
        let net = parse_model(text).unwrap().net;
        for t in net.transition_ids() {
            let r = check_well_defined(&net, t).unwrap();
            println!("{}: failed {:?}, NA = {}", r.rule, r.failed(), r.na_text);
            for c in r.conditions.iter().filter(|c| !c.holds) {
                println!("  condition {} witness {}", c.number, c.witness.as_deref().unwrap_or("-"));
            }
        }
    }
}
