//! Calculus operators on arc functions, checked against brute force.

use sn_gts::bag::{ClassId, Domain};
use sn_gts::calculus::oracle::{disagreement, TermExpr};
use sn_gts::calculus::to_arc;
use sn_gts::frontend::{parse_expr, print_expr, Signature};
use sn_gts::model::ColourClass;

fn arc(text: &str, from: usize, to: usize) -> TermExpr {
    let classes = [ColourClass::new("N", 8)];
    let vars = (1..=from).map(|i| (format!("n{}", i), ClassId(0))).collect();
    TermExpr::arc(parse_expr(text, &Signature::new(&classes, vars, Domain(vec![ClassId(0); to]))).unwrap(), from, to)
}

fn main() {
    let classes = [ColourClass::new("N", 8)];
    let show = |e: &TermExpr| {
        let t = e.normalize().unwrap();
        let (k, m) = e.signature();
        let vars = (1..=k).map(|i| (format!("n{}", i), ClassId(0))).collect();
        let text = print_expr(&to_arc(&t), &Signature::new(&classes, vars, Domain(vec![ClassId(0); m])));
        let n = e.size_rule();
        println!("{}  (agrees at |N|={}: {})", text, n, disagreement(&t, &e.oracle(n).unwrap(), n).is_none());
    };
    // who adds edge <a,b>: R1 instances <a,*,b>
    show(&arc("<n1,n3>", 3, 2).transpose());
    show(&arc("<n1,All-n1>", 1, 2).support().transpose());
    show(&arc("<n1,All,n2>", 2, 3).compose(arc("<n1,All>", 1, 2)));
    show(&arc("<n1,All>", 1, 2).difference(arc("<n1,n1>", 1, 2)));
}
