use proptest::prelude::*;

use super::oracle::{disagreement, tuples, TermExpr};
use super::*;
use crate::frontend::{parse_expr, parse_model};
use crate::gts::rules::rule_source;
use crate::model::{ClassFunction, Elem, FunctionTuple, Guard};

fn names(k: usize) -> Vec<(String, ClassId)> {
    (1..=k).map(|i| (format!("n{}", i), ClassId(0))).collect()
}

fn arc(text: &str, from: usize, to: usize) -> ArcFunctionExpr {
    let classes = vec![ColourClass::new("N", 4)];
    let sig = Signature::new(&classes, names(from), Domain(vec![ClassId(0); to]));
    ArcFunctionExpr(TermExpr::arc(parse_expr(text, &sig).unwrap(), from, to))
}

struct ArcFunctionExpr(TermExpr);

impl ArcFunctionExpr {
    fn term(&self) -> Term {
        self.0.normalize().unwrap()
    }
    fn set(&self) -> Term {
        self.term().support()
    }
}

fn model(rules: &str) -> Net {
    parse_model(rules).unwrap().net
}

fn r1r3() -> Net {
    model("rule R1; rule R3;")
}

fn tid(net: &Net, name: &str) -> TransitionId {
    net.transition_id(name).unwrap()
}

/// Pointwise agreement with the oracle at several sizes.
fn agrees(e: &TermExpr) {
    let t = e.normalize().unwrap();
    for n in 1..=5 {
        let table = e.oracle(n).unwrap();
        assert_eq!(disagreement(&t, &table, n), None, "size {} for {:?}", n, e);
    }
}

#[test]
fn transpose_examples() {
    let w = arc("<n1,n3>", 3, 2).set().transpose();
    assert!(w.equivalent(&arc("<n1,All,n2>", 2, 3).set()).unwrap());
    let loops = arc("<n1,n1>", 1, 2).set().transpose();
    assert!(loops.equivalent(&arc("<n1>[n1 = n2]", 2, 1).set()).unwrap());
    let f = arc("<n1,All-n2> + <n2,n2>", 2, 2);
    assert_eq!(f.term().transpose().transpose(), f.term());
    agrees(&f.0.clone().transpose());
}

#[test]
fn compose_examples() {
    let sc13 = arc("<n1,All,n2>", 2, 3).set().compose(&arc("<n1,All>", 1, 2).set()).unwrap();
    assert!(sc13.equivalent(&arc("<n1,All,All>", 1, 3).set()).unwrap());
    let sc31 = arc("<n1>[n1 = n2]", 2, 1).set().compose(&arc("<n1,n3>", 3, 2).set()).unwrap();
    assert!(sc31.equivalent(&arc("<n1>[n1 = n3]", 3, 1).set()).unwrap());
    let null = arc("<n1,All,n2>", 2, 3).set().compose(&Term::null(1, 2, TermKind::Set)).unwrap();
    assert!(null.cells.is_empty());
    agrees(&arc("<n1,All,n2>", 2, 3).0.compose(arc("<n1,All> + <All,n1>", 1, 2).0));
}

#[test]
fn emptiness_and_support() {
    let f = arc("<n1,All> + <n2,n3>", 3, 2).term();
    assert!(f.difference(&f).unwrap().is_empty());
    let all = arc("<All,All>", 3, 2).term();
    let e = arc("<n1,n3>", 3, 2).term();
    assert!(!all.difference(&e).unwrap().is_empty());
    assert!(e.difference(&all).unwrap().is_empty());
    assert!(arc("2*<n1,All>", 1, 2).set().equivalent(&arc("<n1,All>", 1, 2).set()).unwrap());
    assert_eq!(arc("2*<n1,All>", 1, 2).term().max_multiplicity(), 2);
}

#[test]
fn hidden_variable_needs_room() {
    // x -> ⋃ { <y> : y ∉ {x1, x2} } is empty on a class of two colours
    let e = arc("<All-n1-n2>[n1 != n2]", 2, 1).0.transpose().transpose();
    let c = arc("<n1>", 1, 1).0.compose(e);
    let t = c.normalize().unwrap();
    assert!(t.is_empty_at(2) && !t.is_empty_at(3) && !t.is_empty());
    agrees(&c);
}

#[test]
fn added_and_removed_by() {
    let net = r1r3();
    let calc = Calculus::new(&net).unwrap();
    let (r1, r3) = (tid(&net, "R1"), tid(&net, "R3"));
    let edge = net.place_id("Edge").unwrap();
    let node = net.place_id("Node").unwrap();
    assert!(calc.added_by(r1, edge).unwrap().equivalent(&arc("<n1,All,n2>", 2, 3).set()).unwrap());
    assert!(calc.added_by(r3, edge).unwrap().equivalent(&arc("<n1>[n1 = n2]", 2, 1).set()).unwrap());
    for t in [r1, r3] {
        for p in [edge, node] {
            assert!(calc.removed_by(t, p).unwrap().cells.is_empty());
        }
    }
    assert_eq!(calc.print(&calc.added_by(r1, edge).unwrap()), "<n1,All,n2>");
    assert_eq!(calc.print(&calc.added_by(r3, edge).unwrap()), "<n1>[n1 = n2]");
}

#[test]
fn relations_between_r1_and_r3() {
    let net = r1r3();
    let calc = Calculus::new(&net).unwrap();
    let (r1, r3) = (tid(&net, "R1"), tid(&net, "R3"));
    let sc13 = calc.sc(r1, r3).unwrap();
    let sc31 = calc.sc(r3, r1).unwrap();
    let sme13 = calc.sme(r1, r3).unwrap();
    let sme31 = calc.sme(r3, r1).unwrap();
    assert!(sc13.term.equivalent(&arc("<n1,All,All>", 1, 3).set()).unwrap());
    assert!(sc31.term.equivalent(&arc("<n1>[n1 = n3]", 3, 1).set()).unwrap());
    assert!(sme13.term.equivalent(&arc("<All,n1,All> + <n1,All,All>", 1, 3).set()).unwrap());
    assert!(sme31.term.equivalent(&arc("<n1> + <n2>", 3, 1).set()).unwrap());
    assert!(sme31.term.transpose().equivalent(&sme13.term).unwrap());
    assert_eq!(sc13.display(&calc).to_string(), "SC(R1,R3) = <n1,All,All>");
    assert_eq!(calc.print(&sc31.term), "<n1>[n1 = n3]");
    for (a, b) in [(&sc13, &sme13), (&sc31, &sme31)] {
        assert!(calc.subset(a, b).unwrap());
        assert!(!calc.subset(b, a).unwrap());
    }
    let scc31 = calc.scc(r3, r1).unwrap();
    assert!(scc31.term.equivalent(&arc("<n1>[n1 = n2] + <n2>[n2 = n3]", 3, 1).set()).unwrap());
}

#[test]
fn auto_relations_of_r1() {
    let net = r1r3();
    let calc = Calculus::new(&net).unwrap();
    let r1 = tid(&net, "R1");
    let sme = calc.sme(r1, r1).unwrap();
    let expected = arc("<n2,All,n3> + <n1,All,n2> + <n1,n3,All> + <All,n1,n3>", 3, 3).set();
    assert!(sme.term.equivalent(&expected).unwrap());
    let sc = calc.sc(r1, r1).unwrap();
    assert!(sc.term.equivalent(&arc("<n1,All-n2,n3>", 3, 3).set()).unwrap());
    // R1(n1,y,n3) adds <n1,n3>, inhibiting R1(n1,n2,n3), and both can be enabled together
    assert!(!calc.subset(&sc, &sme).unwrap());
    // the four-summand form with its case split
    let split = "<n1,All-n2,n2> + <n1,All-n1,n3>[n1 = n2] + <n2,All,n3>[n1 != n2] + <n1,n2,n2>[n2 != n3]";
    let scc = calc.scc(r1, r1).unwrap().term.difference(&Term::identity(3)).unwrap();
    assert!(scc.equivalent(&arc(split, 3, 3).set()).unwrap());
}

#[test]
fn r3_auto_conflict_subtracts_the_instance() {
    let net = r1r3();
    let calc = Calculus::new(&net).unwrap();
    let r3 = tid(&net, "R3");
    let sc = calc.sc(r3, r3).unwrap();
    // brute force: R3(c) adds <c,c>; R3(c') is inhibited by <c',*>; exclude c == c'
    for n in 2..=5 {
        for x in tuples(1, n) {
            for y in tuples(1, n) {
                assert_eq!(sc.term.eval(&x, &y, n), 0);
            }
        }
    }
    assert!(sc.term.is_empty());
}

#[test]
fn sme_rejects_multiset_inputs() {
    let net = model("class N = 4; place Node : N; place Edge : N*N; trans T(n1); arc in Edge -> T : 2*<n1,n1>; arc inh Node -o T : <n1>;");
    let calc = Calculus::new(&net).unwrap();
    let t = tid(&net, "T");
    assert!(matches!(calc.sme(t, t), Err(CalculusError::Unsupported(_))));
}

#[test]
fn viable_inputs_of_r1_exclude_the_triple_loop() {
    let net = r1r3();
    let calc = Calculus::new(&net).unwrap();
    let v = calc.viable_inputs(tid(&net, "R1")).unwrap();
    // n1 = n2 or n2 = n3 makes the required edge the inhibiting one
    assert_eq!(v.into_iter().collect::<Vec<_>>(), [vec![0, 1, 0], vec![0, 1, 2]]);
}

#[test]
fn ordered_classes_are_rejected() {
    let net = model("class N = 3 ordered; place P : N; trans T(n1); arc in P -> T : <n1>;");
    assert!(matches!(Calculus::new(&net), Err(CalculusError::Unsupported(_))));
}

fn wd(src: &str) -> WellDefinedness {
    let net = model(&format!("class N = 8; place Node : N; place Edge : N*N; {}", src));
    let t = net.transition_ids().next().unwrap();
    check_well_defined(&net, t).unwrap()
}

#[test]
fn bundled_rules_are_well_defined() {
    for name in ["R1", "R2", "R3", "R4", "R5", "R6"] {
        let r = wd(rule_source(name).unwrap());
        assert!(r.passes(), "{} fails {:?}", name, r.conditions);
    }
    let r4 = wd(rule_source("R4").unwrap());
    assert_eq!(r4.na_text, "<n2>");
    assert!(wd(rule_source("R1").unwrap()).na.is_empty());
}

#[test]
fn mutations_fail_their_condition() {
    let cases = [
        ("R2", "<n1,All> + <All-n1,n1>", "<n1,All> + <All,n1>", 1),
        ("R1", "<n1,n2> + <n2,n3> + <n1,n3>", "<n1,n2> + <n2,n3> + 2*<n1,n3>", 2),
        ("R4", "arc inh Node -o R4 : <n2>;", "", 3),
        ("R4", "arc out R4 -> Node : <n2>;", "", 4),
        ("R1", "arc inh Edge -o R1 : <n1,n3>;", "", 5),
        ("R5", " + <All-n1-n2,n2>", "", 6),
    ];
    for (rule, from, to, cond) in cases {
        let src = rule_source(rule).unwrap();
        assert!(src.contains(from));
        let r = wd(&src.replace(from, to));
        assert_eq!(r.failed(), vec![cond], "{} mutated: {:?}", rule, r.conditions);
        assert!(r.conditions[cond as usize - 1].witness.is_some());
    }
}

#[test]
fn foreign_places_are_rejected() {
    let net = model("class N = 4; place Node : N; place Edge : N*N; place X : N; trans T(n1); arc in X -> T : <n1>;");
    assert!(matches!(check_well_defined(&net, tid(&net, "T")), Err(CalculusError::ForeignPlace(_))));
}

#[test]
fn printed_terms_reparse() {
    let net = model("rule R1; rule R2; rule R3; rule R4; rule R5; rule R6;");
    let calc = Calculus::new(&net).unwrap();
    for t in net.transition_ids() {
        for t2 in net.transition_ids() {
            for kind in [RelationKind::Sc, RelationKind::Scc, RelationKind::Sme] {
                let r = calc.relation(kind, t, t2).unwrap();
                let text = calc.print(&r.term);
                let back = arc(&text, r.term.from, r.term.to).set();
                assert!(back.equivalent(&r.term).unwrap(), "{} printed as {}", r.display(&calc), text);
            }
        }
    }
}

#[test]
fn multiset_terms_print_by_level() {
    let t = arc("2*<n1,All> + <n1,n1>", 1, 2).term();
    let names = names(1);
    let classes = vec![ColourClass::new("N", 4)];
    let sig = Signature::new(&classes, names, Domain(vec![ClassId(0); 2]));
    let text = print_expr(&to_arc(&t), &sig);
    assert_eq!(arc(&text, 1, 2).term(), t, "{}", text);
}

fn arb_class_function(k: usize) -> impl Strategy<Value = ClassFunction> {
    prop_oneof![
        (0..k).prop_map(ClassFunction::proj),
        Just(ClassFunction::all()),
        (0..k).prop_map(|v| ClassFunction::all_but(&[v])),
        (0..k, 0..k).prop_map(|(a, b)| ClassFunction { terms: vec![(1, Elem::Proj(a)), (1, Elem::Proj(b))] }),
    ]
}

fn arb_guard(k: usize) -> impl Strategy<Value = Option<Guard>> {
    prop_oneof![
        Just(None),
        (0..k, 0..k).prop_map(|(a, b)| Some(Guard::Eq(a, b))),
        (0..k, 0..k).prop_map(|(a, b)| Some(Guard::Neq(a, b))),
    ]
}

/// Arc functions `N^k -> Bag[N^m]` without negative values.
pub(crate) fn arb_arc(k: usize, m: usize) -> impl Strategy<Value = TermExpr> {
    prop::collection::vec((1u64..=2, prop::collection::vec(arb_class_function(k), m), arb_guard(k)), 1..=2).prop_map(
        move |ts| {
            let f = crate::model::ArcFunction {
                terms: ts
                    .into_iter()
                    .map(|(l, cs, g)| {
                        let t = FunctionTuple::new(cs);
                        (l, match g {
                            Some(g) => t.with_filter(g),
                            None => t,
                        })
                    })
                    .collect(),
            };
            TermExpr::arc(f, k, m)
        },
    )
}

/// Random expressions of signature `k -> m`.
pub(crate) fn arb_expr(k: usize, m: usize, depth: u32) -> BoxedStrategy<TermExpr> {
    let leaf = arb_arc(k, m).boxed();
    if depth == 0 {
        return leaf;
    }
    let d = depth - 1;
    prop_oneof![
        2 => leaf,
        1 => arb_expr(k, m, d).prop_map(TermExpr::support),
        1 => arb_expr(m, k, d).prop_map(TermExpr::transpose),
        1 => (arb_expr(k, m, d), arb_expr(k, m, d)).prop_map(|(a, b)| a.sum(b)),
        1 => (arb_expr(k, m, d), arb_expr(k, m, d)).prop_map(|(a, b)| a.difference(b)),
        1 => (arb_expr(k, m, d), arb_expr(k, m, d)).prop_map(|(a, b)| a.support().difference(b.support())),
        2 => (1usize..=2).prop_flat_map(move |j| (arb_expr(j, m, d), arb_expr(k, j, d)))
            .prop_map(|(g, f)| g.compose(f)),
    ]
    .boxed()
}

#[test]
fn relations_match_concrete_oracle() {
    let opts = crate::frontend::ParseOptions { class_sizes: [("N".to_string(), 4)].into(), file: None };
    let text: String = crate::gts::RULE_NAMES.iter().map(|r| format!("rule {};", r)).collect();
    let net = crate::frontend::parse_model_with(&text, &opts).unwrap().net;
    let calc = Calculus::new(&net).unwrap();
    let ids: Vec<TransitionId> = net.transition_ids().collect();
    for kind in [RelationKind::Sc, RelationKind::Scc, RelationKind::Sme] {
        for &t in &ids {
            for &t2 in &ids {
                let r = match calc.relation(kind, t, t2) {
                    Ok(r) => r,
                    Err(CalculusError::Unsupported(_)) if kind == RelationKind::Sme => continue,
                    Err(e) => panic!("{:?}", e),
                };
                let concrete = oracle::relation_oracle(&net, kind, t, t2).unwrap();
                for y in tuples(r.term.from, 4) {
                    for x in tuples(r.term.to, 4) {
                        let cy: Vec<crate::bag::Colour> = y.iter().map(|i| crate::bag::Colour::new(calc.class(), *i)).collect();
                        let cx: Vec<crate::bag::Colour> = x.iter().map(|i| crate::bag::Colour::new(calc.class(), *i)).collect();
                        let want = concrete.get(&cy).is_some_and(|s| s.contains(&cx));
                        assert_eq!(r.term.eval(&y, &x, 4) > 0, want, "{:?} {:?} {:?} {:?} {:?}", kind, t, t2, y, x);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_matches_oracle(e in (1usize..=2, 1usize..=2).prop_flat_map(|(k, m)| arb_expr(k, m, 2))) {
        let t = match e.normalize() {
            Ok(t) => t,
            Err(CalculusError::KindMismatch) | Err(CalculusError::NegativeCoefficient(_)) => return Ok(()),
            Err(err) => panic!("{}", err),
        };
        for n in 1..=4 {
            let table = e.oracle(n).unwrap();
            prop_assert_eq!(disagreement(&t, &table, n), None);
        }
        let n = e.size_rule();
        prop_assert_eq!(t.is_empty(), e.oracle(n).unwrap().is_empty());
    }
}
