use crate::bag::ClassId;
use crate::model::{ArcFunction, ClassFunction, ColourClass, Elem, FunctionTuple, Guard, Net};

use super::parser::infer_class;
use super::{kind_keyword, Model, Signature};

#[derive(PartialEq, PartialOrd)]
enum Level {
    Or,
    And,
    Unary,
}

pub fn print_guard(g: &Guard, classes: &[ColourClass], vars: &[(String, ClassId)]) -> String {
    let mut s = String::new();
    guard_into(&mut s, g, Level::Or, classes, vars);
    s
}

fn guard_into(s: &mut String, g: &Guard, level: Level, classes: &[ColourClass], vars: &[(String, ClassId)]) {
    let name = |i: usize| vars[i].0.as_str();
    match g {
        Guard::True => s.push_str("true"),
        Guard::False => s.push_str("false"),
        Guard::Eq(a, b) => s.push_str(&format!("{} = {}", name(*a), name(*b))),
        Guard::Neq(a, b) => s.push_str(&format!("{} != {}", name(*a), name(*b))),
        Guard::In(a, q) => {
            s.push_str(&format!("{} in {}", name(*a), classes[vars[*a].1 .0].subclasses[*q].0));
        }
        Guard::SameSubclass(a, b) => s.push_str(&format!("same({}, {})", name(*a), name(*b))),
        Guard::Not(inner) => {
            s.push('!');
            if matches!(**inner, Guard::Not(_)) {
                guard_into(s, inner, Level::Unary, classes, vars);
            } else {
                s.push('(');
                guard_into(s, inner, Level::Or, classes, vars);
                s.push(')');
            }
        }
        Guard::And(a, b) | Guard::Or(a, b) => {
            let (own, op) = if matches!(g, Guard::And(..)) { (Level::And, " && ") } else { (Level::Or, " || ") };
            let paren = level > own;
            if paren {
                s.push('(');
            }
            let right = if own == Level::And { Level::Unary } else { Level::And };
            guard_into(s, a, if own == Level::And { Level::And } else { Level::Or }, classes, vars);
            s.push_str(op);
            guard_into(s, b, right, classes, vars);
            if paren {
                s.push(')');
            }
        }
    }
}

pub fn print_class_function(
    f: &ClassFunction,
    class: ClassId,
    classes: &[ColourClass],
    vars: &[(String, ClassId)],
) -> String {
    let mut s = String::new();
    for (i, (alpha, e)) in f.terms.iter().enumerate() {
        if *alpha < 0 {
            s.push('-');
        } else if i > 0 {
            s.push_str(if matches!(e, Elem::Succ(_)) { "+ " } else { "+" });
        }
        let k = alpha.unsigned_abs();
        if k != 1 {
            s.push_str(&format!("{}*", k));
        }
        match e {
            Elem::Proj(v) => s.push_str(&vars[*v].0),
            Elem::Succ(v) => {
                s.push_str("++");
                s.push_str(&vars[*v].0);
            }
            Elem::Subclass(q) => s.push_str(&classes[class.0].subclasses[*q].0),
            Elem::All => s.push_str("All"),
        }
    }
    s
}

fn tuple_into(s: &mut String, t: &FunctionTuple, sig: &Signature) {
    if let Some(g) = &t.cofilter {
        s.push('[');
        s.push_str(&print_guard(g, sig.classes, &sig.positions()));
        s.push(']');
    }
    s.push('<');
    let comps: Vec<String> = t
        .components
        .iter()
        .zip(&sig.codomain.0)
        .map(|(f, c)| print_class_function(f, *c, sig.classes, &sig.vars))
        .collect();
    s.push_str(&comps.join(","));
    s.push('>');
    if let Some(g) = &t.filter {
        s.push('[');
        s.push_str(&print_guard(g, sig.classes, &sig.vars));
        s.push(']');
    }
}

pub fn print_expr(f: &ArcFunction, sig: &Signature) -> String {
    if f.is_null() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (lambda, t)) in f.terms.iter().enumerate() {
        if i > 0 {
            s.push_str(" + ");
        }
        if *lambda != 1 {
            s.push_str(&lambda.to_string());
        }
        tuple_into(&mut s, t, sig);
    }
    s
}

fn class_decl(c: &ColourClass) -> String {
    if c.subclasses.is_empty() {
        format!("class {} = {}{};", c.name, c.size, if c.ordered { " ordered" } else { "" })
    } else {
        let subs: Vec<String> = c.subclasses.iter().map(|(n, k)| format!("{}:{}", n, k)).collect();
        format!("class {} = {};", c.name, subs.join(" + "))
    }
}

fn domain_text(net: &Net, d: &crate::bag::Domain) -> String {
    d.0.iter().map(|c| net.class(*c).name.as_str()).collect::<Vec<_>>().join("*")
}

/// The model as DSL text; `parse_model` reads it back to an equal model.
pub fn print_model(model: &Model) -> String {
    let net = &model.net;
    let mut out = Vec::new();
    for c in net.classes() {
        out.push(class_decl(c));
    }
    for p in net.places() {
        out.push(format!("place {} : {};", p.name, domain_text(net, &p.domain)));
    }
    for t in net.transition_ids() {
        let tr = net.transition(t);
        let params: Vec<String> = tr
            .vars
            .iter()
            .map(|v| match infer_class(net.classes(), &v.name) {
                Some(c) if c == v.class => v.name.clone(),
                _ => format!("{}:{}", v.name, net.class(v.class).name),
            })
            .collect();
        let mut line = format!("trans {}", tr.name);
        if !params.is_empty() {
            line.push_str(&format!("({})", params.join(", ")));
        }
        if !tr.guard.is_true() {
            let vars: Vec<(String, ClassId)> = tr.vars.iter().map(|v| (v.name.clone(), v.class)).collect();
            line.push_str(&format!(" [{}]", print_guard(&tr.guard, net.classes(), &vars)));
        }
        line.push(';');
        out.push(line);
    }
    for t in net.transition_ids() {
        for (kind, p, f) in net.arcs_of(t) {
            let sig = Signature::of_arc(net, t, p);
            let (pn, tn) = (&net.place(p).name, &net.transition(t).name);
            let head = match kind {
                crate::model::ArcKind::Input => format!("{} -> {}", pn, tn),
                crate::model::ArcKind::Output => format!("{} -> {}", tn, pn),
                crate::model::ArcKind::Inhibitor => format!("{} -o {}", pn, tn),
            };
            out.push(format!("arc {} {} : {};", kind_keyword(kind), head, print_expr(f, &sig)));
        }
    }
    for p in net.place_ids() {
        let b = model.initial.get(p);
        if !b.is_empty() {
            out.push(format!("marking {} = {};", net.place(p).name, b.display(net)));
        }
    }
    let mut s = out.join("\n");
    s.push('\n');
    s
}
